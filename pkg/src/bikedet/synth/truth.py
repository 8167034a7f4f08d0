"""Ground-truth tracks of rendered actors and their CSV form."""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..errors import BikedetError, ParseError
from ..geometry import BBox

TRUTH_HEADER = ["frame", "actor_id", "class", "x", "y", "w", "h"]


@dataclass(frozen=True)
class TruthTrack:
    """One actor: its class and its box in every frame where it is visible."""

    actor_id: int
    cls: str
    boxes: Dict[int, BBox] = field(default_factory=dict)

    @property
    def frames(self) -> List[int]:
        return sorted(self.boxes)

    @property
    def is_bicycle(self) -> bool:
        return self.cls == "bicycle"


@dataclass(frozen=True)
class GroundTruth:
    """All actor tracks of a scene plus the scene length in frames."""

    length: int
    tracks: Tuple[TruthTrack, ...] = ()

    def bicycles(self) -> List[TruthTrack]:
        return [t for t in self.tracks if t.is_bicycle]

    def boxes_at(self, frame: int) -> Iterator[Tuple[TruthTrack, BBox]]:
        for track in self.tracks:
            box = track.boxes.get(frame)
            if box is not None:
                yield track, box

    def count(self, cls: str) -> int:
        return sum(1 for t in self.tracks if t.cls == cls)


def write_truth_csv(truth: GroundTruth, path: Union[str, Path]) -> None:
    """One row per visible actor per frame, ordered by frame then actor id."""
    rows = []
    for track in truth.tracks:
        for frame, box in track.boxes.items():
            rows.append((frame, track.actor_id, track.cls, box))
    rows.sort(key=lambda r: (r[0], r[1]))
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TRUTH_HEADER)
            for frame, actor_id, cls, box in rows:
                writer.writerow(
                    [frame, actor_id, cls, int(box.x), int(box.y), int(box.w), int(box.h)]
                )
    except OSError as e:
        raise BikedetError(f"cannot write {path}: {e}") from e


def read_truth_csv(path: Union[str, Path], length: Optional[int] = None) -> GroundTruth:
    """
    Read a truth CSV.

    Args:
        path: CSV written by `write_truth_csv`
        length: Scene length in frames; defaults to one past the last listed frame
    """
    tracks: Dict[int, TruthTrack] = {}
    last = -1
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = [c for c in TRUTH_HEADER if c not in (reader.fieldnames or [])]
            if missing:
                raise ParseError(f"{path}: missing columns {', '.join(missing)}")
            for line_no, record in enumerate(reader, start=2):
                try:
                    frame = int(record["frame"])
                    actor_id = int(record["actor_id"])
                    box = BBox(*(int(record[k]) for k in ("x", "y", "w", "h")))
                except (TypeError, ValueError) as e:
                    raise ParseError(f"{path}, line {line_no}: {e}") from e
                track = tracks.setdefault(actor_id, TruthTrack(actor_id, record["class"]))
                track.boxes[frame] = box
                last = max(last, frame)
    except OSError as e:
        raise BikedetError(f"cannot read {path}: {e}") from e
    return GroundTruth(
        length=length if length is not None else last + 1,
        tracks=tuple(tracks[k] for k in sorted(tracks)),
    )
