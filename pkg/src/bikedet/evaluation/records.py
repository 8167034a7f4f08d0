"""Detection records and trails as CSV."""

import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from ..errors import BikedetError, ParseError
from ..geometry import BBox
from ..tracking import DetectionRecord

RECORDS_HEADER = ["track_id", "first_frame", "last_frame", "M", "M_b", "decision", "COF"]
TRAILS_HEADER = ["track_id", "frame", "x", "y", "w", "h"]
RECORDS_NAME = "records.csv"
TRAILS_NAME = "trails.csv"

BICYCLE = "bicycle"
NOT_BICYCLE = "not_bicycle"


def _number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def write_records(
    records: Sequence[DetectionRecord],
    path: Union[str, Path],
    trails_path: Union[str, Path, None] = None,
) -> None:
    """
    Write terminal records, and optionally their trails.

    COF is written with six decimals; rows follow the order of `records`.
    """
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(RECORDS_HEADER)
            for r in records:
                writer.writerow(
                    [
                        r.track_id,
                        r.first_frame,
                        r.last_frame,
                        r.M,
                        r.M_b,
                        BICYCLE if r.decision else NOT_BICYCLE,
                        f"{r.cof:.6f}",
                    ]
                )
        if trails_path is not None:
            with open(trails_path, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(TRAILS_HEADER)
                for r in records:
                    for frame, box in r.trail:
                        writer.writerow([r.track_id, frame, *(_number(v) for v in box)])
    except OSError as e:
        raise BikedetError(f"cannot write records: {e}") from e


def _read_rows(path: Union[str, Path], header: Sequence[str]) -> List[dict]:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = [c for c in header if c not in (reader.fieldnames or [])]
            if missing:
                raise ParseError(f"{path}: missing columns {', '.join(missing)}")
            return list(reader)
    except OSError as e:
        raise BikedetError(f"cannot read {path}: {e}") from e


def read_records(
    path: Union[str, Path], trails_path: Union[str, Path, None] = None
) -> List[DetectionRecord]:
    """
    Read records written by `write_records`.

    Trails are read from `trails_path`, else from `trails.csv` beside the
    records file when it exists.
    """
    path = Path(path)
    if trails_path is None and (path.parent / TRAILS_NAME).is_file():
        trails_path = path.parent / TRAILS_NAME

    trails: Dict[int, list] = {}
    if trails_path is not None:
        for line_no, row in enumerate(_read_rows(trails_path, TRAILS_HEADER), start=2):
            try:
                box = BBox(*(float(row[k]) for k in ("x", "y", "w", "h")))
                trails.setdefault(int(row["track_id"]), []).append((int(row["frame"]), box))
            except (TypeError, ValueError) as e:
                raise ParseError(f"{trails_path}, line {line_no}: {e}") from e

    records = []
    for line_no, row in enumerate(_read_rows(path, RECORDS_HEADER), start=2):
        try:
            decision = row["decision"]
            if decision not in (BICYCLE, NOT_BICYCLE):
                raise ValueError(f"decision must be {BICYCLE} or {NOT_BICYCLE}, got {decision!r}")
            track_id = int(row["track_id"])
            records.append(
                DetectionRecord(
                    track_id=track_id,
                    first_frame=int(row["first_frame"]),
                    last_frame=int(row["last_frame"]),
                    M=int(row["M"]),
                    M_b=int(row["M_b"]),
                    decision=decision == BICYCLE,
                    cof=float(row["COF"]),
                    trail=tuple(sorted(trails.get(track_id, []), key=lambda t: t[0])),
                )
            )
        except (TypeError, ValueError) as e:
            raise ParseError(f"{path}, line {line_no}: {e}") from e
    return records


def find_records(directory: Union[str, Path]) -> Optional[Path]:
    """The records file a `detect` run left in `directory`, or None."""
    path = Path(directory) / RECORDS_NAME
    return path if path.is_file() else None
