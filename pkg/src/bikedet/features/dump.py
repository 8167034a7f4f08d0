"""Feature-dump CSV: `track_id,frame,` + feature names + `label`."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Union

from ..errors import BikedetError, ParseError
from .extract import FEATURE_NAMES, FeatureVector

INT_FEATURES = ("fg_count", "width", "height")
CLUTTER = "clutter"


@dataclass(frozen=True)
class FeatureRow:
    """One observed region with its truth label (`bicycle`, `vehicle`, ..., `clutter`)."""

    track_id: int
    frame: int
    features: FeatureVector
    label: str

    @property
    def is_bicycle(self) -> bool:
        return self.label == "bicycle"


HEADER = ["track_id", "frame", *FEATURE_NAMES, "label"]


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_feature_csv(rows: Iterable[FeatureRow], path: Union[str, Path]) -> int:
    """Write rows; returns the number written."""
    count = 0
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(HEADER)
            for row in rows:
                writer.writerow(
                    [
                        row.track_id,
                        row.frame,
                        *(_format(row.features.value(n)) for n in FEATURE_NAMES),
                        row.label,
                    ]
                )
                count += 1
    except OSError as e:
        raise BikedetError(f"cannot write {path}: {e}") from e
    return count


def read_feature_csv(path: Union[str, Path]) -> List[FeatureRow]:
    """Read a feature dump written by `write_feature_csv`."""
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = [c for c in HEADER if c not in (reader.fieldnames or [])]
            if missing:
                raise ParseError(f"{path}: missing columns {', '.join(missing)}")
            for line_no, record in enumerate(reader, start=2):
                try:
                    values = {}
                    for name in FEATURE_NAMES:
                        raw = record[name]
                        if name == "speed":
                            values[name] = float(raw) if raw != "" else None
                        elif name in INT_FEATURES:
                            values[name] = int(raw)
                        else:
                            values[name] = float(raw)
                    rows.append(
                        FeatureRow(
                            track_id=int(record["track_id"]),
                            frame=int(record["frame"]),
                            features=FeatureVector(**values),
                            label=record["label"],
                        )
                    )
                except (TypeError, ValueError) as e:
                    raise ParseError(f"{path}, line {line_no}: {e}") from e
    except OSError as e:
        raise BikedetError(f"cannot read {path}: {e}") from e
    return rows
