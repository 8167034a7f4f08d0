"""Detection, false-alarm and duplication rates against ground truth."""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import EvalError
from ..geometry import iou
from ..synth import GroundTruth, TruthTrack
from ..tracking import DetectionRecord, accept

Scene = Tuple[Sequence[DetectionRecord], GroundTruth]


@dataclass(frozen=True)
class Tallies:
    """Integer counts behind every rate."""

    n_truth: int = 0
    detected: int = 0
    false_alarms: int = 0
    reported: int = 0

    def __add__(self, other: "Tallies") -> "Tallies":
        return Tallies(
            self.n_truth + other.n_truth,
            self.detected + other.detected,
            self.false_alarms + other.false_alarms,
            self.reported + other.reported,
        )


@dataclass(frozen=True)
class MetricsReport:
    """
    Rates over the number of truth bicycles.

    R_det = detected / total, R_fp = false alarms / total and
    R_rep = max(reported / total - 1, 0). With no truth bicycles the three
    rates are 0.
    """

    tallies: Tallies
    R_det: float
    R_fp: float
    R_rep: float
    missing_rate: float
    median_ms: Optional[float] = None
    p95_ms: Optional[float] = None

    @classmethod
    def from_tallies(
        cls, tallies: Tallies, timings_ms: Optional[Sequence[float]] = None
    ) -> "MetricsReport":
        n = tallies.n_truth
        if n:
            r_det = tallies.detected / n
            r_fp = tallies.false_alarms / n
            r_rep = max(tallies.reported / n - 1.0, 0.0)
        else:
            r_det = r_fp = r_rep = 0.0
        median_ms = p95_ms = None
        if timings_ms:
            median_ms, p95_ms = timing_summary(timings_ms)
        return cls(tallies, r_det, r_fp, r_rep, 1.0 - r_det, median_ms, p95_ms)


def timing_summary(timings_ms: Sequence[float]) -> Tuple[float, float]:
    """Median and 95th percentile of per-frame times."""
    samples = np.asarray(timings_ms, dtype=np.float64)
    return float(np.median(samples)), float(np.percentile(samples, 95))


def covers(
    record: DetectionRecord,
    track: TruthTrack,
    overlap_min: float = 0.3,
    min_frames: int = 3,
) -> bool:
    """
    Whether a record follows a truth actor.

    They must share at least `min_frames` frames, with mean box IoU over the
    shared frames of at least `overlap_min`.
    """
    overlaps = [iou(box, track.boxes[frame]) for frame, box in record.trail if frame in track.boxes]
    if len(overlaps) < min_frames:
        return False
    return float(np.mean(overlaps)) >= overlap_min


def _check_span(records: Iterable[DetectionRecord], truth: GroundTruth) -> None:
    for record in records:
        last = max([record.last_frame, *(f for f, _ in record.trail)])
        if last >= truth.length:
            raise EvalError(
                f"track {record.track_id} reaches frame {last}, "
                f"but the ground truth covers {truth.length} frames"
            )


def match_to_ground_truth(
    records: Sequence[DetectionRecord],
    truth: GroundTruth,
    overlap_min: float = 0.3,
    min_frames: int = 3,
    t_cof: float = 0.0,
) -> Tallies:
    """
    Count detections of truth bicycles by accepted bicycle records.

    Only records decided bicycle with COF >= t_cof take part. A truth bicycle is
    detected when at least one of them covers it; a record covering no truth
    bicycle is a false alarm; every record covering a truth bicycle is a report.

    Raises:
        EvalError: Records reach past the end of the ground truth
    """
    _check_span(records, truth)
    bicycles = truth.bicycles()
    candidates = [r for r in records if r.decision and accept(r.cof, t_cof)]

    detected = set()
    false_alarms = reported = 0
    for record in candidates:
        hits = [t.actor_id for t in bicycles if covers(record, t, overlap_min, min_frames)]
        if hits:
            reported += 1
            detected.update(hits)
        else:
            false_alarms += 1
    return Tallies(len(bicycles), len(detected), false_alarms, reported)


def tally_scenes(
    scenes: Iterable[Scene],
    overlap_min: float = 0.3,
    min_frames: int = 3,
    t_cof: float = 0.0,
) -> Tallies:
    """Tallies pooled over several scenes."""
    total = Tallies()
    for records, truth in scenes:
        total = total + match_to_ground_truth(records, truth, overlap_min, min_frames, t_cof)
    return total


def sweep_tcof(
    records: Sequence[DetectionRecord],
    truth: GroundTruth,
    thresholds: Sequence[float] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0),
    overlap_min: float = 0.3,
    min_frames: int = 3,
) -> List[Tuple[float, MetricsReport]]:
    """Metrics of one record set under each confidence threshold."""
    return sweep_scenes([(records, truth)], thresholds, overlap_min, min_frames)


def sweep_scenes(
    scenes: Sequence[Scene],
    thresholds: Sequence[float] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0),
    overlap_min: float = 0.3,
    min_frames: int = 3,
) -> List[Tuple[float, MetricsReport]]:
    """
    Re-apply acceptance at every threshold to the same records.

    Returns:
        (threshold, pooled report) per threshold, in the given order
    """
    return [
        (t, MetricsReport.from_tallies(tally_scenes(scenes, overlap_min, min_frames, t)))
        for t in thresholds
    ]
