"""Attentional cascade of per-feature interval tests."""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..config import DEFAULT_STAGE_ORDER
from ..errors import CalibrationError, ConfigError, EmptyClass
from ..features import SHAPE_FEATURES, FeatureVector
from .training import TrainingSet

logger = logging.getLogger(__name__)

# A stage that rejects fewer than this share of the surviving negatives is skipped.
MIN_REJECTION = 0.01


@dataclass(frozen=True)
class CascadeStage:
    """Passes iff lo <= value <= hi."""

    feature: str
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ConfigError(f"stage {self.feature}: lo {self.lo} exceeds hi {self.hi}")

    def passes(self, value: float) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class Cascade:
    """Ordered stages; cheap shape tests come before speed."""

    stages: Tuple[CascadeStage, ...] = ()

    kind = "cascade"

    def __post_init__(self):
        stages = tuple(self.stages)
        names = [s.feature for s in stages]
        if len(set(names)) != len(names):
            raise ConfigError(f"cascade repeats a feature: {', '.join(names)}")
        _check_order(names)
        object.__setattr__(self, "stages", stages)

    def __len__(self) -> int:
        return len(self.stages)

    @property
    def features(self) -> Tuple[str, ...]:
        return tuple(s.feature for s in self.stages)

    def decide(self, fv: FeatureVector) -> bool:
        return cascade_decide(self, fv)[0]


def _check_order(names: Sequence[str]) -> None:
    names = list(names)
    if "speed" in names:
        late = [n for n in names[names.index("speed") + 1 :] if n in SHAPE_FEATURES]
        if late:
            raise ConfigError(f"speed stage must follow the shape stages, found {', '.join(late)}")


def _tightest_interval(values: np.ndarray, keep: int) -> Tuple[float, float]:
    """Narrowest [lo, hi] covering `keep` of the sorted values; earliest window on ties."""
    values = np.sort(values)
    widths = values[keep - 1 :] - values[: len(values) - keep + 1]
    start = int(np.argmin(widths))
    return float(values[start]), float(values[start + keep - 1])


def _passes(column: np.ndarray, lo: float, hi: float) -> np.ndarray:
    # Unset values (NaN) pass.
    return np.isnan(column) | ((column >= lo) & (column <= hi))


def calibrate_cascade(
    data: TrainingSet,
    per_stage_tpr: float = 0.99,
    stage_order: Sequence[str] = DEFAULT_STAGE_ORDER,
) -> Cascade:
    """
    Fit one interval per feature so each stage keeps `per_stage_tpr` of the positives.

    Stages are fitted in order on the positives and negatives that survived the
    earlier stages. A stage that no longer rejects any meaningful share of the
    remaining negatives is dropped.

    Args:
        data: Training rows; unset speeds are ignored for fitting and always pass
        per_stage_tpr: Fraction of surviving positives each stage must keep, in (0.5, 1]
        stage_order: Features to try, in evaluation order

    Returns:
        Calibrated cascade

    Raises:
        ConfigError: per_stage_tpr out of range or unknown stage feature
        EmptyClass: No positives or no negatives
        CalibrationError: No positives survive to a stage
    """
    if not 0.5 < per_stage_tpr <= 1.0:
        raise ConfigError(f"per_stage_tpr must lie in (0.5, 1], got {per_stage_tpr}")
    _check_order(stage_order)
    if len(data.positives) == 0 or len(data.negatives) == 0:
        raise EmptyClass(
            f"{len(data.positives)} positives and {len(data.negatives)} negatives; "
            "both must be non-empty"
        )

    positives, negatives = data.positives, data.negatives
    stages = []
    for feature in stage_order:
        col = data.column(feature)
        if len(negatives) == 0:
            logger.debug("no negatives left before stage %s; stopping", feature)
            break
        if len(positives) == 0:
            raise CalibrationError(f"no positives survive to stage {feature}")
        pos_values = positives[:, col]
        known = pos_values[~np.isnan(pos_values)]
        if len(known) == 0:
            logger.debug("stage %s has no set values among positives; skipped", feature)
            continue
        keep = max(1, math.ceil(per_stage_tpr * len(known)))
        lo, hi = _tightest_interval(known, keep)

        neg_pass = _passes(negatives[:, col], lo, hi)
        rejected = 1.0 - neg_pass.mean()
        if rejected < MIN_REJECTION:
            logger.debug("stage %s rejects %.3f of negatives; skipped", feature, rejected)
            continue
        stages.append(CascadeStage(feature, lo, hi))
        positives = positives[_passes(positives[:, col], lo, hi)]
        negatives = negatives[neg_pass]
        logger.debug(
            "stage %s in [%g, %g]: %d positives, %d negatives remain",
            feature,
            lo,
            hi,
            len(positives),
            len(negatives),
        )
    return Cascade(tuple(stages))


def cascade_decide(cascade: Cascade, fv: FeatureVector) -> Tuple[bool, int]:
    """
    Run the stages in order, stopping at the first rejection.

    Returns:
        (bicycle, number of stages evaluated); an unset speed passes its stage
    """
    evaluated = 0
    for stage in cascade.stages:
        evaluated += 1
        value = fv.value(stage.feature)
        if value is None:
            continue
        if not stage.passes(float(value)):
            return False, evaluated
    return True, evaluated
