"""Sparse geometric features and averaged speed for object regions."""

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_LAYOUT
from ..errors import ConfigError, DegenerateRegion, InsufficientHistory, MissingFeature
from ..segmentation import ObjectRegion, upper_rows

FEATURE_NAMES = DEFAULT_LAYOUT
SHAPE_FEATURES = ("width", "height", "aspect_ratio")


@dataclass(frozen=True)
class FeatureVector:
    """Features of one object in one frame; `speed` is None on a first observation."""

    fg_count: int
    width: int
    height: int
    aspect_ratio: float
    r_f: float
    r_f_upper: float
    r_f_lower: float
    speed: Optional[float] = None

    def value(self, name: str) -> Optional[float]:
        if name not in FEATURE_NAMES:
            raise KeyError(name)
        return getattr(self, name)

    def with_speed(self, speed: Optional[float]) -> "FeatureVector":
        return replace(self, speed=speed)


@dataclass(frozen=True)
class FeatureLayout:
    """Ordered feature names; serialized inside model files and CSV headers."""

    names: Tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        names = tuple(self.names)
        unknown = [n for n in names if n not in FEATURE_NAMES]
        if unknown:
            raise ConfigError(f"unknown features in layout: {', '.join(unknown)}")
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate features in layout: {', '.join(names)}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    @property
    def has_speed(self) -> bool:
        return "speed" in self.names

    def without(self, name: str) -> "FeatureLayout":
        return FeatureLayout(tuple(n for n in self.names if n != name))

    def speed_free(self) -> "FeatureLayout":
        return self.without("speed")

    @classmethod
    def parse(cls, text: str) -> "FeatureLayout":
        return cls(tuple(n.strip() for n in text.split(",") if n.strip()))

    def __str__(self) -> str:
        return ",".join(self.names)


DEFAULT_FEATURE_LAYOUT = FeatureLayout()
FIRST_FRAME_LAYOUT = DEFAULT_FEATURE_LAYOUT.speed_free()


def extract_static(region: ObjectRegion) -> FeatureVector:
    """
    Geometric features of one region (speed left unset).

    The upper half has ceil(h/2) rows; a one-row box has an empty lower half
    whose duty cycle is reported as 0.

    Raises:
        DegenerateRegion: Zero-area bounding box
    """
    w, h = region.width, region.height
    if w <= 0 or h <= 0:
        raise DegenerateRegion(f"region {region.bbox} has zero area")
    upper_area = upper_rows(h) * w
    lower_area = (h - upper_rows(h)) * w
    return FeatureVector(
        fg_count=region.fg_count,
        width=w,
        height=h,
        aspect_ratio=w / h,
        r_f=region.fg_count / (w * h),
        r_f_upper=region.fg_count_upper / upper_area,
        r_f_lower=region.fg_count_lower / lower_area if lower_area else 0.0,
    )


def estimate_speed(center_history: Sequence[Tuple[float, float]], n: Optional[int] = None) -> float:
    """
    Mean Euclidean displacement between consecutive centers.

    Args:
        center_history: Box centers over the frames the object was observed
        n: Number of observations to use (the most recent n); all by default

    Returns:
        Speed in pixels per frame

    Raises:
        InsufficientHistory: Fewer than two observations
    """
    if n is None:
        n = len(center_history)
    if n < 2 or len(center_history) < n:
        raise InsufficientHistory(f"speed needs at least 2 observed centers, got {n}")
    points = np.asarray(center_history[-n:], dtype=np.float64)
    steps = np.diff(points, axis=0)
    return float(np.hypot(steps[:, 0], steps[:, 1]).sum() / (n - 1))


def to_vector(fv: FeatureVector, layout: FeatureLayout = DEFAULT_FEATURE_LAYOUT) -> np.ndarray:
    """
    Order a feature vector's values by layout.

    Raises:
        MissingFeature: Layout asks for speed but the vector has none
    """
    values = []
    for name in layout:
        value = fv.value(name)
        if value is None:
            raise MissingFeature(f"feature {name!r} is unset on this observation")
        values.append(float(value))
    return np.array(values, dtype=np.float64)


def vectors_to_matrix(
    vectors: Iterable[FeatureVector], layout: FeatureLayout = DEFAULT_FEATURE_LAYOUT
) -> np.ndarray:
    """Stack feature vectors into rows; unset speeds become NaN."""
    rows = [
        [math.nan if fv.value(name) is None else float(fv.value(name)) for name in layout]
        for fv in vectors
    ]
    return np.array(rows, dtype=np.float64).reshape(len(rows), len(layout))
