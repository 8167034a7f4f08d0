"""Per-region geometric features and per-track speed."""

from .dump import CLUTTER, FeatureRow, read_feature_csv, write_feature_csv
from .extract import (
    DEFAULT_FEATURE_LAYOUT,
    FEATURE_NAMES,
    FIRST_FRAME_LAYOUT,
    SHAPE_FEATURES,
    FeatureLayout,
    FeatureVector,
    estimate_speed,
    extract_static,
    to_vector,
    vectors_to_matrix,
)

__all__ = [
    "CLUTTER",
    "FeatureRow",
    "read_feature_csv",
    "write_feature_csv",
    "DEFAULT_FEATURE_LAYOUT",
    "FEATURE_NAMES",
    "FIRST_FRAME_LAYOUT",
    "SHAPE_FEATURES",
    "FeatureLayout",
    "FeatureVector",
    "estimate_speed",
    "extract_static",
    "to_vector",
    "vectors_to_matrix",
]
