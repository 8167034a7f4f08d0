"""Foreground aftertreatment and partitioning into object regions."""

from .morphology import morphological_clean
from .regions import (
    ObjectRegion,
    connected_components,
    fuse_regions,
    label_mask,
    region_from_mask,
    upper_rows,
)

__all__ = [
    "morphological_clean",
    "ObjectRegion",
    "connected_components",
    "fuse_regions",
    "label_mask",
    "region_from_mask",
    "upper_rows",
]
