"""Connected components and target fusion into object regions."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from ..background import ForegroundMask
from ..geometry import BBox, rect_gap

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def upper_rows(height: int) -> int:
    """Rows in the upper half of a box; odd heights give the extra row to the upper half."""
    return (height + 1) // 2


@dataclass(frozen=True)
class ObjectRegion:
    """
    A segmented blob in one frame.

    `row_counts[i]` is the number of the blob's foreground pixels in bbox row i;
    it lets fused regions recompute their upper/lower split.
    """

    bbox: BBox
    fg_count: int
    fg_count_upper: int
    fg_count_lower: int
    row_counts: Tuple[int, ...]

    @classmethod
    def from_rows(cls, x: int, y: int, width: int, row_counts: Sequence[int]) -> "ObjectRegion":
        rows = tuple(int(c) for c in row_counts)
        split = upper_rows(len(rows))
        upper = sum(rows[:split])
        lower = sum(rows[split:])
        return cls(
            bbox=BBox(int(x), int(y), int(width), len(rows)),
            fg_count=upper + lower,
            fg_count_upper=upper,
            fg_count_lower=lower,
            row_counts=rows,
        )

    @property
    def width(self) -> int:
        return int(self.bbox.w)

    @property
    def height(self) -> int:
        return int(self.bbox.h)

    @property
    def center(self) -> Tuple[float, float]:
        return self.bbox.center


def label_mask(mask: ForegroundMask) -> Tuple[np.ndarray, int]:
    """8-connected labeling; returns the label image (0 = background) and label count."""
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTED)
    return labels, int(count)


def connected_components(mask: ForegroundMask, min_area: int = 0) -> List[ObjectRegion]:
    """
    Partition the mask into 8-connected object regions.

    Args:
        mask: Cleaned foreground mask
        min_area: Components with fewer pixels are discarded

    Returns:
        Regions sorted by the (y, x) of their top-left corner
    """
    labels, count = label_mask(mask)
    if count == 0:
        return []
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    regions = []
    for label, slc in enumerate(ndimage.find_objects(labels), start=1):
        if slc is None or sizes[label] < min_area:
            continue
        rows_slice, cols_slice = slc
        component = labels[slc] == label
        regions.append(
            (
                (rows_slice.start, cols_slice.start, label),
                ObjectRegion.from_rows(
                    cols_slice.start,
                    rows_slice.start,
                    cols_slice.stop - cols_slice.start,
                    component.sum(axis=1),
                ),
            )
        )
    regions.sort(key=lambda item: item[0])
    return [region for _, region in regions]


def region_from_mask(mask: ForegroundMask) -> Optional[ObjectRegion]:
    """One region bounding every foreground pixel, or None for an empty mask."""
    rows = np.flatnonzero(mask.bits.any(axis=1))
    cols = np.flatnonzero(mask.bits.any(axis=0))
    if rows.size == 0:
        return None
    y0, y1 = rows[0], rows[-1] + 1
    x0, x1 = cols[0], cols[-1] + 1
    return ObjectRegion.from_rows(x0, y0, x1 - x0, mask.bits[y0:y1, x0:x1].sum(axis=1))


def _merge(group: Sequence[ObjectRegion]) -> ObjectRegion:
    box = group[0].bbox
    for region in group[1:]:
        box = box.union(region.bbox)
    rows = np.zeros(int(box.h), dtype=np.int64)
    for region in group:
        offset = int(region.bbox.y - box.y)
        rows[offset : offset + region.height] += region.row_counts
    return ObjectRegion.from_rows(box.x, box.y, box.w, rows)


def _order(region: ObjectRegion) -> Tuple[float, float, float, float]:
    return (region.bbox.y, region.bbox.x, region.bbox.h, region.bbox.w)


def _merge_pass(regions: List[ObjectRegion], max_gap: int) -> List[ObjectRegion]:
    parent = list(range(len(regions)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if rect_gap(regions[i].bbox, regions[j].bbox) <= max_gap:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: Dict[int, List[ObjectRegion]] = {}
    for i, region in enumerate(regions):
        groups.setdefault(find(i), []).append(region)
    return sorted((_merge(g) if len(g) > 1 else g[0] for g in groups.values()), key=_order)


def fuse_regions(regions: Sequence[ObjectRegion], max_gap: int = 5) -> List[ObjectRegion]:
    """
    Target fusion: merge regions whose boxes lie within `max_gap` pixels.

    Merging is transitive and repeated until no two output boxes are within
    `max_gap` of each other, so fusing the output again changes nothing.

    Args:
        regions: Regions of one frame
        max_gap: Largest per-axis background gap that still merges

    Returns:
        Fused regions sorted by the (y, x) of their top-left corner
    """
    current = sorted(regions, key=_order)
    while True:
        fused = _merge_pass(current, max_gap)
        if len(fused) == len(current):
            return fused
        current = fused
