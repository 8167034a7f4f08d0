"""Axis-aligned boxes in pixel coordinates (top-left origin)."""

from typing import NamedTuple, Tuple


class BBox(NamedTuple):
    """Box covering columns [x, x + w) and rows [y, y + h)."""

    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def centered_at(self, cx: float, cy: float) -> "BBox":
        """Same size, moved so its center is (cx, cy)."""
        return BBox(cx - self.w / 2.0, cy - self.h / 2.0, self.w, self.h)

    def union(self, other: "BBox") -> "BBox":
        x0 = min(self.x, other.x)
        y0 = min(self.y, other.y)
        x1 = max(self.x + self.w, other.x + other.w)
        y1 = max(self.y + self.h, other.y + other.h)
        return BBox(x0, y0, x1 - x0, y1 - y0)


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes; 0.0 when either is empty."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def rect_gap(a: BBox, b: BBox) -> float:
    """
    Rectangle distance used for target fusion.

    The larger of the per-axis gaps (background columns / rows between the
    boxes), 0 when the boxes touch or overlap.
    """
    dx = max(0.0, b.x - (a.x + a.w), a.x - (b.x + b.w))
    dy = max(0.0, b.y - (a.y + a.h), a.y - (b.y + b.h))
    return max(dx, dy)
