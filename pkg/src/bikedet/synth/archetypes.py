"""Rasterized silhouettes of the three actor classes."""

from functools import lru_cache
from typing import Callable, Dict, Tuple

import numpy as np

ACTOR_CLASSES = ("bicycle", "vehicle", "pedestrian")

# Default speed range per class, pixels per frame.
SPEED_RANGES: Dict[str, Tuple[float, float]] = {
    "pedestrian": (0.8, 1.4),
    "bicycle": (2.0, 3.2),
    "vehicle": (4.5, 7.0),
}

SCALE_RANGE = (0.85, 1.1)


def _disc(canvas: np.ndarray, cy: int, cx: int, r: int) -> None:
    yy, xx = np.ogrid[: canvas.shape[0], : canvas.shape[1]]
    canvas |= (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r


def _trim(canvas: np.ndarray) -> np.ndarray:
    rows = np.flatnonzero(canvas.any(axis=1))
    cols = np.flatnonzero(canvas.any(axis=0))
    return canvas[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1].copy()


def bicycle(scale: float = 1.0) -> np.ndarray:
    """
    Two filled wheels joined by a frame bar, with a rider above.

    The rider (head, torso, legs) is much narrower than the wheelbase, so the
    upper half of the box is sparse and the lower half dense.
    """
    r = max(3, int(round(7 * scale)))
    wheelbase = int(round(2.4 * r))
    head_r = max(2, int(round(3 * scale)))
    torso_w = max(3, int(round(6 * scale)))
    torso_h = max(4, int(round(10 * scale)))
    gap = 2

    width = 2 * r + wheelbase + 1
    head_h = 2 * head_r + 1
    height = head_h + torso_h + gap + 2 * r + 1
    canvas = np.zeros((height, width), dtype=bool)

    wheel_cy = height - 1 - r
    _disc(canvas, wheel_cy, r, r)
    _disc(canvas, wheel_cy, r + wheelbase, r)
    canvas[wheel_cy - 1 : wheel_cy + 2, r : r + wheelbase + 1] = True

    seat_x = r + int(0.4 * wheelbase)
    torso_x = seat_x - torso_w // 2
    canvas[head_h : head_h + torso_h, torso_x : torso_x + torso_w] = True
    _disc(canvas, head_r, seat_x, head_r)
    canvas[head_h + torso_h : wheel_cy + 1, seat_x - 1 : seat_x + 2] = True
    return _trim(canvas)


def vehicle(scale: float = 1.0) -> np.ndarray:
    """A full-width body with a narrower cabin on top."""
    width = max(8, int(round(56 * scale)))
    height = max(4, int(round(28 * scale)))
    canvas = np.zeros((height, width), dtype=bool)
    cabin_h = int(round(0.4 * height))
    inset = int(round(0.15 * width))
    canvas[cabin_h:, :] = True
    canvas[:cabin_h, inset : width - inset] = True
    return _trim(canvas)


def pedestrian(scale: float = 1.0) -> np.ndarray:
    """Head, full-width torso and two legs."""
    width = max(6, int(round(10 * scale)))
    height = max(10, int(round(28 * scale)))
    canvas = np.zeros((height, width), dtype=bool)
    head_r = max(2, int(round(2.5 * scale)))
    _disc(canvas, head_r, width // 2, head_r)
    torso_top = 2 * head_r + 1
    torso_bottom = torso_top + int(round(0.4 * height))
    canvas[torso_top:torso_bottom, :] = True
    leg_w = max(3, width // 3)
    canvas[torso_bottom:, :leg_w] = True
    canvas[torso_bottom:, width - leg_w :] = True
    return _trim(canvas)


ARCHETYPES: Dict[str, Callable[[float], np.ndarray]] = {
    "bicycle": bicycle,
    "vehicle": vehicle,
    "pedestrian": pedestrian,
}


@lru_cache(maxsize=256)
def _cached(cls: str, scale: float) -> np.ndarray:
    mask = ARCHETYPES[cls](scale)
    mask.setflags(write=False)
    return mask


def silhouette(cls: str, scale: float = 1.0) -> np.ndarray:
    """
    Tight boolean silhouette of an actor class at a scale.

    Raises:
        KeyError: Unknown class
    """
    if cls not in ARCHETYPES:
        raise KeyError(f"unknown actor class {cls!r}; expected one of {', '.join(ACTOR_CLASSES)}")
    return _cached(cls, float(scale))
