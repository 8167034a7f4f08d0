"""Per-pixel adaptive Gaussian mixture background model over luma."""

from dataclasses import dataclass
from typing import Any, Mapping, Union

import numpy as np

from ..config import BackgroundParams
from ..errors import DimensionError
from ..video import Frame


@dataclass(frozen=True, eq=False)
class ForegroundMask:
    """Per-pixel binary labeling; `bits[y, x]` is True for foreground."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {bits.shape}")
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ForegroundMask):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


@dataclass(eq=False)
class GmmState:
    """
    Mixture state for every pixel.

    `weight`, `mean` and `var` have shape (height, width, K). Slots are kept
    sorted by weight / sigma, descending; empty slots carry weight 0.
    """

    params: BackgroundParams
    weight: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    frames_seen: int = 0

    @property
    def width(self) -> int:
        return self.weight.shape[1]

    @property
    def height(self) -> int:
        return self.weight.shape[0]


def init(
    first_frame: Frame,
    params: Union[BackgroundParams, Mapping[str, Any], None] = None,
) -> GmmState:
    """
    Seed the model from the first frame.

    Each pixel gets one Gaussian at its own value with the initial variance
    and weight 1; the remaining K - 1 slots start empty.

    Args:
        first_frame: Frame the model is seeded from
        params: Background parameters (model or mapping)

    Returns:
        Fresh model state

    Raises:
        ConfigError: K < 1 or alpha outside (0, 1)
    """
    params = BackgroundParams.build(params)
    shape = (first_frame.height, first_frame.width, params.k)
    weight = np.zeros(shape, dtype=np.float64)
    mean = np.zeros(shape, dtype=np.float64)
    var = np.full(shape, params.initial_variance, dtype=np.float64)
    weight[..., 0] = 1.0
    mean[..., 0] = first_frame.pixels
    return GmmState(params=params, weight=weight, mean=mean, var=var)


def update_and_subtract(state: GmmState, frame: Frame) -> ForegroundMask:
    """
    Run one adaptive-GMM step and label foreground pixels.

    A pixel matches the nearest live Gaussian (in standard deviations) lying
    within the match threshold. A matched Gaussian moves toward the pixel at
    rate alpha; an unmatched pixel replaces the lowest-weight Gaussian and is
    always foreground. Matched pixels are background iff their Gaussian falls
    within the shortest weight/sigma-ordered prefix reaching T_bg.

    Args:
        state: Model state, updated in place
        frame: Next frame of the stream

    Returns:
        Raw foreground mask for this frame

    Raises:
        DimensionError: Frame size differs from the model
    """
    if (frame.height, frame.width) != (state.height, state.width):
        raise DimensionError(
            f"frame is {frame.width}x{frame.height}, model is {state.width}x{state.height}"
        )
    p = state.params
    alpha = p.alpha
    k = p.k
    weight, mean, var = state.weight, state.mean, state.var

    x = frame.pixels.astype(np.float64)[..., None]
    diff = x - mean
    d2 = diff * diff
    live = weight > 0.0
    within = live & (d2 <= (p.match_sigma * p.match_sigma) * var)
    normalized = np.where(within, d2 / var, np.inf)
    best = np.argmin(normalized, axis=-1)
    matched = within.any(axis=-1)

    slots = np.arange(k)
    hit = (slots == best[..., None]) & matched[..., None]

    # matched pixels: move the matched Gaussian, decay the others
    m = matched[..., None]
    weight = np.where(m, (1.0 - alpha) * weight + alpha * hit, weight)
    mean = np.where(hit, mean + alpha * diff, mean)
    var = np.where(hit, np.maximum((1.0 - alpha) * var + alpha * d2, p.variance_floor), var)

    # unmatched pixels: replace the weakest Gaussian
    weakest = np.argmin(weight, axis=-1)
    replace = (slots == weakest[..., None]) & ~m
    weight = np.where(replace, alpha, weight)
    mean = np.where(replace, x, mean)
    var = np.where(replace, p.initial_variance, var)

    weight = weight / weight.sum(axis=-1, keepdims=True)

    order = np.argsort(-weight / np.sqrt(var), axis=-1, kind="stable")
    weight = np.take_along_axis(weight, order, axis=-1)
    mean = np.take_along_axis(mean, order, axis=-1)
    var = np.take_along_axis(var, order, axis=-1)
    rank = np.argmax(order == best[..., None], axis=-1)

    # rounding can leave the full sum just under 1.0, so the last slot always closes the prefix
    reached = np.cumsum(weight, axis=-1) >= p.t_bg - 1e-9
    reached[..., -1] = True
    n_background = np.argmax(reached, axis=-1) + 1
    background = matched & (rank < n_background)

    state.weight, state.mean, state.var = weight, mean, var
    state.frames_seen += 1
    return ForegroundMask(~background)
