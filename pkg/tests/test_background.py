"""Tests for background module."""

import numpy as np
import pytest

from bikedet.background import ForegroundMask, init, update_and_subtract
from bikedet.errors import ConfigError, DimensionError
from bikedet.video import Frame


def _frame(pixels, index=0):
    pixels = np.asarray(pixels, dtype=np.uint8)
    return Frame(pixels.shape[1], pixels.shape[0], index, pixels)


def test_init_seeds_one_gaussian_per_pixel():
    """Test that init puts one unit-weight Gaussian at each pixel value."""
    state = init(_frame([[10, 20], [30, 40]]), {"k": 3})
    assert state.weight.shape == (2, 2, 3)
    assert state.mean[..., 0].tolist() == [[10, 20], [30, 40]]
    assert (state.weight[..., 0] == 1.0).all()
    assert (state.weight[..., 1:] == 0.0).all()


@pytest.mark.parametrize("alpha", [0.0, 1.5])
def test_init_rejects_bad_alpha(alpha):
    """Test that alpha outside (0, 1) is a config error."""
    with pytest.raises(ConfigError):
        init(_frame([[1]]), {"alpha": alpha})


def test_init_rejects_zero_components():
    """Test that K < 1 is a config error."""
    with pytest.raises(ConfigError):
        init(_frame([[1]]), {"k": 0})


def test_first_update_is_background():
    """Test that the frame after init is all background."""
    frame = _frame(np.arange(12).reshape(3, 4) * 20)
    state = init(frame)
    mask = update_and_subtract(state, frame.with_index(1))
    assert mask.count == 0


def test_constant_stream_stays_background():
    """Test that a stationary input is all background after 100 frames."""
    frame = _frame(np.full((6, 8), 90))
    state = init(frame)
    for i in range(1, 101):
        mask = update_and_subtract(state, frame.with_index(i))
    assert mask == ForegroundMask(np.zeros((6, 8), dtype=bool))


def test_square_entering_after_warmup():
    """Test that a white square on black is segmented cleanly at its entry frame."""
    black = np.zeros((32, 32), dtype=np.uint8)
    state = init(_frame(black))
    for i in range(1, 60):
        update_and_subtract(state, _frame(black, i))
    scene = black.copy()
    scene[10:18, 12:20] = 255
    mask = update_and_subtract(state, _frame(scene, 60)).bits

    square = np.zeros_like(mask)
    square[10:18, 12:20] = True
    assert mask[square].mean() >= 0.95
    assert mask[~square].mean() < 0.01


def test_departed_object_reverts_to_background():
    """Test that pixels return to background once a short visit ends."""
    base = np.full((8, 8), 100, dtype=np.uint8)
    state = init(_frame(base))
    visit = base.copy()
    visit[2:5, 2:5] = 10
    for i in range(1, 4):
        update_and_subtract(state, _frame(visit, i))
    mask = update_and_subtract(state, _frame(base, 4))
    assert mask.count == 0


def test_dimension_mismatch():
    """Test that a frame of a different size is rejected."""
    state = init(_frame(np.zeros((4, 4))))
    with pytest.raises(DimensionError):
        update_and_subtract(state, _frame(np.zeros((4, 5))))


def test_weights_stay_normalized():
    """Test that per-pixel weights sum to one after updates."""
    rng = np.random.default_rng(0)
    state = init(_frame(rng.integers(0, 256, (5, 5))))
    for i in range(1, 20):
        update_and_subtract(state, _frame(rng.integers(0, 256, (5, 5)), i))
    assert np.allclose(state.weight.sum(axis=-1), 1.0)
    assert (state.var >= state.params.variance_floor).all()


def test_full_background_threshold_accepts_every_match():
    """Test that with T_bg = 1 any pixel matching a learned Gaussian is background."""
    rng = np.random.default_rng(3)
    levels = np.array([40, 120, 200], dtype=np.uint8)
    state = init(_frame(rng.choice(levels, (32, 32))), {"k": 3, "alpha": 0.05, "t_bg": 1.0})
    wrong = 0
    for i in range(1, 200):
        mask = update_and_subtract(state, _frame(rng.choice(levels, (32, 32)), i))
        if i >= 60:
            wrong += mask.count
    assert wrong == 0


def _running_average(frames, alpha, match_sigma, initial_variance, variance_floor):
    mean = frames[0].astype(np.float64)
    var = np.full(mean.shape, initial_variance)
    masks = []
    for pixels in frames[1:]:
        x = pixels.astype(np.float64)
        diff = x - mean
        d2 = diff * diff
        hit = d2 <= (match_sigma * match_sigma) * var
        mean = np.where(hit, mean + alpha * diff, x)
        var = np.where(
            hit, np.maximum((1.0 - alpha) * var + alpha * d2, variance_floor), initial_variance
        )
        masks.append(~hit)
    return masks, mean, var


@pytest.mark.parametrize("seed", range(3))
def test_single_component_matches_running_average(seed):
    """Test that K = 1 behaves as a running average that restarts on every miss."""
    rng = np.random.default_rng(seed)
    base = rng.integers(40, 216, (8, 8))
    frames = []
    for _ in range(120):
        pixels = base + rng.normal(0.0, 8.0, (8, 8))
        jumps = rng.random((8, 8)) < 0.1
        pixels[jumps] = rng.integers(0, 256, int(jumps.sum()))
        frames.append(np.clip(np.rint(pixels), 0, 255).astype(np.uint8))

    params = {"k": 1, "alpha": 0.05}
    state = init(_frame(frames[0]), params)
    p = state.params
    expected, mean, var = _running_average(
        frames, p.alpha, p.match_sigma, p.initial_variance, p.variance_floor
    )
    for i, pixels in enumerate(frames[1:], start=1):
        mask = update_and_subtract(state, _frame(pixels, i))
        assert np.array_equal(mask.bits, expected[i - 1]), f"frame {i}"
    assert np.allclose(state.mean[..., 0], mean)
    assert np.allclose(state.var[..., 0], var)
    assert (state.weight == 1.0).all()
    assert any(m.any() for m in expected) and not all(m.all() for m in expected)
