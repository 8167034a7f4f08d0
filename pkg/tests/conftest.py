"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from bikedet.features import FeatureRow, FeatureVector
from bikedet.synth import ActorSpec, SceneConfig, write_scene


@pytest.fixture
def one_bicycle_scene():
    """Small noiseless scene with one bicycle crossing after the warmup."""
    return SceneConfig(
        scene_id="one-bike",
        width=160,
        height=96,
        length=100,
        actors=(
            ActorSpec(actor_id=1, cls="bicycle", entry_frame=55, x0=2.0, y0=30.0, vx=2.5),
        ),
        seed=7,
    )


@pytest.fixture
def empty_scene():
    """Background-only scene."""
    return SceneConfig(scene_id="empty", width=64, height=48, length=80, seed=3)


@pytest.fixture
def scene_dir(tmp_path, one_bicycle_scene):
    """The one-bicycle scene written as a PGM sequence with truth."""
    directory = tmp_path / "scene"
    write_scene(one_bicycle_scene, directory)
    return directory


def _rows(label, count, rng, width, height, fill_upper, fill_lower, speed):
    rows = []
    for i in range(count):
        w = int(round(width * rng.uniform(0.9, 1.1)))
        h = int(round(height * rng.uniform(0.9, 1.1)))
        upper = float(np.clip(fill_upper + rng.normal(0, 0.03), 0.0, 1.0))
        lower = float(np.clip(fill_lower + rng.normal(0, 0.03), 0.0, 1.0))
        fg = int(round((upper + lower) / 2 * w * h))
        rows.append(
            FeatureRow(
                track_id=i,
                frame=i,
                features=FeatureVector(
                    fg_count=fg,
                    width=w,
                    height=h,
                    aspect_ratio=w / h,
                    r_f=fg / (w * h),
                    r_f_upper=upper,
                    r_f_lower=lower,
                    speed=None if i % 10 == 0 else float(speed * rng.uniform(0.85, 1.15)),
                ),
                label=label,
            )
        )
    return rows


@pytest.fixture
def feature_rows():
    """Labeled rows for three well-separated actor classes."""
    rng = np.random.default_rng(11)
    return (
        _rows("bicycle", 60, rng, 32, 34, 0.25, 0.6, 2.5)
        + _rows("vehicle", 60, rng, 56, 28, 0.8, 1.0, 5.5)
        + _rows("pedestrian", 60, rng, 10, 28, 0.8, 0.55, 1.1)
    )
