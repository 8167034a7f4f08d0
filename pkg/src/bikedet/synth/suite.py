"""The frozen standard suite of synthetic scenes, read from `suite.toml`."""

import sys
from importlib import resources
from typing import Dict, List, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError
from .archetypes import ACTOR_CLASSES, SCALE_RANGE, SPEED_RANGES, silhouette
from .scene import ACTOR_STREAM, ActorSpec, SceneConfig, substream

PROFILES = ("sunny", "foggy", "rainy")

LANES = 5
LANE_TOP = 6
LANE_PITCH = 56
FIRST_ENTRY = 50
ENTRY_STAGGER = 8
EDGE_MARGIN = 2
DARK_LUMA = (20, 40)
BRIGHT_LUMA = (195, 230)


class ProfileSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    noise: float = Field(ge=0.0)
    disturbance: Literal["none", "shadow", "fog"] = "none"
    intensity: float = Field(default=0.0, ge=0.0, le=1.0)


class SceneEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    profile: Literal["sunny", "foggy", "rainy"]
    seed: int = Field(ge=0)
    length: int = Field(gt=0)
    bicycle: int = Field(default=0, ge=0)
    vehicle: int = Field(default=0, ge=0)
    pedestrian: int = Field(default=0, ge=0)

    @property
    def counts(self) -> Dict[str, int]:
        return {cls: getattr(self, cls) for cls in ACTOR_CLASSES}


class SuiteManifest(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    version: int
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    frame_rate: str = "25/1"
    profiles: Dict[str, ProfileSpec]
    scenes: List[SceneEntry]


def load_manifest(data: Optional[Mapping] = None) -> SuiteManifest:
    """Parse a suite manifest; the packaged `suite.toml` by default."""
    if data is None:
        text = resources.files("bikedet.synth").joinpath("suite.toml").read_text(encoding="utf-8")
        data = tomllib.loads(text)
    try:
        manifest = SuiteManifest.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigError(f"invalid suite manifest: {e}") from e
    unknown = {s.profile for s in manifest.scenes} - set(manifest.profiles)
    if unknown:
        raise ConfigError(f"suite manifest uses undefined profiles: {', '.join(sorted(unknown))}")
    return manifest


def _interleave(counts: Mapping[str, int]) -> List[str]:
    """Classes in round-robin order so no lane pattern favours one class."""
    remaining = dict(counts)
    order = []
    while any(remaining.values()):
        for cls in ACTOR_CLASSES:
            if remaining.get(cls, 0) > 0:
                order.append(cls)
                remaining[cls] -= 1
    return order


def build_actors(counts: Mapping[str, int], seed: int, width: int) -> List[ActorSpec]:
    """
    Place actors one per lane with staggered entries.

    Each actor draws its scale, speed, direction and luma from its own
    substream, so adding an actor leaves the others unchanged.
    """
    actors = []
    for i, cls in enumerate(_interleave(counts)):
        rng = substream(seed, ACTOR_STREAM, i)
        scale = round(float(rng.uniform(*SCALE_RANGE)), 3)
        speed = round(float(rng.uniform(*SPEED_RANGES[cls])), 3)
        rightward = bool(rng.random() < 0.5)
        low, high = DARK_LUMA if rng.random() < 0.5 else BRIGHT_LUMA
        luma = int(rng.integers(low, high + 1))
        w = silhouette(cls, scale).shape[1]
        actors.append(
            ActorSpec(
                actor_id=i + 1,
                cls=cls,
                entry_frame=FIRST_ENTRY + ENTRY_STAGGER * i,
                x0=float(EDGE_MARGIN if rightward else width - w - EDGE_MARGIN),
                y0=float(LANE_TOP + LANE_PITCH * (i % LANES)),
                vx=speed if rightward else -speed,
                scale=scale,
                luma=luma,
            )
        )
    return actors


def scene_from_entry(entry: SceneEntry, manifest: SuiteManifest) -> SceneConfig:
    profile = manifest.profiles[entry.profile]
    return SceneConfig(
        scene_id=entry.id,
        width=manifest.width,
        height=manifest.height,
        length=entry.length,
        actors=tuple(build_actors(entry.counts, entry.seed, manifest.width)),
        noise=profile.noise,
        disturbance=profile.disturbance,
        intensity=profile.intensity,
        seed=entry.seed,
        profile=entry.profile,
        frame_rate=manifest.frame_rate,
    )


def standard_suite(profile: Optional[str] = None) -> List[SceneConfig]:
    """
    The standard acceptance scenes, optionally limited to one profile.

    Args:
        profile: sunny, foggy or rainy; None for all 20 scenes

    Returns:
        Scene configs in manifest order
    """
    if profile is not None and profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}; expected one of {', '.join(PROFILES)}")
    manifest = load_manifest()
    return [
        scene_from_entry(entry, manifest)
        for entry in manifest.scenes
        if profile is None or entry.profile == profile
    ]
