"""Deterministic rendering of synthetic traffic scenes with exact ground truth."""

import logging
from dataclasses import dataclass
from typing import Iterator, Literal, Optional, Tuple

import numpy as np

from ..errors import ConfigError
from ..geometry import BBox
from ..video import Frame, StreamMeta, parse_frame_rate
from .archetypes import ACTOR_CLASSES, silhouette
from .truth import GroundTruth, TruthTrack

logger = logging.getLogger(__name__)

# Substream keys under the scene seed.
PLATE_STREAM = 0
ACTOR_STREAM = 1
NOISE_STREAM = 2

FOG_LUMA = 200.0
SHADOW_DARKENING = 0.5
SHADOW_HEIGHT_FRACTION = 0.25

Disturbance = Literal["none", "shadow", "fog"]


def substream(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for one (stream, index) pair under a scene seed."""
    sequence = np.random.SeedSequence(seed, spawn_key=(stream, index))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class ActorSpec:
    """One moving actor: class, entry frame, start position, velocity, body scale and luma."""

    actor_id: int
    cls: str
    entry_frame: int
    x0: float
    y0: float
    vx: float
    vy: float = 0.0
    scale: float = 1.0
    luma: int = 30

    def __post_init__(self):
        if self.cls not in ACTOR_CLASSES:
            raise ConfigError(f"actor {self.actor_id}: unknown class {self.cls!r}")
        if self.entry_frame < 0:
            raise ConfigError(f"actor {self.actor_id}: negative entry frame")
        if not 0 <= self.luma <= 255:
            raise ConfigError(f"actor {self.actor_id}: luma {self.luma} outside 0..255")

    @property
    def mask(self) -> np.ndarray:
        return silhouette(self.cls, self.scale)

    def position(self, frame: int) -> Tuple[int, int]:
        """Top-left pixel of the silhouette in a frame."""
        t = frame - self.entry_frame
        x = np.floor(self.x0 + self.vx * t + 0.5)
        y = np.floor(self.y0 + self.vy * t + 0.5)
        return int(x), int(y)


@dataclass(frozen=True)
class SceneConfig:
    """Everything that determines a scene; `seed` is the only entropy source."""

    scene_id: str = "scene"
    width: int = 352
    height: int = 288
    length: int = 200
    actors: Tuple[ActorSpec, ...] = ()
    noise: float = 0.0
    disturbance: Disturbance = "none"
    intensity: float = 0.0
    seed: int = 0
    profile: Optional[str] = None
    frame_rate: str = "25/1"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.length <= 0:
            raise ConfigError(f"scene {self.scene_id}: dimensions and length must be positive")
        if self.noise < 0:
            raise ConfigError(f"scene {self.scene_id}: negative noise sigma")
        if self.disturbance not in ("none", "shadow", "fog"):
            raise ConfigError(f"scene {self.scene_id}: unknown disturbance {self.disturbance!r}")
        if not 0.0 <= self.intensity <= 1.0:
            raise ConfigError(f"scene {self.scene_id}: disturbance intensity outside [0, 1]")
        object.__setattr__(self, "actors", tuple(self.actors))

    @property
    def meta(self) -> StreamMeta:
        return StreamMeta(self.width, self.height, parse_frame_rate(self.frame_rate))


def background_plate(width: int, height: int, seed: int) -> np.ndarray:
    """Static road plate: a horizontal luma ramp from 100 to 130 plus fixed texture."""
    rng = substream(seed, PLATE_STREAM)
    ramp = (30 * np.arange(width)) // max(width - 1, 1)
    texture = rng.integers(-4, 5, size=(height, width))
    return (100 + ramp[np.newaxis, :] + texture).astype(np.uint8)


def _clip(mask: np.ndarray, x: int, y: int, width: int, height: int):
    """Frame slices and the matching silhouette slices; None if nothing is visible."""
    h, w = mask.shape
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + w, width), min(y + h, height)
    if x0 >= x1 or y0 >= y1:
        return None
    frame_slice = (slice(y0, y1), slice(x0, x1))
    mask_slice = (slice(y0 - y, y1 - y), slice(x0 - x, x1 - x))
    return frame_slice, mask_slice


def visible_box(actor: ActorSpec, frame: int, width: int, height: int) -> Optional[BBox]:
    """Tight box of the actor's in-frame silhouette pixels, or None when it is off screen."""
    if frame < actor.entry_frame:
        return None
    x, y = actor.position(frame)
    clipped = _clip(actor.mask, x, y, width, height)
    if clipped is None:
        return None
    frame_slice, mask_slice = clipped
    part = actor.mask[mask_slice]
    rows = np.flatnonzero(part.any(axis=1))
    cols = np.flatnonzero(part.any(axis=0))
    if len(rows) == 0:
        return None
    return BBox(
        frame_slice[1].start + int(cols[0]),
        frame_slice[0].start + int(rows[0]),
        int(cols[-1] - cols[0] + 1),
        int(rows[-1] - rows[0] + 1),
    )


def shadow_mask(mask: np.ndarray) -> np.ndarray:
    """The silhouette squashed vertically and sheared one pixel right per row."""
    h, w = mask.shape
    rows = max(1, int(round(h * SHADOW_HEIGHT_FRACTION)))
    picks = np.linspace(0, h - 1, rows).round().astype(int)
    squashed = mask[picks]
    out = np.zeros((rows, w + rows), dtype=bool)
    for i in range(rows):
        out[i, i : i + w] = squashed[i]
    return out


def _check_entry(config: SceneConfig) -> None:
    for actor in config.actors:
        x, y = actor.position(actor.entry_frame)
        h, w = actor.mask.shape
        if x < 0 or y < 0 or x + w > config.width or y + h > config.height:
            raise ConfigError(
                f"scene {config.scene_id}: actor {actor.actor_id} ({actor.cls}) starts at "
                f"({x}, {y}) size {w}x{h}, outside the {config.width}x{config.height} frame"
            )


def ground_truth(config: SceneConfig) -> GroundTruth:
    """Per-actor boxes for every frame in which the actor is visible."""
    tracks = []
    for actor in config.actors:
        track = TruthTrack(actor.actor_id, actor.cls)
        for frame in range(actor.entry_frame, config.length):
            box = visible_box(actor, frame, config.width, config.height)
            if box is not None:
                track.boxes[frame] = box
        tracks.append(track)
    return GroundTruth(length=config.length, tracks=tuple(tracks))


def render_frame(config: SceneConfig, plate: np.ndarray, frame: int) -> Frame:
    """Composite one frame: plate, shadows, actors, then fog and sensor noise."""
    canvas = plate.astype(np.float64)
    live = [a for a in config.actors if a.entry_frame <= frame]

    if config.disturbance == "shadow" and config.intensity > 0:
        factor = 1.0 - SHADOW_DARKENING * config.intensity
        for actor in live:
            x, y = actor.position(frame)
            shadow = shadow_mask(actor.mask)
            bottom = y + actor.mask.shape[0]
            clipped = _clip(shadow, x, bottom, config.width, config.height)
            if clipped is not None:
                frame_slice, mask_slice = clipped
                region = canvas[frame_slice]
                region[shadow[mask_slice]] *= factor

    for actor in live:
        x, y = actor.position(frame)
        clipped = _clip(actor.mask, x, y, config.width, config.height)
        if clipped is not None:
            frame_slice, mask_slice = clipped
            canvas[frame_slice][actor.mask[mask_slice]] = actor.luma

    if config.disturbance == "fog" and config.intensity > 0:
        canvas = canvas * (1.0 - config.intensity) + FOG_LUMA * config.intensity
    if config.noise > 0:
        rng = substream(config.seed, NOISE_STREAM, frame)
        canvas = canvas + config.noise * rng.standard_normal(canvas.shape)
    pixels = np.clip(np.rint(canvas), 0, 255).astype(np.uint8)
    return Frame(config.width, config.height, frame, pixels)


def generate_scene(config: SceneConfig) -> Tuple[Iterator[Frame], GroundTruth]:
    """
    Render a scene lazily together with its ground truth.

    Args:
        config: Scene description

    Returns:
        (frame iterator, ground truth); equal configs give equal output

    Raises:
        ConfigError: An actor is not fully inside the frame at its entry
    """
    _check_entry(config)
    plate = background_plate(config.width, config.height, config.seed)
    truth = ground_truth(config)
    logger.debug(
        "scene %s: %d actors, %d frames, disturbance %s",
        config.scene_id,
        len(config.actors),
        config.length,
        config.disturbance,
    )

    def frames() -> Iterator[Frame]:
        for index in range(config.length):
            yield render_frame(config, plate, index)

    return frames(), truth
