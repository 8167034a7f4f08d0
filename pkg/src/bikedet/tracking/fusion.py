"""Multi-frame decision fusion: tallies, life cycle, majority rule and confidence."""

import logging
from typing import List

import numpy as np

from ..config import TrackingParams
from ..errors import NoObservations
from ..segmentation import ObjectRegion
from .track import Track

logger = logging.getLogger(__name__)

FusionConfig = TrackingParams


def observe(track: Track, region: ObjectRegion, preliminary: bool, frame: int) -> None:
    """Record a matched region and its preliminary decision on the track."""
    cx, cy = region.center
    track.kf.update(np.array([cx, cy]))
    track.center_history.append((cx, cy))
    track.trail.append((frame, region.bbox))
    track.last_bbox = region.bbox
    track.last_frame = frame
    track.life = 0
    track.M += 1
    if preliminary:
        track.M_b += 1
    track.last_decision = preliminary
    track.matched = True


def age_and_evict(tracks: List[Track], params: FusionConfig) -> List[Track]:
    """
    Age unmatched tracks and drop those past the life cycle.

    `tracks` is updated in place; match flags are cleared for the next frame.

    Returns:
        Evicted tracks, in their original order
    """
    kept, evicted = [], []
    for track in tracks:
        if not track.matched:
            track.life += 1
        track.matched = False
        if track.life > params.life_cycle:
            evicted.append(track)
        else:
            kept.append(track)
    for track in evicted:
        logger.debug("evicting %r", track)
    tracks[:] = kept
    return evicted


def fuse_decision(track: Track) -> bool:
    """
    Majority rule: bicycle iff M_b > M / 2 (a tie is not a bicycle).

    Raises:
        NoObservations: The track was never observed
    """
    if track.M == 0:
        raise NoObservations(f"track {track.id} has no observations")
    return 2 * track.M_b > track.M


def confidence(track: Track, params: FusionConfig) -> float:
    """COF = min(M / N, 1)."""
    if track.M >= params.life_cycle:
        return 1.0
    return track.M / params.life_cycle


def accept(cof: float, t_cof: float) -> bool:
    """A detection is acceptable iff COF >= T_COF."""
    return cof >= t_cof
