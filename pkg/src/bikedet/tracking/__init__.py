"""Tracking by detection and multi-frame decision fusion."""

from .fusion import FusionConfig, accept, age_and_evict, confidence, fuse_decision, observe
from .matching import MatchResult, match
from .store import Classify, DetectionRecord, Observation, TrackState, TrackStore
from .track import Track, predict

__all__ = [
    "FusionConfig",
    "accept",
    "age_and_evict",
    "confidence",
    "fuse_decision",
    "observe",
    "MatchResult",
    "match",
    "Classify",
    "DetectionRecord",
    "Observation",
    "TrackState",
    "TrackStore",
    "Track",
    "predict",
]
