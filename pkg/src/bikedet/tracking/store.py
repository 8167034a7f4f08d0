"""The per-stream set of live tracks, advanced one frame at a time."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from ..config import TrackingParams
from ..features import FeatureVector, estimate_speed, extract_static
from ..geometry import BBox
from ..segmentation import ObjectRegion
from .fusion import accept, age_and_evict, confidence, fuse_decision, observe
from .matching import match
from .track import Track, predict

logger = logging.getLogger(__name__)

Classify = Callable[[FeatureVector], bool]


@dataclass(frozen=True)
class DetectionRecord:
    """Terminal summary of one track, emitted when it is evicted or the stream ends."""

    track_id: int
    first_frame: int
    last_frame: int
    M: int
    M_b: int
    decision: bool
    cof: float
    trail: Tuple[Tuple[int, BBox], ...] = ()

    def accepted(self, t_cof: float) -> bool:
        return accept(self.cof, t_cof)

    @property
    def is_bicycle(self) -> bool:
        return self.decision


@dataclass(frozen=True)
class Observation:
    """One classified region handed to observers of `TrackStore.step`."""

    track_id: int
    frame: int
    region: ObjectRegion
    features: FeatureVector
    preliminary: bool


@dataclass(frozen=True)
class TrackState:
    """Live view of a track after a frame: re-evaluated decision and confidence."""

    track_id: int
    bbox: BBox
    decision: bool
    cof: float
    acceptable: bool


class TrackStore:
    """
    Live tracks of one stream.

    Single writer; frames must be stepped in order.
    """

    def __init__(self, params: Optional[TrackingParams] = None):
        self.params = TrackingParams.build(params)
        self.tracks: List[Track] = []
        self._next_id = 1

    def record(self, track: Track) -> DetectionRecord:
        return DetectionRecord(
            track_id=track.id,
            first_frame=track.first_frame,
            last_frame=track.last_frame,
            M=track.M,
            M_b=track.M_b,
            decision=fuse_decision(track),
            cof=confidence(track, self.params),
            trail=tuple(track.trail),
        )

    def _features(self, region: ObjectRegion, track: Optional[Track]) -> FeatureVector:
        fv = extract_static(region)
        if track is not None and track.center_history:
            fv = fv.with_speed(estimate_speed([*track.center_history, region.center]))
        return fv

    def step(
        self,
        frame: int,
        regions: Sequence[ObjectRegion],
        classify: Classify,
        observer: Optional[Callable[[Observation], None]] = None,
    ) -> List[DetectionRecord]:
        """
        Advance every track by one frame.

        Tracks are predicted and matched to `regions`; matched tracks and new
        tracks for the leftover regions are classified and observed; unmatched
        tracks age and those past the life cycle are evicted.

        Args:
            frame: Frame index
            regions: Fused object regions of this frame
            classify: Single-frame fuser, True for bicycle
            observer: Called with every classified region

        Returns:
            Records of the tracks evicted in this frame
        """
        for track in self.tracks:
            predict(track)
        result = match(self.tracks, regions, self.params)

        observed = [(track, region) for track, region in result.assignments]
        for region in result.unmatched_regions:
            track = Track(self._next_id, region, frame, self.params)
            self._next_id += 1
            self.tracks.append(track)
            observed.append((track, region))

        for track, region in observed:
            fv = self._features(region, track)
            preliminary = bool(classify(fv))
            observe(track, region, preliminary, frame)
            if observer is not None:
                observer(Observation(track.id, frame, region, fv, preliminary))

        evicted = age_and_evict(self.tracks, self.params)
        return [self.record(track) for track in evicted]

    def states(self) -> List[TrackState]:
        """Current decision and confidence of every live track."""
        states = []
        for track in self.tracks:
            cof = confidence(track, self.params)
            states.append(
                TrackState(
                    track_id=track.id,
                    bbox=track.last_bbox,
                    decision=fuse_decision(track),
                    cof=cof,
                    acceptable=accept(cof, self.params.t_cof),
                )
            )
        return states

    def flush(self) -> List[DetectionRecord]:
        """End of stream: records for every live track, which are then dropped."""
        records = [self.record(track) for track in self.tracks]
        logger.debug("stream end: %d live tracks flushed", len(records))
        self.tracks = []
        return records
