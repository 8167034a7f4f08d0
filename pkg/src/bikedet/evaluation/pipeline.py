"""Frame-by-frame orchestration of the whole detector."""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, List, Mapping, Optional, Union

import numpy as np
from tqdm import tqdm

from ..background import ForegroundMask, GmmState, init, update_and_subtract
from ..classifier import Model, SvmModel
from ..config import PipelineConfig
from ..errors import ConfigError
from ..features import CLUTTER, FeatureRow
from ..geometry import iou
from ..segmentation import connected_components, fuse_regions, morphological_clean
from ..synth import GroundTruth
from ..tracking import Classify, DetectionRecord, Observation, TrackState, TrackStore
from ..video import Frame

logger = logging.getLogger(__name__)

FrameCallback = Callable[[Frame, ForegroundMask, List[TrackState]], None]


def check_model(model: Model) -> None:
    """
    Reject a model that cannot classify a track's first observation.

    Raises:
        ConfigError: SVM whose layout needs speed but which has no speed-free fallback
    """
    if isinstance(model, SvmModel) and model.layout.has_speed and model.fallback is None:
        raise ConfigError(
            f"SVM layout {model.layout} needs speed but the model has no speed-free fallback"
        )


class Detector:
    """
    Background model, segmentation and track store of one stream.

    Feed frames in order with `process`; call `finish` at the end of the stream.
    """

    def __init__(
        self,
        classify: Classify,
        config: Union[PipelineConfig, Mapping[str, Any], None] = None,
    ):
        self.config = PipelineConfig.build(config)
        self.classify = classify
        self.store = TrackStore(self.config.tracking)
        self.state: Optional[GmmState] = None
        self.frames_seen = 0
        self.last_mask: Optional[ForegroundMask] = None

    @classmethod
    def from_model(
        cls, model: Model, config: Union[PipelineConfig, Mapping[str, Any], None] = None
    ) -> "Detector":
        check_model(model)
        return cls(model.decide, config)

    def segment(self, frame: Frame):
        """Background step, then cleaning, labeling and target fusion."""
        if self.state is None:
            self.state = init(frame, self.config.background)
            mask = ForegroundMask(np.zeros((frame.height, frame.width), dtype=bool))
        else:
            mask = update_and_subtract(self.state, frame)
        seg = self.config.segmentation
        cleaned = morphological_clean(mask, seg)
        regions = fuse_regions(connected_components(cleaned, seg.min_area), seg.max_gap)
        return cleaned, regions

    def process(
        self, frame: Frame, observer: Optional[Callable[[Observation], None]] = None
    ) -> List[DetectionRecord]:
        """
        Run one frame through the detector.

        Frames inside the warmup only update the background model.

        Returns:
            Records of tracks that ended in this frame
        """
        self.frames_seen += 1
        if self.frames_seen <= self.config.background.warmup_frames:
            if self.state is None:
                self.state = init(frame, self.config.background)
            else:
                update_and_subtract(self.state, frame)
            return []
        cleaned, regions = self.segment(frame)
        self.last_mask = cleaned
        return self.store.step(frame.index, regions, self.classify, observer)

    def finish(self) -> List[DetectionRecord]:
        return self.store.flush()


@dataclass
class PipelineResult:
    records: List[DetectionRecord] = field(default_factory=list)
    timings_ms: List[float] = field(default_factory=list)
    warmup_frames: int = 0

    @property
    def frames(self) -> int:
        return len(self.timings_ms)

    @property
    def detection_timings_ms(self) -> List[float]:
        """Timings of the frames past the background warmup."""
        return self.timings_ms[self.warmup_frames :]


def run_pipeline(
    frames: Iterable[Frame],
    model: Optional[Model] = None,
    config: Union[PipelineConfig, Mapping[str, Any], None] = None,
    classify: Optional[Classify] = None,
    observer: Optional[Callable[[Observation], None]] = None,
    on_frame: Optional[FrameCallback] = None,
    progress: bool = False,
    total: Optional[int] = None,
) -> PipelineResult:
    """
    Detect bicycles in a stream.

    Per-frame wall time covers detector work only; reading frames and the
    `on_frame` callback are outside the timed section.

    Args:
        frames: Frames in stream order
        model: Trained fuser; ignored when `classify` is given
        config: Pipeline configuration
        classify: Explicit single-frame decision function
        observer: Called with every classified region
        on_frame: Called after each frame with the cleaned mask and live track states
        progress: Show a progress bar
        total: Frame count for the progress bar

    Returns:
        Terminal records sorted by track id, per-frame timings in milliseconds and the
        number of leading warmup frames among them

    Raises:
        ConfigError: Model cannot be used on this stream
    """
    if classify is None:
        if model is None:
            raise ConfigError("run_pipeline needs a model or a classify function")
        detector = Detector.from_model(model, config)
    else:
        detector = Detector(classify, config)

    result = PipelineResult()
    if progress:
        frames = tqdm(frames, total=total, desc="Detecting", unit="frame")
    for frame in frames:
        start = time.perf_counter()
        result.records.extend(detector.process(frame, observer))
        result.timings_ms.append((time.perf_counter() - start) * 1000.0)
        if on_frame is not None and detector.last_mask is not None:
            on_frame(frame, detector.last_mask, detector.store.states())
    result.warmup_frames = min(result.frames, detector.config.background.warmup_frames)
    result.records.extend(detector.finish())
    result.records.sort(key=lambda r: r.track_id)
    logger.info(
        "%d frames, %d tracks, %d bicycle decisions",
        result.frames,
        len(result.records),
        sum(r.decision for r in result.records),
    )
    return result


def label_for(truth: GroundTruth, frame: int, region_bbox, overlap_min: float) -> str:
    """Class of the best-overlapping truth actor in a frame, or `clutter`."""
    best, label = 0.0, CLUTTER
    for track, box in truth.boxes_at(frame):
        overlap = iou(region_bbox, box)
        if overlap >= overlap_min and overlap > best:
            best, label = overlap, track.cls
    return label


def collect_features(
    frames: Iterable[Frame],
    truth: GroundTruth,
    config: Union[PipelineConfig, Mapping[str, Any], None] = None,
    progress: bool = False,
) -> List[FeatureRow]:
    """
    Labeled feature rows of every tracked region, for training.

    Tracks are formed exactly as in detection; no classifier is involved.
    """
    config = PipelineConfig.build(config)
    rows: List[FeatureRow] = []

    def observe(obs: Observation) -> None:
        rows.append(
            FeatureRow(
                track_id=obs.track_id,
                frame=obs.frame,
                features=obs.features,
                label=label_for(truth, obs.frame, obs.region.bbox, config.eval.overlap_min),
            )
        )

    run_pipeline(
        frames,
        config=config,
        classify=lambda fv: False,
        observer=observe,
        progress=progress,
        total=truth.length,
    )
    return rows
