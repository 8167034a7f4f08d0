"""A tracked object: constant-velocity Kalman state plus decision tallies."""

from typing import List, Optional, Tuple

import numpy as np
from filterpy.kalman import KalmanFilter

from ..config import TrackingParams
from ..geometry import BBox
from ..segmentation import ObjectRegion


def _center_filter(center: Tuple[float, float], params: TrackingParams) -> KalmanFilter:
    """State (cx, cy, vx, vy); the region center is measured."""
    kf = KalmanFilter(dim_x=4, dim_z=2)
    kf.F = np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    kf.H = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    kf.Q = np.diag([0.0, 0.0, params.process_noise, params.process_noise])
    kf.R = np.eye(2) * params.measurement_noise
    kf.P = np.diag(
        [
            params.measurement_noise,
            params.measurement_noise,
            params.initial_velocity_variance,
            params.initial_velocity_variance,
        ]
    )
    kf.x = np.array([[center[0]], [center[1]], [0.0], [0.0]])
    return kf


class Track:
    """
    One object persisted across frames.

    `M` counts frames in which the object was matched and classified, `M_b`
    those whose preliminary decision was bicycle, and `life` the consecutive
    frames since the last match.
    """

    def __init__(self, track_id: int, region: ObjectRegion, frame: int, params: TrackingParams):
        self.id = track_id
        self.kf = _center_filter(region.center, params)
        self.last_bbox: BBox = region.bbox
        self.predicted: BBox = region.bbox
        self.center_history: List[Tuple[float, float]] = []
        self.trail: List[Tuple[int, BBox]] = []
        self.life = 0
        self.M = 0
        self.M_b = 0
        self.first_frame = frame
        self.last_frame = frame
        self.matched = False
        self.last_decision: Optional[bool] = None

    @property
    def center(self) -> Tuple[float, float]:
        return float(self.kf.x[0, 0]), float(self.kf.x[1, 0])

    @property
    def velocity(self) -> Tuple[float, float]:
        return float(self.kf.x[2, 0]), float(self.kf.x[3, 0])

    def __repr__(self) -> str:
        return (
            f"Track(id={self.id}, frames={self.first_frame}-{self.last_frame}, "
            f"M={self.M}, M_b={self.M_b}, life={self.life})"
        )


def predict(track: Track) -> BBox:
    """
    Kalman time update; the last observed box moved to the predicted center.

    The prediction is also kept on the track for matching.
    """
    track.kf.predict()
    cx, cy = track.center
    track.predicted = track.last_bbox.centered_at(cx, cy)
    return track.predicted
