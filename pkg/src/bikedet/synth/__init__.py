"""Synthetic traffic scenes with exact ground truth."""

from .archetypes import ACTOR_CLASSES, SPEED_RANGES, silhouette
from .scene import (
    ActorSpec,
    SceneConfig,
    background_plate,
    generate_scene,
    ground_truth,
    render_frame,
    shadow_mask,
    substream,
)
from .storage import TRUTH_NAME, load_truth, read_scene_info, write_scene
from .suite import PROFILES, build_actors, load_manifest, standard_suite
from .truth import GroundTruth, TruthTrack, read_truth_csv, write_truth_csv

__all__ = [
    "ACTOR_CLASSES",
    "SPEED_RANGES",
    "silhouette",
    "ActorSpec",
    "SceneConfig",
    "background_plate",
    "generate_scene",
    "ground_truth",
    "render_frame",
    "shadow_mask",
    "substream",
    "TRUTH_NAME",
    "load_truth",
    "read_scene_info",
    "write_scene",
    "PROFILES",
    "build_actors",
    "load_manifest",
    "standard_suite",
    "GroundTruth",
    "TruthTrack",
    "read_truth_csv",
    "write_truth_csv",
]
