"""Writing rendered scenes to disk and reading their metadata back."""

import logging
from pathlib import Path
from typing import Optional, Union

from tqdm import tqdm

from ..config import read_toml
from ..video import write_pgm_sequence
from ..video.pgm import SIDECAR_NAME
from .scene import SceneConfig, generate_scene
from .truth import GroundTruth, read_truth_csv, write_truth_csv

logger = logging.getLogger(__name__)

TRUTH_NAME = "truth.csv"


def write_scene(
    config: SceneConfig, directory: Union[str, Path], progress: bool = False
) -> GroundTruth:
    """
    Render a scene as a PGM sequence with a `stream.toml` sidecar and `truth.csv`.

    Args:
        config: Scene to render
        directory: Output directory (created)
        progress: Show a progress bar over frames

    Returns:
        The scene's ground truth
    """
    frames, truth = generate_scene(config)
    if progress:
        frames = tqdm(frames, total=config.length, desc=config.scene_id, unit="frame")
    extra = {"scene_id": config.scene_id, "seed": config.seed, "length": config.length}
    if config.profile is not None:
        extra["profile"] = config.profile
    root = Path(directory)
    write_pgm_sequence(frames, root, meta=config.meta, extra=extra)
    write_truth_csv(truth, root / TRUTH_NAME)
    logger.info("wrote scene %s (%d frames) to %s", config.scene_id, config.length, root)
    return truth


def read_scene_info(directory: Union[str, Path]) -> dict:
    """Sidecar entries of a scene directory; empty if there is no sidecar."""
    path = Path(directory) / SIDECAR_NAME
    if not path.is_file():
        return {}
    return read_toml(path)


def load_truth(path: Union[str, Path], length: Optional[int] = None) -> GroundTruth:
    """
    Ground truth from a truth CSV or a scene directory holding `truth.csv`.

    The scene length comes from `length`, else the sidecar, else the last truth frame.
    """
    path = Path(path)
    if path.is_dir():
        if length is None:
            length = read_scene_info(path).get("length")
        path = path / TRUTH_NAME
    elif length is None:
        length = read_scene_info(path.parent).get("length")
    return read_truth_csv(path, length=length)
