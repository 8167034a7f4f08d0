"""Opening a stream from whatever is on disk."""

from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Tuple, Union

from ..errors import BikedetError, NoFrames
from .frame import Frame, StreamMeta
from .pgm import list_frame_files, load_pgm_sequence
from .y4m import parse_y4m


def open_stream(
    path: Union[str, Path], frame_rate: Optional[Fraction] = None
) -> Tuple[StreamMeta, Iterator[Frame]]:
    """
    Open a PGM sequence directory or a `.y4m` file.

    Args:
        path: Directory of numbered PGM frames, or a Y4M file
        frame_rate: Override for the stream's own frame rate

    Returns:
        Stream metadata and a lazy iterator of frames
    """
    path = Path(path)
    if path.is_dir():
        return load_pgm_sequence(path, frame_rate)
    if not path.is_file():
        raise NoFrames(f"{path} does not exist")
    try:
        data = path.read_bytes()
    except OSError as e:
        raise BikedetError(f"cannot read {path}: {e}") from e
    meta, frames = parse_y4m(data)
    if frame_rate is not None:
        meta = StreamMeta(meta.width, meta.height, frame_rate)
    return meta, frames


def is_stream_dir(path: Union[str, Path]) -> bool:
    """Whether a directory holds a PGM sequence itself (rather than scene sub-directories)."""
    path = Path(path)
    return path.is_dir() and bool(list_frame_files(path))
