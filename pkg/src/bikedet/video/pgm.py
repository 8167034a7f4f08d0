"""Binary PGM (P5) reading and writing, single files and numbered sequences."""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..config import read_toml
from ..errors import (
    BikedetError,
    ConfigError,
    InconsistentDimensions,
    NoFrames,
    ParseError,
    UnsupportedDepth,
)
from .frame import DEFAULT_FRAME_RATE, Frame, StreamMeta, parse_frame_rate

if TYPE_CHECKING:
    from ..background import ForegroundMask

logger = logging.getLogger(__name__)

SIDECAR_NAME = "stream.toml"
FRAME_FILE_PATTERN = re.compile(r"^\d+\.pgm$")

_WHITESPACE = b" \t\n\r\v\f"


def _read_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """Skip whitespace and `#` comments, then read one header token."""
    n = len(data)
    while pos < n:
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise ParseError("unexpected end of PGM header", offset=pos)
    return data[start:pos], pos


def _read_int(data: bytes, pos: int, what: str) -> Tuple[int, int]:
    token, end = _read_token(data, pos)
    if not token.isdigit():
        raise ParseError(f"PGM {what} is not a decimal integer: {token!r}", offset=end - len(token))
    return int(token), end


def parse_pgm(data: bytes, index: int = 0) -> Frame:
    """
    Parse one binary PGM image.

    Args:
        data: Whole file contents
        index: Frame ordinal to assign

    Returns:
        Parsed frame

    Raises:
        ParseError: Malformed header or short payload (with byte offset)
        UnsupportedDepth: maxval above 255
    """
    if data[:2] != b"P5":
        raise ParseError("missing P5 signature", offset=0)
    pos = 2
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ParseError("expected whitespace after P5 signature", offset=pos)
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval, pos = _read_int(data, pos, "maxval")
    if width <= 0 or height <= 0:
        raise ParseError(f"non-positive PGM dimensions {width}x{height}", offset=pos)
    if maxval > 255:
        raise UnsupportedDepth(f"PGM maxval {maxval} exceeds 255 (only 8-bit luma is supported)")
    if maxval == 0:
        raise ParseError("PGM maxval must be positive", offset=pos)
    # exactly one whitespace byte separates maxval from the raster
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ParseError("expected single whitespace after maxval", offset=pos)
    pos += 1
    size = width * height
    payload = data[pos : pos + size]
    if len(payload) < size:
        raise ParseError(
            f"PGM payload holds {len(payload)} bytes, expected {size}", offset=pos + len(payload)
        )
    return Frame.from_bytes(width, height, index, payload)


def read_pgm(path: Union[str, Path], index: int = 0) -> Frame:
    """Read one PGM file; parse errors name the file."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise BikedetError(f"cannot read {path}: {e}") from e
    try:
        return parse_pgm(data, index)
    except ParseError as e:
        wrapped = ParseError(f"{path}: {e}")
        wrapped.offset = e.offset
        raise wrapped from e


def encode_pgm(frame: Frame) -> bytes:
    return f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii") + frame.to_bytes()


def write_pgm(frame: Frame, path: Union[str, Path]) -> None:
    """Write a frame as binary PGM."""
    try:
        Path(path).write_bytes(encode_pgm(frame))
    except OSError as e:
        raise BikedetError(f"cannot write {path}: {e}") from e


def write_mask_pgm(mask: Union["ForegroundMask", np.ndarray], path: Union[str, Path]) -> None:
    """Write a foreground mask (or a bare boolean array) as PGM with foreground=255."""
    bits = np.asarray(getattr(mask, "bits", mask), dtype=bool)
    height, width = bits.shape
    pixels = np.where(bits, np.uint8(255), np.uint8(0))
    write_pgm(Frame(width, height, 0, pixels), path)


def list_frame_files(directory: Union[str, Path]) -> List[Path]:
    """Numbered `.pgm` files of a directory in filename order."""
    root = Path(directory)
    if not root.is_dir():
        raise NoFrames(f"{root} is not a directory")
    return sorted(p for p in root.iterdir() if FRAME_FILE_PATTERN.match(p.name))


def read_sidecar_frame_rate(directory: Union[str, Path]) -> Fraction:
    """Frame rate from the directory's `stream.toml`, 25/1 when absent."""
    sidecar = Path(directory) / SIDECAR_NAME
    if not sidecar.exists():
        return DEFAULT_FRAME_RATE
    value = read_toml(sidecar).get("frame_rate")
    if value is None:
        return DEFAULT_FRAME_RATE
    try:
        return parse_frame_rate(str(value))
    except ValueError as e:
        raise ConfigError(f"{sidecar}: {e}") from e


def load_pgm_sequence(
    directory: Union[str, Path],
    frame_rate: Optional[Fraction] = None,
) -> Tuple[StreamMeta, Iterator[Frame]]:
    """
    Open a directory of numbered PGM frames.

    Dimensions come from the first file; every later file is checked against
    them as it is read.

    Args:
        directory: Directory containing `000.pgm`, `001.pgm`, ...
        frame_rate: Override for the sidecar / default frame rate

    Returns:
        Stream metadata and a lazy iterator of frames indexed from 0

    Raises:
        NoFrames: Directory without matching files
        InconsistentDimensions: A later file differs in size (raised while iterating)
    """
    files = list_frame_files(directory)
    if not files:
        raise NoFrames(f"no numbered .pgm files in {directory}")
    rate = frame_rate if frame_rate is not None else read_sidecar_frame_rate(directory)
    first = read_pgm(files[0], 0)
    meta = StreamMeta(first.width, first.height, rate)
    logger.debug("opened %d PGM frames %dx%d in %s", len(files), meta.width, meta.height, directory)

    def frames() -> Iterator[Frame]:
        yield first
        for index, path in enumerate(files[1:], start=1):
            frame = read_pgm(path, index)
            if (frame.width, frame.height) != (meta.width, meta.height):
                raise InconsistentDimensions(
                    f"{path.name} is {frame.width}x{frame.height}, "
                    f"stream is {meta.width}x{meta.height}"
                )
            yield frame

    return meta, frames()


def write_pgm_sequence(
    frames,
    directory: Union[str, Path],
    meta: Optional[StreamMeta] = None,
    extra: Optional[dict] = None,
) -> int:
    """
    Write frames as `0000.pgm`, `0001.pgm`, ... plus a `stream.toml` sidecar.

    Args:
        frames: Iterable of frames
        directory: Output directory (created)
        meta: Stream metadata for the sidecar frame rate
        extra: Additional scalar sidecar entries (scene id, seed, ...)

    Returns:
        Number of frames written
    """
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    count = 0
    for frame in frames:
        write_pgm(frame, root / f"{frame.index:04d}.pgm")
        count += 1
    rate = meta.frame_rate if meta is not None else DEFAULT_FRAME_RATE
    entries = {"frame_rate": f"{rate.numerator}/{rate.denominator}", **(extra or {})}
    lines = [f"{key} = {_toml_scalar(value)}" for key, value in entries.items()]
    (root / SIDECAR_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return count


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'
