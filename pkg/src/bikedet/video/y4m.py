"""YUV4MPEG2 (Y4M) luma extraction and mono writing."""

import io
from fractions import Fraction
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Tuple, Union

from ..errors import BikedetError, ParseError, TruncatedStream, UnsupportedFormat
from .frame import DEFAULT_FRAME_RATE, Frame, StreamMeta, parse_frame_rate

SIGNATURE = b"YUV4MPEG2"
FRAME_TAG = b"FRAME"

# chroma tag -> (horizontal, vertical) subsampling; None means no chroma planes
CHROMA_LAYOUTS = {
    "420": (2, 2),
    "420jpeg": (2, 2),
    "420paldv": (2, 2),
    "420mpeg2": (2, 2),
    "mono": None,
}
DEFAULT_CHROMA = "420jpeg"


def _chroma_bytes(width: int, height: int, chroma: str) -> int:
    layout = CHROMA_LAYOUTS[chroma]
    if layout is None:
        return 0
    sx, sy = layout
    return 2 * (-(-width // sx)) * (-(-height // sy))


def parse_y4m_header(line: bytes) -> Tuple[StreamMeta, str]:
    """
    Parse the stream header line (without the trailing newline).

    Returns:
        Stream metadata and the chroma tag
    """
    tokens = line.split(b" ")
    if tokens[0] != SIGNATURE:
        raise ParseError("missing YUV4MPEG2 signature", offset=0)
    width = height = None
    rate = DEFAULT_FRAME_RATE
    chroma = DEFAULT_CHROMA
    offset = len(SIGNATURE) + 1
    for token in tokens[1:]:
        if not token:
            offset += 1
            continue
        key, value = chr(token[0]), token[1:].decode("ascii", errors="replace")
        try:
            if key == "W":
                width = int(value)
            elif key == "H":
                height = int(value)
            elif key == "F":
                rate = parse_frame_rate(value)
            elif key == "C":
                chroma = value
        except ValueError as e:
            raise ParseError(f"bad Y4M header token {token!r}: {e}", offset=offset) from e
        offset += len(token) + 1
    if width is None or height is None or width <= 0 or height <= 0:
        raise ParseError("Y4M header lacks positive W and H", offset=len(line))
    if chroma not in CHROMA_LAYOUTS:
        raise UnsupportedFormat(f"unsupported Y4M chroma tag C{chroma}")
    return StreamMeta(width, height, rate), chroma


def parse_y4m(stream: Union[bytes, BinaryIO]) -> Tuple[StreamMeta, Iterator[Frame]]:
    """
    Parse a Y4M stream, keeping only the luma plane of each FRAME.

    Args:
        stream: Whole stream as bytes, or a binary file object

    Returns:
        Stream metadata and a lazy iterator of frames indexed from 0

    Raises:
        ParseError: Missing signature or malformed header
        UnsupportedFormat: Chroma tag outside the 4:2:0 family and mono
        TruncatedStream: Missing FRAME delimiter or a frame ending mid-plane (while iterating)
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(bytes(stream))
    header = stream.readline()
    if not header.endswith(b"\n"):
        if header.startswith(SIGNATURE):
            raise TruncatedStream("Y4M header line is not terminated")
        raise ParseError("missing YUV4MPEG2 signature", offset=0)
    meta, chroma = parse_y4m_header(header[:-1])
    luma_size = meta.width * meta.height
    chroma_size = _chroma_bytes(meta.width, meta.height, chroma)

    def frames() -> Iterator[Frame]:
        index = 0
        offset = len(header)
        while True:
            tag_line = stream.readline()
            if not tag_line:
                return
            if not tag_line.startswith(FRAME_TAG) or not tag_line.endswith(b"\n"):
                raise TruncatedStream(f"expected FRAME delimiter at byte offset {offset}")
            offset += len(tag_line)
            luma = stream.read(luma_size)
            if len(luma) < luma_size:
                raise TruncatedStream(
                    f"frame {index} ends after {len(luma)} of {luma_size} luma bytes"
                )
            chroma_data = stream.read(chroma_size)
            if len(chroma_data) < chroma_size:
                raise TruncatedStream(
                    f"frame {index} ends after {len(chroma_data)} of {chroma_size} chroma bytes"
                )
            offset += luma_size + chroma_size
            yield Frame.from_bytes(meta.width, meta.height, index, luma)
            index += 1

    return meta, frames()


def encode_y4m(meta: StreamMeta, frames: Iterable[Frame]) -> bytes:
    """Serialize frames as a mono Y4M stream."""
    rate = Fraction(meta.frame_rate)
    parts = [
        f"YUV4MPEG2 W{meta.width} H{meta.height} F{rate.numerator}:{rate.denominator} "
        f"Ip A1:1 Cmono\n".encode("ascii")
    ]
    for frame in frames:
        parts.append(FRAME_TAG + b"\n")
        parts.append(frame.to_bytes())
    return b"".join(parts)


def write_y4m(meta: StreamMeta, frames: Iterable[Frame], path) -> None:
    """Write frames to a mono Y4M file."""
    try:
        Path(path).write_bytes(encode_y4m(meta, frames))
    except OSError as e:
        raise BikedetError(f"cannot write {path}: {e}") from e
