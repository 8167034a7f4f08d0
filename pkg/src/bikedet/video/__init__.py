"""Raw grayscale frame streams: binary PGM sequences and Y4M."""

from .frame import Frame, StreamMeta, parse_frame_rate
from .pgm import (
    load_pgm_sequence,
    parse_pgm,
    read_pgm,
    write_mask_pgm,
    write_pgm,
    write_pgm_sequence,
)
from .stream import is_stream_dir, open_stream
from .y4m import encode_y4m, parse_y4m, write_y4m

__all__ = [
    "Frame",
    "StreamMeta",
    "parse_frame_rate",
    "load_pgm_sequence",
    "parse_pgm",
    "read_pgm",
    "write_pgm",
    "write_mask_pgm",
    "write_pgm_sequence",
    "is_stream_dir",
    "open_stream",
    "parse_y4m",
    "encode_y4m",
    "write_y4m",
]
