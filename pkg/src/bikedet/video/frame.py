"""Frame and stream metadata value types."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_FRAME_RATE = Fraction(25, 1)


@dataclass(frozen=True, eq=False)
class Frame:
    """
    One 8-bit luma picture.

    `pixels` is a read-only (height, width) uint8 array, row-major.
    """

    width: int
    height: int
    index: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"frame dimensions must be positive, got {self.width}x{self.height}")
        pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if pixels.size != self.width * self.height:
            raise ValueError(
                f"pixel buffer holds {pixels.size} values, expected {self.width * self.height}"
            )
        pixels = pixels.reshape(self.height, self.width)
        if pixels.flags.writeable:
            pixels = pixels.copy()
            pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_bytes(cls, width: int, height: int, index: int, payload: bytes) -> "Frame":
        return cls(width, height, index, np.frombuffer(payload, dtype=np.uint8))

    def to_bytes(self) -> bytes:
        return self.pixels.tobytes()

    def with_index(self, index: int) -> "Frame":
        return Frame(self.width, self.height, index, self.pixels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.index == other.index
            and np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self) -> int:
        return hash((self.width, self.height, self.index, self.pixels.tobytes()))


@dataclass(frozen=True)
class StreamMeta:
    """Dimensions and frame rate shared by every frame of a stream."""

    width: int
    height: int
    frame_rate: Fraction = DEFAULT_FRAME_RATE

    def __post_init__(self):
        if self.frame_rate.numerator <= 0 or self.frame_rate.denominator <= 0:
            raise ValueError(f"frame rate must be positive, got {self.frame_rate}")


def parse_frame_rate(text: str) -> Fraction:
    """Parse `num:den`, `num/den` or a plain number into a positive Fraction."""
    cleaned = text.strip().replace(":", "/")
    try:
        if "/" in cleaned:
            num, den = cleaned.split("/", 1)
            rate = Fraction(int(num), int(den))
        else:
            rate = Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"invalid frame rate: {text!r}") from e
    if rate <= 0:
        raise ValueError(f"frame rate must be positive, got {text!r}")
    return rate
