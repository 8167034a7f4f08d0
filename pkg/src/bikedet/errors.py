"""Exception hierarchy for bikedet."""

from typing import Optional


class BikedetError(Exception):
    """Base class for every error raised by bikedet."""


class ConfigError(BikedetError):
    """Invalid parameters, configuration file or model/config combination."""


# video_io


class ParseError(BikedetError):
    """Malformed stream header or payload."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class NoFrames(BikedetError):
    """A frame directory holds no matching files."""


class InconsistentDimensions(BikedetError):
    """Frames of one stream disagree on width or height."""


class UnsupportedDepth(BikedetError):
    """PGM maxval above 255."""


class TruncatedStream(BikedetError):
    """A Y4M stream ended before a declared frame was complete."""


class UnsupportedFormat(BikedetError):
    """Y4M chroma layout that carries no plain luma plane we can read."""


# background_model / segmentation / features


class DimensionError(BikedetError):
    """Frame dimensions do not match the model state."""


class DegenerateRegion(BikedetError):
    """Object region with a zero-area bounding box."""


class InsufficientHistory(BikedetError):
    """Speed requested from fewer than two observed centers."""


class MissingFeature(BikedetError):
    """A layout requests a feature that is unset on the vector."""


# classifier


class LayoutError(BikedetError):
    """Feature vector does not satisfy the model layout."""


class EmptyClass(BikedetError):
    """Training set without positives or without negatives."""


class CalibrationError(BikedetError):
    """No positives survive to a cascade stage."""


class ModelFormatError(BikedetError):
    """Model file cannot be parsed."""


# tracking / evaluation


class NoObservations(BikedetError):
    """Fusion requested for a track that was never observed."""


class EvalError(BikedetError):
    """Records and ground truth cannot be compared."""
