"""bikedet: bicycle detection in low-resolution surveillance video."""

__version__ = "0.1.0"
