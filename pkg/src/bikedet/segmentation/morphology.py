"""Binary morphology for foreground aftertreatment."""

from typing import Any, Mapping, Union

import numpy as np
from scipy import ndimage

from ..background import ForegroundMask
from ..config import SegmentationParams

ELEMENTS = {
    "box": np.ones((3, 3), dtype=bool),
    "cross": ndimage.generate_binary_structure(2, 1),
}


def _erode(bits: np.ndarray, element: str, iterations: int) -> np.ndarray:
    if iterations == 0:
        return bits
    return ndimage.binary_erosion(
        bits, structure=ELEMENTS[element], iterations=iterations, border_value=0
    )


def _dilate(bits: np.ndarray, element: str, iterations: int) -> np.ndarray:
    if iterations == 0:
        return bits
    return ndimage.binary_dilation(
        bits, structure=ELEMENTS[element], iterations=iterations, border_value=0
    )


def morphological_clean(
    mask: ForegroundMask,
    params: Union[SegmentationParams, Mapping[str, Any], None] = None,
) -> ForegroundMask:
    """
    Opening (erode, dilate) followed by closing (dilate, erode).

    Pixels outside the frame count as background for every step.

    Args:
        mask: Raw foreground mask
        params: Segmentation parameters (elements and iteration counts)

    Returns:
        Cleaned mask of the same size
    """
    p = SegmentationParams.build(params)
    bits = mask.bits
    bits = _erode(bits, p.opening_element, p.opening_iterations)
    bits = _dilate(bits, p.opening_element, p.opening_iterations)
    bits = _dilate(bits, p.closing_element, p.closing_iterations)
    bits = _erode(bits, p.closing_element, p.closing_iterations)
    return ForegroundMask(bits)
