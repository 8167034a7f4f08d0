"""Adaptive background modelling and subtraction."""

from .gmm import ForegroundMask, GmmState, init, update_and_subtract

__all__ = ["ForegroundMask", "GmmState", "init", "update_and_subtract"]
