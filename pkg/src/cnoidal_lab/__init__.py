"""Spectral and orbital stability of periodic waves in the defocusing cubic NLS."""

from . import dynamics, elliptic, identities, linops, smallamp, wave
from .config import DEFAULTS, RunConfig

__version__ = "0.1.0"

__all__ = ["dynamics", "elliptic", "identities", "linops", "smallamp", "wave", "RunConfig", "DEFAULTS"]
