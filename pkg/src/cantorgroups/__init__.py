"""Exact computation in Higman-Thompson groups, synchronizing transducer
groups and their circle analogues acting on Cantor space."""

from .errors import CantorError
from .words import EventuallyPeriodicPoint, Params, Word

__all__ = ["CantorError", "EventuallyPeriodicPoint", "Params", "Word"]
__version__ = "0.1.0"
