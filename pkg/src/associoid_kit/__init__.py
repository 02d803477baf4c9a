"""Finite ternary associative structures and their power-set products."""

from __future__ import annotations

from .algebra import FiniteGroup, cyclic, symmetric
from .equivalence import Equiv
from .errors import AssocKitError
from .relations import BinRel, GroundSet, Subset

__all__ = [
    "AssocKitError",
    "BinRel",
    "Equiv",
    "FiniteGroup",
    "GroundSet",
    "Subset",
    "cyclic",
    "symmetric",
]

__version__ = "0.1.0"
