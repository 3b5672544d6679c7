"""Doodles on surfaces as combinatorial maps."""

from .core import DoodleMap, Mode, face_trace, genus, validate
from .canonical import canonical_code, doodle_equal, genus_of_doodle, is_trivial_doodle
from .moves import reduce, find_sites

__all__ = [
    "DoodleMap",
    "Mode",
    "canonical_code",
    "doodle_equal",
    "face_trace",
    "find_sites",
    "genus",
    "genus_of_doodle",
    "is_trivial_doodle",
    "reduce",
    "validate",
]
__version__ = "0.1.0"
