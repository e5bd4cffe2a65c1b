"""Degree-p Kummer covers of formal curve germs: classification and genus formulas."""

from .analysis import analyze
from .branch import branch_count, newton_polygon
from .degeneration import ADD, ETALE, MULT, DegenerationType, classify_boundary
from .doublepoint import classify_double_cover, different_profile
from .errors import (
    InconsistencyError,
    KummerError,
    MultiplicityError,
    NonReducedError,
    PrecisionError,
    UsageError,
)
from .genus import rh_genus, vanishing_cycles_genus
from .series import SMOOTH, CoverSpec, GermDescriptor, LaurentPoly, parse_cover, parse_laurent
from .singularity import parse_germ, resolve
from .tower import RingTower, make_tower

__version__ = "0.1.0"

__all__ = [
    "ADD", "ETALE", "MULT", "SMOOTH",
    "CoverSpec", "DegenerationType", "GermDescriptor", "LaurentPoly", "RingTower",
    "InconsistencyError", "KummerError", "MultiplicityError", "NonReducedError", "PrecisionError", "UsageError",
    "analyze", "branch_count", "classify_boundary", "classify_double_cover", "different_profile",
    "rh_genus", "make_tower", "newton_polygon", "parse_cover", "parse_germ", "parse_laurent",
    "resolve", "vanishing_cycles_genus",
]
