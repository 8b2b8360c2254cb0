"""Exact lozenge-tiling enumeration for F-cored hexagons."""

from .counting import EngineKind, count_tilings
from .errors import FernhexError, InvalidInput
from .formulas import cored_count, fc_count_formula, macmahon_p, semihex_s
from .lattice import TriRegion, UnitTriangle, down, up
from .regions import FernSpec, cored_layout, f_cored_hexagon, hexagon, semihexagon

__version__ = "0.1.0"

__all__ = [
    "EngineKind",
    "FernSpec",
    "FernhexError",
    "InvalidInput",
    "TriRegion",
    "UnitTriangle",
    "cored_count",
    "cored_layout",
    "count_tilings",
    "down",
    "f_cored_hexagon",
    "fc_count_formula",
    "hexagon",
    "macmahon_p",
    "semihex_s",
    "semihexagon",
    "up",
]
