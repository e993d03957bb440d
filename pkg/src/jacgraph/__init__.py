"""Cayley sum graphs on (generalized) jacobians of curves over finite fields."""

from .abgroup import GroupStructure, NotAGroupError, cyclic_product, group_structure
from .curve import CurveData, CurveSpecError, ZetaData, count_points_ext, parse_curve, zeta_data
from .ff import make_ext_field
from .jac import CapExceeded, JacContext, ModulusSpec, make_context, parse_modulus, sidon_check
from .spectral import SpectralBoundViolation, normalize_and_judge, spectrum_char, spectrum_dense
from .sumgraph import SumGraphData, build_sum_graph, combinatorics_report
from .survey import jacobian_graph

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "CurveData",
    "CurveSpecError",
    "GroupStructure",
    "JacContext",
    "ModulusSpec",
    "NotAGroupError",
    "SpectralBoundViolation",
    "SumGraphData",
    "ZetaData",
    "build_sum_graph",
    "combinatorics_report",
    "count_points_ext",
    "cyclic_product",
    "group_structure",
    "jacobian_graph",
    "make_context",
    "make_ext_field",
    "normalize_and_judge",
    "parse_curve",
    "parse_modulus",
    "sidon_check",
    "spectrum_char",
    "spectrum_dense",
    "zeta_data",
]
