"""Second Jacobian ideals, Groebner bases over the rationals, and Nash local algebras."""

from __future__ import annotations

from .errors import (
    DimensionMismatch,
    HypothesisViolation,
    LabelError,
    NashkitError,
    ParseError,
    PreconditionError,
    ResourceCapExceeded,
)
from .gbasis import GroebnerBasis, Ideal, MonomialOrder, groebner, local_dimension, normal_form
from .jac2 import block_triangularize, build_jac2, determinant, maximal_minors, submatrix
from .nash import ContactDatum, contact_invariance_report, contact_transform, milnor_number, nash_algebra2
from .polyring import PolyMap, Polynomial, format_poly, parse, random_poly
from .qforms import q_generator, q_ideal, rhs_decomposition, verify_decomposition

__version__ = "0.1.0"

__all__ = [
    "ContactDatum",
    "DimensionMismatch",
    "GroebnerBasis",
    "HypothesisViolation",
    "Ideal",
    "LabelError",
    "MonomialOrder",
    "NashkitError",
    "ParseError",
    "PolyMap",
    "Polynomial",
    "PreconditionError",
    "ResourceCapExceeded",
    "block_triangularize",
    "build_jac2",
    "contact_invariance_report",
    "contact_transform",
    "determinant",
    "format_poly",
    "groebner",
    "local_dimension",
    "maximal_minors",
    "milnor_number",
    "nash_algebra2",
    "normal_form",
    "parse",
    "q_generator",
    "q_ideal",
    "random_poly",
    "rhs_decomposition",
    "submatrix",
    "verify_decomposition",
]
