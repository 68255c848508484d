"""Exact calculus for piecewise affine mappings.

Everything runs on rational arithmetic: cells are convex polyhedra in
halfspace form, pieces are affine maps, and all algebra (sums, lattice
sup/inf, composition), graph constructions, canonical min-max / DC forms,
linearity tests, and simplicial interpolation preserve exactness end to
end.  Submodules hold the full API; the names below cover the common path.
"""

from pwacalc.approx import BoxGrid, FunctionOracle, interpolate, sup_error
from pwacalc.covering import Covering, Partition, covers, is_partition, refine_to_partition
from pwacalc.errors import (
    AmbientNotSolid,
    DimensionMismatch,
    ExpressionError,
    InvariantViolation,
    MalformedInput,
    NotConvex,
    OracleFailure,
    PwacalcError,
)
from pwacalc.exprs import Expression, parse_expression
from pwacalc.forms import (
    CommonFamily,
    DcForm,
    MaxMinForm,
    MaxOfAffine,
    MinMaxForm,
    OrderingCone,
    convex_to_max_form,
    eval_form,
    is_convex,
    standard_cone,
    to_common_family,
    to_dc,
    to_min_max,
)
from pwacalc.geometry import AffineMap, Halfspace, Matrix, Vector, rat
from pwacalc.polyhedra import ConvexPolyhedron, PolyhedralSet, whole_space
from pwacalc.pwa import (
    PwaMap,
    ValidationReport,
    affine_as_map,
    compose,
    epigraph,
    eval_map,
    from_coordinates,
    from_graph,
    graph,
    hypograph,
    lattice_inf,
    lattice_sup,
    linear_combine,
    validate,
)
from pwacalc.pwl import Decision, PwlMap, as_pwl, is_piecewise_linear, to_linear_forms
from pwacalc.serialize import detect_kind, dumps, loads

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AmbientNotSolid",
    "BoxGrid",
    "CommonFamily",
    "ConvexPolyhedron",
    "Covering",
    "DcForm",
    "Decision",
    "DimensionMismatch",
    "Expression",
    "ExpressionError",
    "FunctionOracle",
    "Halfspace",
    "InvariantViolation",
    "MalformedInput",
    "Matrix",
    "MaxMinForm",
    "MaxOfAffine",
    "MinMaxForm",
    "NotConvex",
    "OracleFailure",
    "OrderingCone",
    "Partition",
    "PolyhedralSet",
    "PwaMap",
    "PwacalcError",
    "PwlMap",
    "ValidationReport",
    "Vector",
    "affine_as_map",
    "as_pwl",
    "compose",
    "convex_to_max_form",
    "covers",
    "detect_kind",
    "dumps",
    "epigraph",
    "eval_form",
    "eval_map",
    "from_coordinates",
    "from_graph",
    "graph",
    "hypograph",
    "interpolate",
    "is_convex",
    "is_partition",
    "is_piecewise_linear",
    "lattice_inf",
    "lattice_sup",
    "linear_combine",
    "loads",
    "parse_expression",
    "rat",
    "refine_to_partition",
    "standard_cone",
    "sup_error",
    "to_common_family",
    "to_dc",
    "to_linear_forms",
    "to_min_max",
    "validate",
    "whole_space",
]
