"""Exact Gaussian-rational linear algebra and the *-regular ring operations."""

from .jsonio import MatrixFormatError, dump_matrix, dumps_matrix, load_matrix, loads_matrix
from .matrix import DENSE, DIAGONAL, REPR_TAGS, UNIT_SPARSE, ExactMatrix, ShapeError, arith
from .regular import (
    NotAProjectionError,
    Projection,
    SingularMatrixError,
    Supports,
    inverse,
    is_monomial,
    join_projections,
    left_support,
    partial_inverse,
    range_projection,
    rank_exact,
    right_support,
    rref,
    supports,
)
from .scalar import ONE, ZERO, GaussianRational, ScalarParseError, as_scalar

__all__ = [
    "DENSE",
    "DIAGONAL",
    "ONE",
    "REPR_TAGS",
    "UNIT_SPARSE",
    "ZERO",
    "ExactMatrix",
    "GaussianRational",
    "MatrixFormatError",
    "NotAProjectionError",
    "Projection",
    "ScalarParseError",
    "ShapeError",
    "SingularMatrixError",
    "Supports",
    "arith",
    "as_scalar",
    "dump_matrix",
    "dumps_matrix",
    "inverse",
    "is_monomial",
    "join_projections",
    "left_support",
    "load_matrix",
    "loads_matrix",
    "partial_inverse",
    "range_projection",
    "rank_exact",
    "right_support",
    "rref",
    "supports",
]
