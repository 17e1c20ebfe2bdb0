"""The matrix-unit tower R_0 < R_1 < ... with its normalized trace.

Level ``n`` is realized as 2^n x 2^n matrices with ``e(n)_ij`` the standard
basis matrix. The unital embedding R_n -> R_{n+1} sends ``e(n)_ij`` to
``e(n+1)_{2i-1,2j-1} + e(n+1)_{2i,2j}``, i.e. ``x -> x (x) 1_2``.

Indices in the public API are 1-based, as in the usual matrix-unit notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact_core import DENSE, DIAGONAL, UNIT_SPARSE, ExactMatrix, GaussianRational, ONE, as_scalar

__all__ = [
    "DENSE_MAX_LEVEL",
    "STRUCTURED_MAX_LEVEL",
    "LevelError",
    "MatrixUnitIndex",
    "TowerElement",
    "identity",
    "matrix_unit",
    "promote",
    "promote_matrix",
    "trace_normalized",
]

DENSE_MAX_LEVEL = 6
STRUCTURED_MAX_LEVEL = 14


class LevelError(ValueError):
    pass


def _check_level(n: int, tag: str) -> None:
    if not isinstance(n, int) or n < 0:
        raise LevelError(f"level must be a nonnegative integer, got {n!r}")
    cap = DENSE_MAX_LEVEL if tag == DENSE else STRUCTURED_MAX_LEVEL
    if n > cap:
        raise LevelError(f"level {n} exceeds the {tag} cap of {cap}")


@dataclass(frozen=True)
class MatrixUnitIndex:
    n: int
    i: int
    j: int

    def __post_init__(self):
        if self.n < 0:
            raise LevelError(f"level must be nonnegative, got {self.n}")
        size = 2**self.n
        if not (1 <= self.i <= size and 1 <= self.j <= size):
            raise IndexError(f"matrix unit ({self.i}, {self.j}) outside 1..{size} at level {self.n}")


@dataclass(frozen=True, eq=False)
class TowerElement:
    level: int
    matrix: ExactMatrix

    def __post_init__(self):
        _check_level(self.level, self.matrix.repr_tag)
        size = 2**self.level
        if self.matrix.shape != (size, size):
            raise LevelError(
                f"level {self.level} requires shape {size}x{size}, got {self.matrix.rows}x{self.matrix.cols}"
            )

    @property
    def size(self) -> int:
        return 2**self.level

    def promote(self, m: int) -> TowerElement:
        return promote(self, m)

    def _lift(self, other: TowerElement) -> tuple[ExactMatrix, ExactMatrix, int]:
        m = max(self.level, other.level)
        return promote(self, m).matrix, promote(other, m).matrix, m

    def __add__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        a, b, m = self._lift(other)
        return TowerElement(m, a + b)

    def __sub__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        a, b, m = self._lift(other)
        return TowerElement(m, a - b)

    def __neg__(self):
        return TowerElement(self.level, -self.matrix)

    def __matmul__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        a, b, m = self._lift(other)
        return TowerElement(m, a @ b)

    def __mul__(self, scalar):
        if isinstance(scalar, TowerElement):
            raise TypeError("use @ for products in the tower")
        return TowerElement(self.level, self.matrix * scalar)

    __rmul__ = __mul__

    def adjoint(self) -> TowerElement:
        return TowerElement(self.level, self.matrix.adjoint())

    def with_tag(self, tag: str) -> TowerElement:
        return TowerElement(self.level, self.matrix.with_tag(tag))

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        a, b, _ = self._lift(other)
        return a == b

    __hash__ = None

    def __repr__(self):
        return f"TowerElement(level={self.level}, {self.matrix!r})"


def identity(n: int, tag: str = DIAGONAL) -> TowerElement:
    return TowerElement(n, ExactMatrix.identity(2**n, tag))


def matrix_unit(idx: MatrixUnitIndex | tuple, tag: str = UNIT_SPARSE) -> TowerElement:
    """The matrix unit ``e(n)_ij`` (1-based indices)."""
    if not isinstance(idx, MatrixUnitIndex):
        idx = MatrixUnitIndex(*idx)
    size = 2**idx.n
    unit = ExactMatrix.unit_sparse((size, size), {(idx.i - 1, idx.j - 1): ONE})
    return TowerElement(idx.n, unit.with_tag(tag) if tag != DIAGONAL or idx.i == idx.j else unit)


def promote_matrix(x: ExactMatrix, steps: int) -> ExactMatrix:
    """Apply the doubling embedding ``steps`` times to a square matrix."""
    if steps < 0:
        raise LevelError(f"cannot promote by {steps} steps")
    if steps == 0:
        return x
    k = 2**steps
    if x.repr_tag == DIAGONAL:
        return ExactMatrix.diagonal([v for v in x.diagonal_entries() for _ in range(k)])
    if x.repr_tag == UNIT_SPARSE:
        return ExactMatrix._sparse_unchecked(
            (x.rows * k, x.cols * k),
            {(i * k + t, j * k + t): v for (i, j), v in x.sparse_dict().items() for t in range(k)},
        )
    den, re, im = x._dense_parts()
    eye = np.identity(k, dtype=int).astype(object)
    return ExactMatrix._from_dense_parts(den, np.kron(re, eye), None if im is None else np.kron(im, eye))


def promote(x: TowerElement, m: int) -> TowerElement:
    """Image of ``x`` at level ``m`` under the unital embedding."""
    if m < x.level:
        raise LevelError(f"cannot promote from level {x.level} down to level {m}")
    if m == x.level:
        return x
    _check_level(m, x.matrix.repr_tag)
    return TowerElement(m, promote_matrix(x.matrix, m - x.level))


def trace_normalized(x: TowerElement | ExactMatrix) -> GaussianRational:
    """``trace(x) / size``; invariant under promotion, 1 on the identity."""
    m = x.matrix if isinstance(x, TowerElement) else x
    return m.trace() * as_scalar(Fraction(1, m.rows))
