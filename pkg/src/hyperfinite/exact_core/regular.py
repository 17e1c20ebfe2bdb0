"""Rank, partial inverse and supports: the *-regular ring structure.

Everything here is exact. Row reduction runs fraction-free over the
Gaussian integers (Bareiss style, so entries stay the size of minors) and
only divides by the pivots at the end.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .matrix import DENSE, DIAGONAL, UNIT_SPARSE, ExactMatrix, ShapeError
from .scalar import ONE, ZERO

__all__ = [
    "NotAProjectionError",
    "Projection",
    "SingularMatrixError",
    "Supports",
    "inverse",
    "is_monomial",
    "partial_inverse",
    "range_projection",
    "rank_exact",
    "rref",
    "supports",
]


class SingularMatrixError(ValueError):
    pass


class NotAProjectionError(ValueError):
    pass


def is_monomial(x: ExactMatrix) -> bool:
    """True when every row and every column holds at most one nonzero entry."""
    rows, cols = set(), set()
    for i, j, _ in x.items():
        if i in rows or j in cols:
            return False
        rows.add(i)
        cols.add(j)
    return True


def _eliminate(x: ExactMatrix):
    """Fraction-free (Bareiss) Gauss-Jordan elimination of the dense view of ``x``.

    Every update ``row_j <- (p row_j - q row_k) / p_prev`` divides exactly in
    Z[i], which keeps entries at the size of minors of ``x``. Returns
    (re, im, pivots): integer rows where row k (k < rank) has a nonzero
    Gaussian-integer pivot at column pivots[k] and every other row is zero
    in that column.
    """
    _, re0, im0 = x._dense_parts()
    m, n = re0.shape
    real = im0 is None
    R = [re0[i].copy() for i in range(m)]
    I = None if real else [im0[i].copy() for i in range(m)]
    pivots = []
    prev_r, prev_i = 1, 0
    r = 0
    for c in range(n):
        if r == m:
            break
        k = r
        while k < m and not (R[k][c] or (not real and I[k][c])):
            k += 1
        if k == m:
            continue
        R[r], R[k] = R[k], R[r]
        if not real:
            I[r], I[k] = I[k], I[r]
        pr = R[r][c]
        pi = 0 if real else I[r][c]
        norm = prev_r * prev_r + prev_i * prev_i
        for j in range(m):
            if j == r:
                continue
            qr = R[j][c]
            qi = 0 if real else I[j][c]
            if real:
                R[j] = (pr * R[j] - qr * R[r]) // prev_r
                continue
            nr = pr * R[j] - pi * I[j] - (qr * R[r] - qi * I[r])
            ni = pr * I[j] + pi * R[j] - (qr * I[r] + qi * R[r])
            if prev_i:
                R[j] = (nr * prev_r + ni * prev_i) // norm
                I[j] = (ni * prev_r - nr * prev_i) // norm
            elif prev_r != 1:
                R[j], I[j] = nr // prev_r, ni // prev_r
            else:
                R[j], I[j] = nr, ni
        prev_r, prev_i = pr, pi
        pivots.append(c)
        r += 1
    return R, I, pivots


def rref(x: ExactMatrix) -> tuple[ExactMatrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    R, I, pivots = _eliminate(x)
    m, n = x.shape
    real = I is None
    rows_re, rows_im, norms = [], [], []
    for k, c in enumerate(pivots):
        pr = R[k][c]
        pi = 0 if real else I[k][c]
        if real:
            rows_re.append(R[k])
            rows_im.append(None)
            norms.append(pr)
        else:
            # (R + iI) / (pr + i pi) = (R + iI)(pr - i pi) / |p|^2
            rows_re.append(R[k] * pr + I[k] * pi)
            rows_im.append(I[k] * pr - R[k] * pi)
            norms.append(pr * pr + pi * pi)
    den = 1
    for v in norms:
        den = math.lcm(den, abs(v))
    out_re = np.empty((m, n), dtype=object)
    out_re.fill(0)
    out_im = None if real else np.empty((m, n), dtype=object)
    if out_im is not None:
        out_im.fill(0)
    for k, v in enumerate(norms):
        f = den // v  # v may be negative for real pivots; sign folds into f
        out_re[k] = rows_re[k] * f
        if out_im is not None:
            out_im[k] = rows_im[k] * f
    return ExactMatrix._from_dense_parts(den, out_re, out_im), tuple(pivots)


def _sparse_rank(x: ExactMatrix) -> int:
    rows: dict[int, dict] = {}
    for i, j, v in x.items():
        rows.setdefault(i, {})[j] = v
    rank = 0
    pending = list(rows.values())
    while pending:
        row = pending.pop()
        if not row:
            continue
        c = min(row)
        p = row[c]
        rank += 1
        for other in pending:
            q = other.get(c)
            if q is None:
                continue
            f = q / p
            for j, v in row.items():
                s = other.get(j, ZERO) - f * v
                if s:
                    other[j] = s
                else:
                    other.pop(j, None)
    return rank


def rank_exact(x: ExactMatrix) -> int:
    """Rank over Q(i)."""
    if x.repr_tag == DIAGONAL:
        return sum(1 for v in x.diagonal_entries() if v)
    if x.repr_tag == UNIT_SPARSE:
        if is_monomial(x):
            return len(x.sparse_dict())
        return _sparse_rank(x)
    return len(_eliminate(x)[2])


def inverse(x: ExactMatrix) -> ExactMatrix:
    if not x.is_square():
        raise ShapeError(f"cannot invert a {x.rows}x{x.cols} matrix")
    n = x.rows
    if x.repr_tag != DENSE and is_monomial(x):
        entries = x.sparse_dict()
        if len(entries) < n:
            raise SingularMatrixError("matrix is singular")
        if x.repr_tag == DIAGONAL:
            return ExactMatrix.diagonal([v.inverse() for v in x.diagonal_entries()])
        return ExactMatrix._sparse_unchecked((n, n), {(j, i): v.inverse() for (i, j), v in entries.items()})
    aug = ExactMatrix.hstack([x.to_dense(), ExactMatrix.identity(n)])
    reduced, pivots = rref(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError("matrix is singular")
    return reduced.columns(range(n, 2 * n))


def partial_inverse(x: ExactMatrix) -> ExactMatrix:
    """Moore-Penrose pseudoinverse, exact.

    Dense inputs go through the full-rank factorization ``x = C F`` with
    ``F`` the nonzero rows of the reduced echelon form and ``C`` the pivot
    columns of ``x``; then ``x+ = F* (F F*)^-1 (C* C)^-1 C*``.
    """
    m, n = x.shape
    if x.repr_tag != DENSE and is_monomial(x):
        entries = {(j, i): v.inverse() for i, j, v in x.items()}
        if x.repr_tag == DIAGONAL:
            return ExactMatrix.diagonal([v.inverse() if v else ZERO for v in x.diagonal_entries()])
        return ExactMatrix._sparse_unchecked((n, m), entries)
    reduced, pivots = rref(x)
    r = len(pivots)
    if r == 0:
        return ExactMatrix.zeros(n, m)
    F = ExactMatrix._from_dense_parts(
        reduced._den, reduced._re[:r].copy(), None if reduced._im is None else reduced._im[:r].copy()
    )
    C = x.columns(pivots)
    Fh, Ch = F.adjoint(), C.adjoint()
    return Fh @ inverse(F @ Fh) @ inverse(Ch @ C) @ Ch


def _tidy(x: ExactMatrix) -> ExactMatrix:
    if x.repr_tag == UNIT_SPARSE and x.is_square() and x.is_diagonal():
        return ExactMatrix.diagonal(x.diagonal_entries())
    return x


def range_projection(x: ExactMatrix) -> ExactMatrix:
    """Orthogonal projection onto the column space, ``B (B* B)^-1 B*``.

    ``B`` is the set of pivot columns of ``x``, an exact basis of its range.
    """
    m = x.rows
    if x.repr_tag != DENSE and is_monomial(x):
        used = {i for i, _, _ in x.items()}
        return ExactMatrix.diagonal([ONE if i in used else ZERO for i in range(m)])
    _, pivots = rref(x)
    if not pivots:
        return ExactMatrix.zeros(m, m)
    if len(pivots) == m:
        return ExactMatrix.identity(m)
    B = x.columns(pivots)
    Bh = B.adjoint()
    return B @ inverse(Bh @ B) @ Bh


class Projection:
    """A matrix certified, exactly, to be a hermitian idempotent."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: ExactMatrix, *, check: bool = True):
        if check:
            if not matrix.is_square():
                raise NotAProjectionError(f"projection must be square, got {matrix.rows}x{matrix.cols}")
            if not matrix.is_hermitian():
                raise NotAProjectionError("matrix is not hermitian")
            if not matrix.is_idempotent():
                raise NotAProjectionError("matrix is not idempotent")
        self.matrix = matrix

    @classmethod
    def onto_range(cls, x: ExactMatrix) -> Projection:
        return cls(range_projection(x), check=False)

    @classmethod
    def zero(cls, n: int) -> Projection:
        return cls(ExactMatrix.zeros(n), check=False)

    @classmethod
    def identity(cls, n: int) -> Projection:
        return cls(ExactMatrix.identity(n), check=False)

    @property
    def size(self) -> int:
        return self.matrix.rows

    @property
    def rank(self) -> int:
        # trace of a projection is its rank
        return int(self.matrix.trace().re)

    def complement(self) -> Projection:
        tag = DENSE if self.matrix.repr_tag == DENSE else DIAGONAL
        return Projection(_tidy(ExactMatrix.identity(self.size, tag) - self.matrix), check=False)

    def __eq__(self, other):
        if isinstance(other, Projection):
            return self.matrix == other.matrix
        if isinstance(other, ExactMatrix):
            return self.matrix == other
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Projection({self.matrix!r})"


def _as_matrix(p) -> ExactMatrix:
    return p.matrix if isinstance(p, Projection) else p


def join_projections(p, q) -> Projection:
    """Projection onto range(p) + range(q)."""
    a, b = _as_matrix(p), _as_matrix(q)
    if a.shape != b.shape:
        raise ShapeError(f"cannot join {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    if a.repr_tag != DENSE and b.repr_tag != DENSE and a.is_diagonal() and b.is_diagonal():
        da, db = a.diagonal_entries(), b.diagonal_entries()
        return Projection(ExactMatrix.diagonal([ONE if (u or v) else ZERO for u, v in zip(da, db)]), check=False)
    return Projection.onto_range(ExactMatrix.hstack([a, b]))


class Supports(NamedTuple):
    left: Projection
    right: Projection
    support: Projection


def supports(x: ExactMatrix) -> Supports:
    """Left support ``x i(x)``, right support ``i(x) x`` and their join."""
    if not x.is_square():
        raise ShapeError(f"supports need a square matrix, got {x.rows}x{x.cols}")
    xi = partial_inverse(x)
    left = Projection(_tidy(x @ xi), check=False)
    right = Projection(_tidy(xi @ x), check=False)
    return Supports(left, right, join_projections(left, right))


def left_support(x: ExactMatrix) -> ExactMatrix:
    return _tidy(x @ partial_inverse(x))


def right_support(x: ExactMatrix) -> ExactMatrix:
    return _tidy(partial_inverse(x) @ x)
