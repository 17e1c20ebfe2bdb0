"""The projection lattice of a matrix level: meet, join, order, comparison.

Meets and joins are exact: a join is the range projection of the two
ranges side by side, and a meet is the orthocomplement of the join of the
orthocomplements.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exact_core import (
    DENSE,
    DIAGONAL,
    ExactMatrix,
    NotAProjectionError,
    ONE,
    Projection,
    ShapeError,
    join_projections,
)
from .spectral import TOL, as_array

__all__ = [
    "NotSubequivalentError",
    "as_projection",
    "join",
    "lattice_op",
    "leq",
    "meet",
    "partial_isometry_between",
    "subequivalent",
]


class NotSubequivalentError(ValueError):
    pass


def as_projection(p) -> Projection:
    if isinstance(p, Projection):
        return p
    if isinstance(p, ExactMatrix):
        return Projection(p)
    raise NotAProjectionError(f"expected a projection, got {type(p).__name__}")


def _pair(p, q) -> tuple[Projection, Projection]:
    p, q = as_projection(p), as_projection(q)
    if p.matrix.shape != q.matrix.shape:
        raise ShapeError(f"projections of different sizes: {p.size} and {q.size}")
    return p, q


def join(p, q) -> Projection:
    p, q = _pair(p, q)
    return join_projections(p, q)


def meet(p, q) -> Projection:
    p, q = _pair(p, q)
    return join_projections(p.complement(), q.complement()).complement()


def lattice_op(p, q, op: str) -> Projection:
    if op == "meet":
        return meet(p, q)
    if op == "join":
        return join(p, q)
    raise ValueError(f"lattice operation must be 'meet' or 'join', got {op!r}")


def leq(p, q) -> bool:
    """``p <= q``, i.e. ``q p = p``."""
    p, q = _pair(p, q)
    return q.matrix @ p.matrix == p.matrix


def subequivalent(p, q) -> bool:
    """Murray-von Neumann subequivalence, decided by the normalized trace."""
    p, q = _pair(p, q)
    return Fraction(p.rank, p.size) <= Fraction(q.rank, q.size)


def _zero_one_diagonal(m: ExactMatrix) -> list[int] | None:
    if not m.is_diagonal():
        return None
    d = m.diagonal_entries()
    if not all(v == 0 or v == 1 for v in d):
        return None
    return [i for i, v in enumerate(d) if v == 1]


def partial_isometry_between(p, q, tol: float = TOL) -> ExactMatrix | np.ndarray:
    """A partial isometry ``u`` with ``u u* = p`` and ``u* u <= q``.

    When both projections are 0/1 diagonal the answer is an exact sum of
    matrix units pairing the k-th diagonal one of ``p`` with the k-th one of
    ``q``. Otherwise orthonormal bases of the two ranges are paired in
    floating point.
    """
    p, q = _pair(p, q)
    if p.rank > q.rank:
        raise NotSubequivalentError(f"not subequivalent: rank {p.rank} > rank {q.rank}")
    dp, dq = _zero_one_diagonal(p.matrix), _zero_one_diagonal(q.matrix)
    if dp is not None and dq is not None:
        n = p.size
        u = ExactMatrix.unit_sparse((n, n), {(i, j): ONE for i, j in zip(dp, dq)})
        return u if p.matrix.repr_tag != DENSE else u.to_dense()
    bp = _orthonormal_range(as_array(p), p.rank, tol)
    bq = _orthonormal_range(as_array(q), q.rank, tol)
    return bp @ bq[:, : p.rank].conj().T


def _orthonormal_range(arr: np.ndarray, rank: int, tol: float) -> np.ndarray:
    w, vecs = np.linalg.eigh((arr + arr.conj().T) / 2)
    order = np.argsort(w)[::-1]
    basis = vecs[:, order[:rank]]
    if rank and w[order[rank - 1]] < 1 - 1e3 * tol:
        raise ValueError("projection eigenvalues are not close to 0/1")
    return basis
