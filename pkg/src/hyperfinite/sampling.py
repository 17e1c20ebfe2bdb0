"""Seeded random exact matrices for the property and acceptance suites."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact_core import ExactMatrix, GaussianRational, Projection, inverse, rank_exact, range_projection

__all__ = [
    "random_idempotent",
    "random_invertible",
    "random_matrix",
    "random_positive",
    "random_projection",
    "random_projection_chain",
    "random_rational",
    "random_scalar",
    "random_unitary",
]


def random_rational(rng: random.Random, height: int = 16) -> Fraction:
    """A rational with numerator and denominator of absolute value at most ``height``."""
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_scalar(rng: random.Random, height: int = 16, complex_prob: float = 0.3) -> GaussianRational:
    re = random_rational(rng, height)
    im = random_rational(rng, height) if rng.random() < complex_prob else 0
    return GaussianRational(re, im)


def random_matrix(
    rng: random.Random,
    rows: int,
    cols: int | None = None,
    *,
    height: int = 16,
    rank: int | None = None,
    density: float = 1.0,
    complex_prob: float = 0.3,
) -> ExactMatrix:
    """Random exact matrix; ``rank`` caps the rank via a product of thin factors."""
    cols = rows if cols is None else cols

    def entry():
        if density < 1.0 and rng.random() > density:
            return 0
        return random_scalar(rng, height, complex_prob)

    if rank is None:
        return ExactMatrix([[entry() for _ in range(cols)] for _ in range(rows)])
    if rank == 0:
        return ExactMatrix.zeros(rows, cols)
    left = ExactMatrix([[entry() for _ in range(rank)] for _ in range(rows)])
    right = ExactMatrix([[entry() for _ in range(cols)] for _ in range(rank)])
    return left @ right


def random_invertible(rng: random.Random, n: int, *, height: int = 16, complex_prob: float = 0.3) -> ExactMatrix:
    """Rejection-sample an invertible matrix of bounded height."""
    while True:
        a = random_matrix(rng, n, height=height, complex_prob=complex_prob)
        if rank_exact(a) == n:
            return a


def random_projection(rng: random.Random, n: int, rank: int | None = None, **kw) -> Projection:
    """Range projection of a random ``n x rank`` matrix of full column rank."""
    rank = rng.randint(0, n) if rank is None else rank
    if rank == 0:
        return Projection.zero(n)
    while True:
        basis = random_matrix(rng, n, rank, **kw)
        if rank_exact(basis) == rank:
            return Projection(range_projection(basis), check=False)


def random_projection_chain(rng: random.Random, n: int, **kw) -> tuple[Projection, Projection]:
    """A pair ``p <= q``: ``q`` projects onto the span of ``p``'s basis plus extra columns."""
    r1 = rng.randint(0, n)
    r2 = rng.randint(r1, n)
    if r2 == 0:
        zero = Projection.zero(n)
        return zero, zero
    basis = random_matrix(rng, n, r2, **kw)
    q = range_projection(basis)
    p = range_projection(basis.columns(range(r1))) if r1 else ExactMatrix.zeros(n)
    return Projection(p, check=False), Projection(q, check=False)


def random_idempotent(rng: random.Random, n: int, rank: int | None = None, **kw) -> ExactMatrix:
    """``s d s^-1`` with ``d`` a 0/1 diagonal; generally not hermitian."""
    rank = rng.randint(0, n) if rank is None else rank
    s = random_invertible(rng, n, **kw)
    flags = [1] * rank + [0] * (n - rank)
    rng.shuffle(flags)
    return s @ ExactMatrix.diagonal(flags) @ inverse(s)


def random_positive(rng: random.Random, n: int, **kw) -> ExactMatrix:
    """``b* b`` for a random ``b``: hermitian positive semidefinite, exact."""
    b = random_matrix(rng, n, **kw)
    return b.adjoint() @ b


def random_unitary(rng: random.Random, n: int, *, height: int = 4, complex_prob: float = 0.3) -> ExactMatrix:
    """Cayley transform ``(1 - s)(1 + s)^-1`` of a random skew-hermitian ``s``.

    The result is unitary with Gaussian-rational entries; ``1 + s`` is always
    invertible because the eigenvalues of ``s`` are purely imaginary.
    """
    b = random_matrix(rng, n, height=height, complex_prob=complex_prob)
    s = b - b.adjoint()
    one = ExactMatrix.identity(n).to_dense()
    return (one - s) @ inverse(one + s)
