from fractions import Fraction

import numpy as np
import pytest

from conftest import to_sympy
from hyperfinite.exact_core import (
    DENSE,
    ExactMatrix,
    NotAProjectionError,
    Projection,
    ShapeError,
    range_projection,
)
from hyperfinite.lattice import (
    NotSubequivalentError,
    join,
    lattice_op,
    leq,
    meet,
    partial_isometry_between,
    subequivalent,
)
from hyperfinite.sampling import random_matrix, random_projection
from hyperfinite.spectral import as_array
from hyperfinite.tower import matrix_unit

half = Fraction(1, 2)
P = ExactMatrix.diagonal([1, 0])
Q = ExactMatrix([[half, half], [half, half]])


def overlapping_pair(rng, n):
    """Two projections whose ranges share a random number of basis vectors."""
    basis = random_matrix(rng, n, n, rank=n, height=6)
    cols = list(range(n))
    a = rng.sample(cols, rng.randint(0, n))
    b = rng.sample(cols, rng.randint(0, n))

    def proj(idx):
        if not idx:
            return Projection.zero(n)
        return Projection(range_projection(basis.columns(sorted(idx))), check=False)

    return proj(a), proj(b), len(set(a) & set(b))


def tr(p):
    return Fraction(p.rank, p.size)


def test_examples():
    assert meet(P, P) == P and join(P, P) == P
    assert meet(P, Q) == ExactMatrix.zeros(2)
    assert join(P, Q) == ExactMatrix.identity(2)
    r = ExactMatrix.diagonal([0, 1])
    assert join(P, r) == P + r
    assert meet(P, r) == ExactMatrix.zeros(2)
    assert lattice_op(P, Q, "join") == ExactMatrix.identity(2)
    with pytest.raises(ValueError):
        lattice_op(P, Q, "xor")


def test_order_examples():
    assert leq(ExactMatrix.zeros(2), P)
    assert leq(P, ExactMatrix.identity(2))
    assert not leq(P, Q)


def test_subequivalent_examples():
    assert subequivalent(P, P)
    assert subequivalent(ExactMatrix.diagonal([1, 0, 0, 0]), ExactMatrix.diagonal([0, 0, 1, 1]))
    assert not subequivalent(ExactMatrix.identity(2), P)


def test_rejects_non_projections():
    with pytest.raises(NotAProjectionError):
        join(ExactMatrix([[1, 1], [0, 0]]), P)
    with pytest.raises(NotAProjectionError):
        meet(ExactMatrix.diagonal([2, 0]), P)
    with pytest.raises(ShapeError):
        join(P, ExactMatrix.identity(4))


def test_meet_rank_matches_sympy(rng):
    # oracle: dim(U cap V) = dim U + dim V - dim(U + V)
    for _ in range(15):
        p, q, _ = overlapping_pair(rng, 4)
        sp_p, sp_q = to_sympy(p.matrix), to_sympy(q.matrix)
        expected = sp_p.rank() + sp_q.rank() - sp_p.row_join(sp_q).rank()
        m = meet(p, q)
        assert m.rank == expected
        assert p.matrix @ m.matrix == m.matrix and q.matrix @ m.matrix == m.matrix


def test_lattice_axioms(rng):
    for _ in range(20):
        n = rng.choice([2, 4])
        p, q, shared = overlapping_pair(rng, n)
        r = random_projection(rng, n, height=5)
        assert join(p, q) == join(q, p)
        assert meet(p, q) == meet(q, p)
        assert join(join(p, q), r) == join(p, join(q, r))
        assert meet(meet(p, q), r) == meet(p, meet(q, r))
        assert join(p, meet(p, q)) == p
        assert meet(p, join(p, q)) == p
        assert join(p, p) == p and meet(q, q) == q
        assert meet(p, q).rank == shared


def test_order_agrees_with_meet_and_join(rng):
    for _ in range(20):
        p, q, _ = overlapping_pair(rng, 4)
        expected = leq(p, q)
        assert (meet(p, q) == p) == expected
        assert (join(p, q) == q) == expected
        assert expected == (p.matrix @ q.matrix == p.matrix)


def test_parallelogram_law(rng):
    for _ in range(20):
        p, q, _ = overlapping_pair(rng, rng.choice([2, 4, 8]))
        assert tr(join(p, q)) + tr(meet(p, q)) == tr(p) + tr(q)


def test_partial_isometry_examples():
    p = ExactMatrix.diagonal([1, 0, 0, 0])
    q = ExactMatrix.diagonal([0, 0, 1, 1])
    u = partial_isometry_between(p, q)
    assert u == matrix_unit((2, 1, 3)).matrix
    assert partial_isometry_between(P, P) == P
    with pytest.raises(NotSubequivalentError, match="not subequivalent"):
        partial_isometry_between(ExactMatrix.identity(2), P)


def test_partial_isometry_exact_diagonal(rng):
    for _ in range(20):
        n = 8
        dp = [rng.randint(0, 1) for _ in range(n)]
        dq = [rng.randint(0, 1) for _ in range(n)]
        if sum(dp) > sum(dq):
            dp, dq = dq, dp
        p, q = ExactMatrix.diagonal(dp), ExactMatrix.diagonal(dq)
        u = partial_isometry_between(p, q.with_tag(DENSE))
        assert u @ u.adjoint() == p
        assert leq(u.adjoint() @ u, q)


def test_partial_isometry_float(rng):
    for _ in range(20):
        n = rng.choice([2, 4])
        p = random_projection(rng, n, height=5)
        q = random_projection(rng, n, rank=rng.randint(p.rank, n), height=5)
        # zero or full projections take the exact path, so go through as_array
        u = as_array(partial_isometry_between(p, q))
        pa, qa = p.matrix.to_numpy(), q.matrix.to_numpy()
        np.testing.assert_allclose(u @ u.conj().T, pa, atol=1e-9)
        right = u.conj().T @ u
        np.testing.assert_allclose(qa @ right, right, atol=1e-9)
