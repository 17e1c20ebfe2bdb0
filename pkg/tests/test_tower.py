import itertools
from fractions import Fraction

import pytest

from hyperfinite.exact_core import DENSE, DIAGONAL, UNIT_SPARSE, ExactMatrix, GaussianRational
from hyperfinite.sampling import random_matrix
from hyperfinite.tower import (
    LevelError,
    MatrixUnitIndex,
    TowerElement,
    identity,
    matrix_unit,
    promote,
    trace_normalized,
)


def e(n, i, j, tag=UNIT_SPARSE):
    return matrix_unit((n, i, j), tag)


def test_matrix_unit_examples():
    assert e(1, 1, 2).matrix == ExactMatrix([[0, 1], [0, 0]])
    total = e(2, 1, 1)
    for i in range(2, 5):
        total = total + e(2, i, i)
    assert total == identity(2)
    assert e(1, 1, 2) @ e(1, 2, 1) == e(1, 1, 1)


def test_index_validation():
    with pytest.raises(IndexError):
        MatrixUnitIndex(1, 3, 1)
    with pytest.raises(IndexError):
        MatrixUnitIndex(2, 0, 1)
    with pytest.raises(LevelError):
        TowerElement(2, ExactMatrix.identity(2))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_unit_relations_exhaustive(n):
    size = 2**n
    units = {(i, j): e(n, i, j) for i in range(1, size + 1) for j in range(1, size + 1)}
    zero = TowerElement(n, ExactMatrix.zeros(size, tag=UNIT_SPARSE))
    for (i, j), (k, l) in itertools.product(units, repeat=2):
        assert units[i, j] @ units[k, l] == (units[i, l] if j == k else zero)
    for (i, j), u in units.items():
        assert u.adjoint() == units[j, i]
        # embedding rule: e(n)_ij = e(n+1)_{2i-1,2j-1} + e(n+1)_{2i,2j}
        assert promote(u, n + 1) == e(n + 1, 2 * i - 1, 2 * j - 1) + e(n + 1, 2 * i, 2 * j)
    total = zero
    for i in range(1, size + 1):
        total = total + units[i, i]
    assert total == identity(n)


@pytest.mark.parametrize("n", [5, 8])
def test_unit_relations_randomized(rng, n):
    size = 2**n
    for _ in range(200):
        i, j, k, l = (rng.randint(1, size) for _ in range(4))
        prod = e(n, i, j) @ e(n, k, l)
        assert prod == (e(n, i, l) if j == k else TowerElement(n, ExactMatrix.zeros(size, tag=UNIT_SPARSE)))
        assert promote(e(n, i, j), n + 1) == e(n + 1, 2 * i - 1, 2 * j - 1) + e(n + 1, 2 * i, 2 * j)


def test_promote_examples():
    assert promote(e(1, 1, 1, DIAGONAL), 2).matrix == ExactMatrix.diagonal([1, 1, 0, 0])
    for m in range(0, 6):
        assert promote(identity(0), m) == identity(m)
    a1 = TowerElement(1, ExactMatrix.diagonal([2, 1]))
    # oracle: explicit sum of promoted matrix units
    expected = e(2, 1, 1) * 2 + e(2, 2, 2) * 2 + e(2, 3, 3) + e(2, 4, 4)
    assert promote(a1, 2) == expected
    assert promote(a1, 2).matrix == ExactMatrix.diagonal([2, 2, 1, 1])


def test_promote_down_is_an_error():
    with pytest.raises(LevelError):
        promote(identity(3), 2)


def test_dense_cap():
    with pytest.raises(LevelError):
        promote(TowerElement(6, ExactMatrix.identity(64)), 7)
    assert promote(identity(6), 14).size == 2**14


def test_promotion_matches_unit_expansion(rng):
    # oracle: x = sum x_ij e_ij, so its image is sum x_ij promote(e_ij)
    for _ in range(5):
        x = TowerElement(2, random_matrix(rng, 4, height=5))
        image = TowerElement(4, ExactMatrix.zeros(16, tag=UNIT_SPARSE))
        for i, j, v in x.matrix.items():
            image = image + promote(e(2, i + 1, j + 1), 4) * v
        assert promote(x, 4) == image


@pytest.mark.parametrize("tag", [DENSE, UNIT_SPARSE])
def test_promote_is_unital_star_homomorphism(rng, tag):
    for _ in range(10):
        n = rng.randint(0, 3)
        m = rng.randint(n, 5)
        x = TowerElement(n, random_matrix(rng, 2**n).with_tag(tag))
        y = TowerElement(n, random_matrix(rng, 2**n).with_tag(tag))
        assert promote(x + y, m) == promote(x, m) + promote(y, m)
        assert promote(x @ y, m) == promote(x, m) @ promote(y, m)
        assert promote(x.adjoint(), m) == promote(x, m).adjoint()


def test_trace_examples():
    assert trace_normalized(identity(3)) == 1
    for n in range(0, 5):
        for i in range(1, 2**n + 1):
            assert trace_normalized(e(n, i, i)) == Fraction(1, 2**n)
    a2 = TowerElement(2, ExactMatrix.diagonal([8, 2, 4, 1]))
    assert trace_normalized(a2) == Fraction(15, 4)


def test_trace_is_tracial_and_promotion_invariant(rng):
    for _ in range(20):
        n = rng.randint(0, 4)
        x = TowerElement(n, random_matrix(rng, 2**n))
        y = TowerElement(n, random_matrix(rng, 2**n))
        assert trace_normalized(x @ y) == trace_normalized(y @ x)
        assert trace_normalized(promote(x, 6)) == trace_normalized(x)
        assert isinstance(trace_normalized(x), GaussianRational)
