import numpy as np
import pytest

from hyperfinite.automorphism import build_v
from hyperfinite.exact_core import ExactMatrix, rank_exact
from hyperfinite.sampling import random_matrix, random_positive
from hyperfinite.spectral import TOL, polar, singular_values, spectral_projection


def test_singular_value_examples():
    np.testing.assert_allclose(singular_values(ExactMatrix.identity(2)).values, [1, 1])
    np.testing.assert_allclose(singular_values(build_v(2)).values, [1, 1, 0, 0])
    np.testing.assert_allclose(singular_values(ExactMatrix.diagonal([3, 1])).values, [3, 1])
    assert singular_values(build_v(2)).level == 2


def test_structured_profile_matches_svd(rng):
    for n in range(1, 6):
        v = build_v(n).matrix * 3
        fast = singular_values(v).values
        slow = np.linalg.svd(v.to_numpy(), compute_uv=False)
        np.testing.assert_allclose(fast, slow, atol=1e-12)


def test_profile_count_matches_exact_rank(rng):
    for _ in range(40):
        n = rng.choice([2, 4, 8, 16])
        x = random_matrix(rng, n, rank=rng.randint(0, n), height=8)
        assert singular_values(x).count_above(TOL) == rank_exact(x)


def test_polar_examples():
    pair = polar(ExactMatrix.diagonal([3, 2]))
    np.testing.assert_allclose(pair.v, np.identity(2), atol=1e-12)
    np.testing.assert_allclose(pair.modulus, np.diag([3, 2]), atol=1e-12)

    u = ExactMatrix([["1/2+1/2i", "1/2-1/2i"], ["1/2-1/2i", "1/2+1/2i"]])
    pair = polar(u)
    np.testing.assert_allclose(pair.v, u.to_numpy(), atol=1e-12)
    np.testing.assert_allclose(pair.modulus, np.identity(2), atol=1e-12)

    pair = polar(ExactMatrix([[0, 2], [1, 0]]))
    np.testing.assert_allclose(pair.v, [[0, 1], [1, 0]], atol=1e-12)
    np.testing.assert_allclose(pair.modulus, np.diag([1, 2]), atol=1e-12)


def test_polar_partial_isometry_on_singular_input():
    x = ExactMatrix.diagonal([2, 0])
    pair = polar(x)
    np.testing.assert_allclose(pair.v, np.diag([1, 0]), atol=1e-12)


def test_polar_reconstruction(rng):
    for _ in range(30):
        n = 2 ** rng.randint(1, 4)
        x = random_matrix(rng, n, rank=rng.randint(0, n))
        arr = x.to_numpy()
        pair = polar(x)
        fro = np.linalg.norm(arr)
        assert np.linalg.norm(pair.v @ pair.modulus - arr) <= 1e-9 * (1 + fro)
        # v* v is the right support
        r = np.linalg.pinv(arr) @ arr
        assert np.allclose(pair.v.conj().T @ pair.v, r, atol=1e-8)
        assert np.min(np.linalg.eigvalsh(pair.modulus)) >= -1e-9 * (1 + fro)


def test_spectral_projection_examples():
    h = ExactMatrix.diagonal([3, 1])
    np.testing.assert_allclose(spectral_projection(h, 2, "above"), np.diag([1, 0]), atol=1e-12)
    np.testing.assert_allclose(spectral_projection(h, 2, "upto"), np.diag([0, 1]), atol=1e-12)
    np.testing.assert_allclose(spectral_projection(h, 3, "above"), np.zeros((2, 2)), atol=1e-12)


def test_spectral_projection_tie_goes_to_upto():
    h = ExactMatrix.diagonal([2, 1])
    np.testing.assert_allclose(spectral_projection(h, 2, "upto"), np.identity(2), atol=1e-12)
    np.testing.assert_allclose(spectral_projection(h, 2 - 1e-12, "above"), np.zeros((2, 2)), atol=1e-12)


def test_spectral_projection_rejects_non_hermitian():
    with pytest.raises(ValueError):
        spectral_projection(ExactMatrix([[0, 1], [0, 0]]), 0.5)
    e = spectral_projection(ExactMatrix([[0, 2], [0, 0]]), 1, "above", of_modulus=True)
    np.testing.assert_allclose(e, np.diag([0, 1]), atol=1e-12)


def test_spectral_projections_partition_identity(rng):
    for _ in range(20):
        n = 2 ** rng.randint(1, 4)
        h = random_positive(rng, n, rank=rng.randint(0, n), height=5)
        arr = h.to_numpy()
        w = np.linalg.eigvalsh(arr)
        lam = rng.uniform(0, float(w.max()) + 1)
        above = spectral_projection(h, lam, "above")
        upto = spectral_projection(h, lam, "upto")
        kernel = np.identity(n) - np.linalg.pinv(arr, rcond=1e-10) @ arr
        np.testing.assert_allclose(above + upto + kernel, np.identity(n), atol=1e-7)
