import json
from fractions import Fraction

import pytest
import sympy as sp

from conftest import to_sympy
from hyperfinite import automorphism
from hyperfinite.automorphism import (
    DIVERGENCE_COLUMNS,
    STRUCTURED,
    apply_phi,
    apply_phi_inverse,
    build_a,
    build_c,
    build_v,
    cross_representation_check,
    divergence_csv,
    divergence_table,
    homomorphism_check,
    verify_level,
    verify_levels,
)
from hyperfinite.exact_core import DENSE, DIAGONAL, ExactMatrix, UNIT_SPARSE
from hyperfinite.sampling import random_matrix
from hyperfinite.tower import LevelError, TowerElement, matrix_unit, promote, trace_normalized


def diag(*d):
    return ExactMatrix.diagonal(list(d))


def test_build_c_examples():
    assert build_c(1).matrix == diag(2, 1)
    assert build_c(2).matrix == diag(4, 1, 4, 1)
    assert build_c(3).matrix == diag(8, 1, 8, 1, 8, 1, 8, 1)
    with pytest.raises(LevelError):
        build_c(0)
    with pytest.raises(LevelError):
        build_c(7, DENSE)


def test_build_a_examples():
    assert build_a(1).a.matrix == diag(2, 1)
    assert build_a(2).a.matrix == diag(8, 2, 4, 1)
    g = build_a(2).gamma
    assert g[0] == 4 * g[1] and g[2] == 4 * g[3]
    assert build_a(3).a.matrix == diag(64, 8, 16, 2, 32, 4, 8, 1)


def test_build_a_matches_sympy_product():
    # oracle: multiply the Kronecker-promoted c_k in sympy
    for n in range(1, 5):
        total = sp.eye(2**n)
        for k in range(1, n + 1):
            c = sp.diag(*([2**k, 1] * 2 ** (k - 1)))
            total = total * sp.kronecker_product(c, sp.eye(2 ** (n - k)))
        assert to_sympy(build_a(n).a.matrix) == total


def test_gamma_recursion():
    for n in range(2, 13):
        g, prev = build_a(n).gamma, build_a(n - 1).gamma
        for k in range(len(prev)):
            assert g[2 * k] == 2**n * prev[k]
            assert g[2 * k + 1] == prev[k]


def test_phi_examples():
    x = TowerElement(2, diag(3, "i", 0, 5))
    assert apply_phi(2, x) == x
    assert apply_phi(1, matrix_unit((1, 1, 2))) == matrix_unit((1, 1, 2)) * 2
    assert apply_phi(2, build_v(2)) == build_v(2) * 4
    with pytest.raises(LevelError):
        apply_phi(2, build_v(3))


def test_phi_v_and_modulus():
    for n in range(1, 9):
        v = build_v(n)
        image = apply_phi(n, v)
        assert image == v * 2**n
        # |Phi(v)|^2 = Phi(v)* Phi(v) = 4^n sum e_{2i,2i}
        evens = ExactMatrix.diagonal([i % 2 for i in range(2**n)])
        assert image.matrix.adjoint() @ image.matrix == evens * 4**n


def test_v_examples():
    assert build_v(1) == matrix_unit((1, 1, 2))
    v2 = build_v(2)
    assert trace_normalized(v2 @ v2.adjoint()) == Fraction(1, 2)
    for n in range(1, 7):
        v = build_v(n).matrix
        assert v @ v.adjoint() == ExactMatrix.diagonal([1 - i % 2 for i in range(2**n)])
        assert v.adjoint() @ v == ExactMatrix.diagonal([i % 2 for i in range(2**n)])


def test_phi_is_not_star_preserving():
    for n in range(1, 9):
        v = build_v(n)
        assert apply_phi(n, v.adjoint()) != apply_phi(n, v).adjoint()


def test_tower_coherence_on_units():
    for n in range(2, 5):
        size = 2 ** (n - 1)
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                u = matrix_unit((n - 1, i, j))
                assert apply_phi(n, promote(u, n)) == promote(apply_phi(n - 1, u), n)


def test_dense_and_structured_phi_agree(rng):
    for n in range(1, 5):
        x = TowerElement(n, random_matrix(rng, 2**n, height=6))
        fast = apply_phi(n, x.with_tag(UNIT_SPARSE))
        slow = apply_phi(n, x)
        assert fast == slow
        assert apply_phi_inverse(n, slow) == x


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_verify_level_dense(n):
    report = verify_level(n, DENSE)
    assert report.passed, report.failures()
    assert {c.check_id for c in report.checks} == {
        "commutation",
        "restriction",
        "gamma_ratio",
        "phi_v",
        "trace_left_support",
    }


def test_verify_level_structured():
    for n in range(2, 13):
        assert verify_level(n, STRUCTURED).passed


def test_verify_level_needs_two():
    with pytest.raises(LevelError):
        verify_level(1)


def test_broken_conjugator_is_caught(monkeypatch):
    # perturb one diagonal entry of c_3; the commutation check must report it
    original = automorphism.build_c

    def broken(n, tag=DIAGONAL):
        c = original(n, tag)
        if n != 3:
            return c
        d = list(c.matrix.diagonal_entries())
        d[-2] = d[-2] + 1
        return TowerElement(n, ExactMatrix.diagonal(d).with_tag(tag))

    monkeypatch.setattr(automorphism, "build_c", broken)
    for mode in (STRUCTURED, DENSE):
        result = automorphism._check_commutation(3, mode)
        assert not result.passed
        assert result.witness["unit"][0] == 1


def test_homomorphism_and_cross_representation():
    for n in range(1, 7):
        assert cross_representation_check(n).passed
    for n in range(1, 5):
        assert homomorphism_check(n, seed=7).passed


def test_report_json_fields():
    report = verify_levels([2, 3])
    rows = json.loads(report.to_json())
    assert rows and all({"level", "check_id", "paper_ref", "pass", "witness"} <= set(r) for r in rows)
    keys = [(r["level"], r["check_id"], r["mode"]) for r in rows]
    assert keys == sorted(keys)


def test_parallel_report_is_identical():
    assert verify_levels(range(2, 6), jobs=3).to_json() == verify_levels(range(2, 6)).to_json()


def test_divergence_rows():
    rows = divergence_table(10)
    assert len(rows) == 10
    for r in rows:
        n = r["n"]
        assert r["measure_distance_scaled_v"] == pytest.approx(2.0**-n, abs=1e-12)
        assert r["measure_distance_phi_scaled_v"] == pytest.approx(0.5, abs=1e-12)
        assert r["rank_metric_scaled_v"] == Fraction(1, 2)
        assert r["trace_left_support_phi_v"] == Fraction(1, 2)
        assert r["operator_norm_scale"] == 2**n
    assert rows[2]["measure_distance_scaled_v"] == 0.125
    header = divergence_csv(rows).splitlines()[0]
    assert header == ",".join(DIVERGENCE_COLUMNS)
