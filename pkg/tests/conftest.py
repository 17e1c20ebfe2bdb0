import random

import pytest
import sympy as sp

from hyperfinite.exact_core import ExactMatrix

ACCEPTANCE_LINES: list[str] = []


def to_sympy(x: ExactMatrix) -> sp.Matrix:
    return sp.Matrix(
        [[sp.Rational(v.re_num, v.re_den) + sp.I * sp.Rational(v.im_num, v.im_den) for v in row] for row in x.to_rows()]
    )


def sym_equal(a: sp.Matrix, b: sp.Matrix) -> bool:
    return a.shape == b.shape and all(sp.expand(v) == 0 for v in (a - b))


def from_sympy(m: sp.Matrix) -> ExactMatrix:
    from fractions import Fraction

    from hyperfinite.exact_core import GaussianRational

    def conv(v):
        re, im = sp.re(v), sp.im(v)
        return GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))

    return ExactMatrix([[conv(sp.nsimplify(m[i, j])) for j in range(m.cols)] for i in range(m.rows)])


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
