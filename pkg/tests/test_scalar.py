from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperfinite.exact_core import GaussianRational, ScalarParseError, as_scalar

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f.numerator) < 10**6)
scalars = st.builds(GaussianRational, fractions, fractions)


def test_normalization_is_structural():
    a = GaussianRational(Fraction(2, 4), Fraction(-3, 6))
    assert (a.re_num, a.re_den, a.im_num, a.im_den) == (1, 2, -1, 2)
    assert a == GaussianRational(Fraction(1, 2), Fraction(-1, 2))


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("8", 8, 0),
        ("-1/2", Fraction(-1, 2), 0),
        ("3/4i", 0, Fraction(3, 4)),
        ("-3/4i", 0, Fraction(-3, 4)),
        ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4)),
        ("+2+5i", 2, 5),
        ("i", 0, 1),
        ("-i", 0, -1),
        ("4/6", Fraction(2, 3), 0),
    ],
)
def test_parse(text, re, im):
    assert GaussianRational.parse(text) == GaussianRational(re, im)


@pytest.mark.parametrize("bad", ["", "1/0", "1.5", "2j", "1/2+", "i2", "1//2", "3/0i"])
def test_parse_rejects(bad):
    with pytest.raises(ScalarParseError):
        GaussianRational.parse(bad)


def test_format_examples():
    assert GaussianRational(8).format() == "8"
    assert GaussianRational(Fraction(1, 2)).format() == "1/2"
    assert GaussianRational(0, Fraction(3, 4)).format() == "3/4i"
    assert GaussianRational(Fraction(1, 2), Fraction(-3, 4)).format() == "1/2-3/4i"


def test_floats_refused():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        GaussianRational(1j)


@given(scalars)
def test_format_parse_round_trip(z):
    assert GaussianRational.parse(z.format()) == z


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1


@given(scalars, scalars)
def test_product_matches_complex_fraction_oracle(a, b):
    # (p + qi)(r + si) computed from the textbook formula on plain fractions
    p, q, r, s = a.re, a.im, b.re, b.im
    assert a * b == GaussianRational(p * r - q * s, p * s + q * r)


@given(scalars, scalars)
def test_conjugation_is_a_ring_automorphism(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.abs2() == (a * a.conjugate()).re
