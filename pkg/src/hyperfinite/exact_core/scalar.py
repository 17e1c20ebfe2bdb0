"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational

__all__ = ["GaussianRational", "ScalarParseError", "as_scalar"]


class ScalarParseError(ValueError):
    pass


_RAT = r"\d+(?:/\d+)?"
_PURE_REAL = re.compile(rf"^([+-]?{_RAT})$")
_PURE_IMAG = re.compile(rf"^([+-]?)({_RAT})?i$")
_MIXED = re.compile(rf"^([+-]?{_RAT})([+-])({_RAT})?i$")


def _parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


class GaussianRational:
    """An element of Q(i), stored as a pair of normalized fractions.

    Instances are immutable; ``Fraction`` keeps both parts in lowest terms
    with a positive denominator, so equality is structural.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        self._re = _to_fraction(re)
        self._im = _to_fraction(im)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @property
    def re_num(self) -> int:
        return self._re.numerator

    @property
    def re_den(self) -> int:
        return self._re.denominator

    @property
    def im_num(self) -> int:
        return self._im.numerator

    @property
    def im_den(self) -> int:
        return self._im.denominator

    def is_real(self) -> bool:
        return self._im == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self._re, -self._im)

    def abs2(self) -> Fraction:
        """Squared modulus, which is always rational."""
        return self._re * self._re + self._im * self._im

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __eq__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._re == other._re and self._im == other._im

    def __hash__(self):
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __neg__(self):
        return GaussianRational(-self._re, -self._im)

    def __add__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re - other._re, self._im - other._im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if b == 0 and d == 0:
            return GaussianRational(a * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self._re / n, -self._im / n)

    def __truediv__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        return self.format()

    def format(self) -> str:
        """Exact text form: ``"8"``, ``"1/2"``, ``"3/4i"``, ``"1/2-3/4i"``."""
        if self._im == 0:
            return str(self._re)
        mag = abs(self._im)
        imag = "i" if mag == 1 else f"{mag}i"
        if self._re == 0:
            return ("-" if self._im < 0 else "") + imag
        return f"{self._re}{'-' if self._im < 0 else '+'}{imag}"

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        s = text.strip().replace(" ", "")
        m = _PURE_REAL.match(s)
        if m:
            return cls(_parse_rational(m.group(1)))
        m = _PURE_IMAG.match(s)
        if m:
            mag = _parse_rational(m.group(2)) if m.group(2) else Fraction(1)
            return cls(0, -mag if m.group(1) == "-" else mag)
        m = _MIXED.match(s)
        if m:
            mag = _parse_rational(m.group(3)) if m.group(3) else Fraction(1)
            return cls(_parse_rational(m.group(1)), -mag if m.group(2) == "-" else mag)
        raise ScalarParseError(f"not an exact Gaussian rational: {text!r}")


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def as_scalar(value) -> GaussianRational:
    """Coerce ints, fractions, exact text, and Gaussian rationals.

    Floats and complex numbers are refused: nothing in the exact layer
    is allowed to pick up rounding.
    """
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, str):
        return GaussianRational.parse(value)
    if isinstance(value, (Integral, Rational)):
        return GaussianRational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")
