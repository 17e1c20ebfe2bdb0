"""Exact matrices over Q(i) with dense, diagonal and unit-sparse storage.

Dense matrices keep a single positive common denominator together with
integer object arrays for the real and imaginary parts, normalized so that
the denominator shares no factor with the numerators. Products then run as
integer matrix products. Diagonal and unit-sparse matrices keep one
:class:`GaussianRational` per stored entry; they exist so that the diagonal
and monomial objects of the matrix-unit tower can be handled at sizes where
dense storage is out of the question.

The storage tag never changes observable values: equality, indexing and
every operation are defined on the dense view.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .scalar import ONE, ZERO, GaussianRational, as_scalar

__all__ = [
    "DENSE",
    "DIAGONAL",
    "UNIT_SPARSE",
    "REPR_TAGS",
    "ExactMatrix",
    "ShapeError",
    "arith",
]

DENSE = "dense"
DIAGONAL = "diagonal"
UNIT_SPARSE = "unit-sparse"
REPR_TAGS = (DENSE, DIAGONAL, UNIT_SPARSE)


class ShapeError(ValueError):
    pass


def _shape_str(shape) -> str:
    return f"{shape[0]}x{shape[1]}"


def _int_array(rows, cols) -> np.ndarray:
    arr = np.empty((rows, cols), dtype=object)
    arr.fill(0)
    return arr


class ExactMatrix:
    """Immutable exact matrix. Use ``@`` for products and ``*`` for scalars."""

    __slots__ = ("_shape", "_tag", "_den", "_re", "_im", "_diag", "_entries")

    def __init__(self, rows: Iterable[Iterable]):
        rows = [[as_scalar(v) for v in row] for row in rows]
        if not rows or not rows[0]:
            raise ShapeError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        self._init_dense_from_scalars(rows)

    # -- construction -------------------------------------------------------

    def _init_dense_from_scalars(self, rows):
        m, n = len(rows), len(rows[0])
        den = 1
        for row in rows:
            for v in row:
                den = math.lcm(den, v.re_den, v.im_den)
        re = _int_array(m, n)
        im = _int_array(m, n)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v.re:
                    re[i, j] = v.re_num * (den // v.re_den)
                if v.im:
                    im[i, j] = v.im_num * (den // v.im_den)
        self._set_dense(den, re, im)

    def _set_dense(self, den, re, im):
        self._shape = re.shape
        self._tag = DENSE
        self._diag = None
        self._entries = None
        if im is not None and not any(im.flat):
            im = None
        g = den
        if g != 1:
            g = math.gcd(g, *re.flat)
            if im is not None and g != 1:
                g = math.gcd(g, *im.flat)
        if g != 1:
            den //= g
            re = re // g
            if im is not None:
                im = im // g
        re.flags.writeable = False
        if im is not None:
            im.flags.writeable = False
        self._den, self._re, self._im = den, re, im

    @classmethod
    def _from_dense_parts(cls, den, re, im=None) -> ExactMatrix:
        obj = cls.__new__(cls)
        obj._set_dense(den, re, im)
        return obj

    @classmethod
    def from_rows(cls, rows) -> ExactMatrix:
        return cls(rows)

    @classmethod
    def diagonal(cls, entries) -> ExactMatrix:
        diag = tuple(as_scalar(v) for v in entries)
        if not diag:
            raise ShapeError("empty diagonal")
        obj = cls.__new__(cls)
        obj._shape = (len(diag), len(diag))
        obj._tag = DIAGONAL
        obj._den = obj._re = obj._im = obj._entries = None
        obj._diag = diag
        return obj

    @classmethod
    def unit_sparse(cls, shape, entries) -> ExactMatrix:
        """Build from ``{(i, j): scalar}`` or an iterable of ``(i, j, scalar)``.

        Indices are 0-based. Positions must be distinct; zeros are dropped.
        """
        rows, cols = shape
        if rows < 1 or cols < 1:
            raise ShapeError(f"invalid shape {_shape_str(shape)}")
        items = entries.items() if isinstance(entries, dict) else (((i, j), v) for i, j, v in entries)
        stored = {}
        for (i, j), v in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"position ({i}, {j}) outside {_shape_str(shape)}")
            if (i, j) in stored:
                raise ValueError(f"duplicate position ({i}, {j})")
            v = as_scalar(v)
            stored[(i, j)] = v
        return cls._sparse_unchecked((rows, cols), {k: v for k, v in stored.items() if v})

    @classmethod
    def _sparse_unchecked(cls, shape, entries) -> ExactMatrix:
        obj = cls.__new__(cls)
        obj._shape = tuple(shape)
        obj._tag = UNIT_SPARSE
        obj._den = obj._re = obj._im = obj._diag = None
        obj._entries = entries
        return obj

    @classmethod
    def identity(cls, n: int, tag: str = DENSE) -> ExactMatrix:
        if tag == DIAGONAL:
            return cls.diagonal([ONE] * n)
        if tag == UNIT_SPARSE:
            return cls._sparse_unchecked((n, n), {(i, i): ONE for i in range(n)})
        re = _int_array(n, n)
        for i in range(n):
            re[i, i] = 1
        return cls._from_dense_parts(1, re)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, tag: str = DENSE) -> ExactMatrix:
        cols = rows if cols is None else cols
        if tag == DIAGONAL:
            if rows != cols:
                raise ShapeError("diagonal storage needs a square shape")
            return cls.diagonal([ZERO] * rows)
        if tag == UNIT_SPARSE:
            return cls._sparse_unchecked((rows, cols), {})
        return cls._from_dense_parts(1, _int_array(rows, cols))

    @classmethod
    def hstack(cls, blocks) -> ExactMatrix:
        parts = [b._dense_parts() for b in blocks]
        if len({b.rows for b in blocks}) != 1:
            raise ShapeError("hstack needs equal row counts: " + ", ".join(_shape_str(b.shape) for b in blocks))
        den = math.lcm(*(p[0] for p in parts))
        re = np.hstack([p[1] * (den // p[0]) for p in parts])
        if all(p[2] is None for p in parts):
            return cls._from_dense_parts(den, re)
        im = np.hstack([(p[2] if p[2] is not None else _int_array(*p[1].shape)) * (den // p[0]) for p in parts])
        return cls._from_dense_parts(den, re, im)

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    @property
    def repr_tag(self) -> str:
        return self._tag

    def is_square(self) -> bool:
        return self._shape[0] == self._shape[1]

    def _dense_parts(self):
        """(den, re, im-or-None) for the dense view, whatever the storage."""
        if self._tag == DENSE:
            return self._den, self._re, self._im
        m, n = self._shape
        items = list(self.items())
        den = 1
        for _, _, v in items:
            den = math.lcm(den, v.re_den, v.im_den)
        re = _int_array(m, n)
        im = _int_array(m, n)
        has_im = False
        for i, j, v in items:
            if v.re:
                re[i, j] = v.re_num * (den // v.re_den)
            if v.im:
                im[i, j] = v.im_num * (den // v.im_den)
                has_im = True
        return den, re, im if has_im else None

    def items(self) -> Iterator[tuple[int, int, GaussianRational]]:
        """Nonzero entries as ``(i, j, value)``, row-major for dense storage."""
        if self._tag == DIAGONAL:
            for i, v in enumerate(self._diag):
                if v:
                    yield i, i, v
        elif self._tag == UNIT_SPARSE:
            yield from ((i, j, v) for (i, j), v in sorted(self._entries.items()))
        else:
            den, re, im = self._den, self._re, self._im
            m, n = self._shape
            for i in range(m):
                for j in range(n):
                    r = re[i, j]
                    c = 0 if im is None else im[i, j]
                    if r or c:
                        yield i, j, GaussianRational(Fraction(r, den), Fraction(c, den))

    def sparse_dict(self) -> dict:
        if self._tag == UNIT_SPARSE:
            return dict(self._entries)
        return {(i, j): v for i, j, v in self.items()}

    def __getitem__(self, key) -> GaussianRational:
        i, j = key
        m, n = self._shape
        if not (0 <= i < m and 0 <= j < n):
            raise IndexError(f"({i}, {j}) outside {_shape_str(self._shape)}")
        if self._tag == DIAGONAL:
            return self._diag[i] if i == j else ZERO
        if self._tag == UNIT_SPARSE:
            return self._entries.get((i, j), ZERO)
        im = 0 if self._im is None else self._im[i, j]
        return GaussianRational(Fraction(self._re[i, j], self._den), Fraction(im, self._den))

    def diagonal_entries(self) -> tuple[GaussianRational, ...]:
        if self._tag == DIAGONAL:
            return self._diag
        return tuple(self[i, i] for i in range(min(self._shape)))

    def to_rows(self) -> list[list[GaussianRational]]:
        m, n = self._shape
        out = [[ZERO] * n for _ in range(m)]
        for i, j, v in self.items():
            out[i][j] = v
        return out

    def to_dense(self) -> ExactMatrix:
        if self._tag == DENSE:
            return self
        return ExactMatrix._from_dense_parts(*self._dense_parts())

    def to_sparse(self) -> ExactMatrix:
        if self._tag == UNIT_SPARSE:
            return self
        return ExactMatrix._sparse_unchecked(self._shape, self.sparse_dict())

    def to_diagonal(self) -> ExactMatrix:
        if self._tag == DIAGONAL:
            return self
        if not self.is_square() or not self.is_diagonal():
            raise ValueError("matrix is not diagonal")
        return ExactMatrix.diagonal(self.diagonal_entries())

    def with_tag(self, tag: str) -> ExactMatrix:
        if tag == DENSE:
            return self.to_dense()
        if tag == DIAGONAL:
            return self.to_diagonal()
        if tag == UNIT_SPARSE:
            return self.to_sparse()
        raise ValueError(f"unknown representation tag {tag!r}")

    def to_numpy(self) -> np.ndarray:
        """Complex double-precision image, for the floating-point layer."""
        m, n = self._shape
        if self._tag != DENSE:
            out = np.zeros((m, n), dtype=complex)
            for i, j, v in self.items():
                out[i, j] = complex(v)
            return out
        den = self._den
        re = np.array([[float(Fraction(v, den)) for v in row] for row in self._re], dtype=float)
        if self._im is None:
            return re.astype(complex)
        im = np.array([[float(Fraction(v, den)) for v in row] for row in self._im], dtype=float)
        return re + 1j * im

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return next(self.items(), None) is None

    def is_real(self) -> bool:
        if self._tag == DENSE:
            return self._im is None
        return all(v.is_real() for _, _, v in self.items())

    def is_diagonal(self) -> bool:
        if self._tag == DIAGONAL:
            return True
        return all(i == j for i, j, _ in self.items())

    def is_hermitian(self) -> bool:
        return self.is_square() and self == self.adjoint()

    def is_idempotent(self) -> bool:
        return self.is_square() and self @ self == self

    def is_projection(self) -> bool:
        return self.is_hermitian() and self.is_idempotent()

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self._shape != other._shape:
            return False
        if self._tag == DENSE and other._tag == DENSE:
            return (
                self._den == other._den
                and np.array_equal(self._re, other._re)
                and (self._im is None) == (other._im is None)
                and (self._im is None or np.array_equal(self._im, other._im))
            )
        return self.sparse_dict() == other.sparse_dict()

    __hash__ = None

    # -- algebra ------------------------------------------------------------

    def _check_same_shape(self, other, op):
        if self._shape != other._shape:
            raise ShapeError(f"cannot {op} {_shape_str(self._shape)} and {_shape_str(other._shape)}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same_shape(other, "add")
        if self._tag == DIAGONAL and other._tag == DIAGONAL:
            return ExactMatrix.diagonal([a + b for a, b in zip(self._diag, other._diag)])
        if self._tag != DENSE and other._tag != DENSE:
            acc = self.sparse_dict()
            for i, j, v in other.items():
                s = acc.get((i, j), ZERO) + v
                if s:
                    acc[(i, j)] = s
                else:
                    acc.pop((i, j), None)
            return ExactMatrix._sparse_unchecked(self._shape, acc)
        d1, r1, i1 = self._dense_parts()
        d2, r2, i2 = other._dense_parts()
        den = math.lcm(d1, d2)
        f1, f2 = den // d1, den // d2
        re = r1 * f1 + r2 * f2
        if i1 is None and i2 is None:
            im = None
        elif i1 is None:
            im = i2 * f2
        elif i2 is None:
            im = i1 * f1
        else:
            im = i1 * f1 + i2 * f2
        return ExactMatrix._from_dense_parts(den, re, im)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same_shape(other, "subtract")
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, ExactMatrix):
            raise TypeError("use @ for matrix products")
        try:
            s = as_scalar(scalar)
        except TypeError:
            return NotImplemented
        if self._tag == DIAGONAL:
            return ExactMatrix.diagonal([v * s for v in self._diag])
        if self._tag == UNIT_SPARSE:
            if not s:
                return ExactMatrix._sparse_unchecked(self._shape, {})
            return ExactMatrix._sparse_unchecked(self._shape, {k: v * s for k, v in self._entries.items()})
        # (p + qi)/d * (re + im i)/den
        d = s.re_den * s.im_den * self._den
        p = s.re_num * s.im_den
        q = s.im_num * s.re_den
        re, im = self._re, self._im
        new_re = re * p if im is None else re * p - im * q
        if q == 0:
            new_im = None if im is None else im * p
        else:
            new_im = re * q if im is None else re * q + im * p
        return ExactMatrix._from_dense_parts(d, new_re, new_im)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * as_scalar(scalar).inverse()

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {_shape_str(self._shape)} by {_shape_str(other._shape)}")
        shape = (self.rows, other.cols)
        a, b = self._tag, other._tag
        if a == DIAGONAL and b == DIAGONAL:
            return ExactMatrix.diagonal([x * y for x, y in zip(self._diag, other._diag)])
        if a == DIAGONAL and b == UNIT_SPARSE:
            d = self._diag
            return ExactMatrix._sparse_unchecked(
                shape, {(i, j): d[i] * v for (i, j), v in other._entries.items() if d[i]}
            )
        if a == UNIT_SPARSE and b == DIAGONAL:
            d = other._diag
            return ExactMatrix._sparse_unchecked(
                shape, {(i, j): v * d[j] for (i, j), v in self._entries.items() if d[j]}
            )
        if a != DENSE and b != DENSE:
            by_row: dict[int, list] = {}
            for i, j, v in other.items():
                by_row.setdefault(i, []).append((j, v))
            acc: dict = {}
            for i, k, v in self.items():
                for j, w in by_row.get(k, ()):
                    acc[(i, j)] = acc.get((i, j), ZERO) + v * w
            return ExactMatrix._sparse_unchecked(shape, {key: v for key, v in acc.items() if v})
        d1, r1, i1 = self._dense_parts()
        d2, r2, i2 = other._dense_parts()
        re = r1 @ r2
        if i1 is not None and i2 is not None:
            re = re - i1 @ i2
        if i1 is None and i2 is None:
            im = None
        elif i1 is None:
            im = r1 @ i2
        elif i2 is None:
            im = i1 @ r2
        else:
            im = r1 @ i2 + i1 @ r2
        return ExactMatrix._from_dense_parts(d1 * d2, re, im)

    def adjoint(self) -> ExactMatrix:
        """Conjugate transpose."""
        if self._tag == DIAGONAL:
            return ExactMatrix.diagonal([v.conjugate() for v in self._diag])
        if self._tag == UNIT_SPARSE:
            return ExactMatrix._sparse_unchecked(
                (self.cols, self.rows), {(j, i): v.conjugate() for (i, j), v in self._entries.items()}
            )
        im = None if self._im is None else -self._im.T
        return ExactMatrix._from_dense_parts(self._den, self._re.T.copy(), None if im is None else im.copy())

    @property
    def H(self) -> ExactMatrix:
        return self.adjoint()

    def conj(self) -> ExactMatrix:
        """Entrywise complex conjugate (no transpose)."""
        return self.adjoint().transpose()

    def transpose(self) -> ExactMatrix:
        if self._tag == DIAGONAL:
            return self
        if self._tag == UNIT_SPARSE:
            return ExactMatrix._sparse_unchecked(
                (self.cols, self.rows), {(j, i): v for (i, j), v in self._entries.items()}
            )
        im = None if self._im is None else self._im.T.copy()
        return ExactMatrix._from_dense_parts(self._den, self._re.T.copy(), im)

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def trace(self) -> GaussianRational:
        if not self.is_square():
            raise ShapeError(f"trace of non-square {_shape_str(self._shape)}")
        total = ZERO
        for v in self.diagonal_entries():
            total = total + v
        return total

    def columns(self, indices) -> ExactMatrix:
        den, re, im = self._dense_parts()
        idx = list(indices)
        return ExactMatrix._from_dense_parts(den, re[:, idx].copy(), None if im is None else im[:, idx].copy())

    # -- text ---------------------------------------------------------------

    def format_rows(self) -> list[list[str]]:
        return [[v.format() for v in row] for row in self.to_rows()]

    def __repr__(self):
        if self.rows * self.cols <= 64:
            body = "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.format_rows()) + "]"
        else:
            body = "..."
        return f"ExactMatrix({_shape_str(self._shape)}, {self._tag}, {body})"


def arith(x: ExactMatrix, y=None, op: str = "add") -> ExactMatrix:
    """Single entry point for the *-algebra operations.

    ``op`` is one of ``add``, ``sub``, ``mul``, ``scalar_mul`` (``y`` is the
    scalar) and ``adjoint`` (``y`` is ignored).
    """
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x @ y
    if op == "scalar_mul":
        return x * y
    if op == "adjoint":
        return x.adjoint()
    raise ValueError(f"unknown operation {op!r}")
