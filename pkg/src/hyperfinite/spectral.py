"""Double-precision spectral data: singular values, polar parts, spectral projections.

Results here are never used to certify an exact identity; when an exact
answer exists (rank, supports) use :mod:`hyperfinite.exact_core`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_core import DENSE, ExactMatrix, is_monomial

__all__ = [
    "TOL",
    "PolarPair",
    "SingularProfile",
    "as_array",
    "polar",
    "singular_values",
    "spectral_projection",
]

#: Default tolerance for every floating-point predicate in the package.
TOL = 1e-9

ABOVE = "above"  # (lam, inf)
UP_TO = "upto"  # (0, lam]


def _level_of(size: int) -> int | None:
    return size.bit_length() - 1 if size > 0 and size & (size - 1) == 0 else None


def as_array(x) -> np.ndarray:
    if isinstance(x, ExactMatrix):
        return x.to_numpy()
    matrix = getattr(x, "matrix", None)
    if isinstance(matrix, ExactMatrix):
        return matrix.to_numpy()
    return np.asarray(x, dtype=complex)


@dataclass(frozen=True)
class SingularProfile:
    values: np.ndarray  # descending, nonnegative
    level: int | None

    def __post_init__(self):
        v = self.values
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("singular values must be nonnegative and nonincreasing")

    @property
    def size(self) -> int:
        return len(self.values)

    def count_above(self, threshold: float) -> int:
        return int(np.count_nonzero(self.values > threshold))


@dataclass(frozen=True)
class PolarPair:
    v: np.ndarray
    modulus: np.ndarray


def singular_values(x) -> SingularProfile:
    """Singular values in descending order.

    Diagonal and monomial inputs are read off directly, which keeps the
    large structured tower levels out of the SVD.
    """
    if isinstance(x, ExactMatrix) or hasattr(x, "matrix"):
        m = x if isinstance(x, ExactMatrix) else x.matrix
        if not m.is_square():
            raise ValueError(f"singular profile needs a square matrix, got {m.rows}x{m.cols}")
        n = m.rows
        if m.repr_tag != DENSE and is_monomial(m):
            vals = np.zeros(n)
            mags = sorted((abs(complex(v)) for _, _, v in m.items()), reverse=True)
            vals[: len(mags)] = mags
            return SingularProfile(vals, _level_of(n))
        arr = m.to_numpy()
    else:
        arr = as_array(x)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"singular profile needs a square matrix, got shape {arr.shape}")
        n = arr.shape[0]
    vals = np.linalg.svd(arr, compute_uv=False)
    return SingularProfile(np.maximum(vals, 0.0), _level_of(n))


def polar(x, tol: float = TOL) -> PolarPair:
    """Polar decomposition ``x = v |x|`` with ``v`` a partial isometry.

    The initial space of ``v`` is the span of the right singular vectors
    whose singular value exceeds ``tol`` times the largest one, so ``v* v``
    approximates the right support of ``x``.
    """
    arr = as_array(x)
    u, s, vh = np.linalg.svd(arr)
    modulus = (vh.conj().T * s) @ vh
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    keep = s > cutoff
    v = u[:, keep] @ vh[keep, :]
    return PolarPair(v, modulus)


def _hermitian_part(h, of_modulus: bool, tol: float) -> np.ndarray:
    if isinstance(h, ExactMatrix) or hasattr(h, "matrix"):
        m = h if isinstance(h, ExactMatrix) else h.matrix
        if of_modulus:
            arr = m.to_numpy()
            return polar(arr, tol).modulus
        if not m.is_hermitian():
            raise ValueError("spectral projection of a non-hermitian matrix; pass of_modulus=True to use |h|")
        return m.to_numpy()
    arr = as_array(h)
    if of_modulus:
        return polar(arr, tol).modulus
    if not np.allclose(arr, arr.conj().T, atol=tol, rtol=0):
        raise ValueError("spectral projection of a non-hermitian matrix; pass of_modulus=True to use |h|")
    return arr


def spectral_projection(h, lam: float, interval: str = ABOVE, *, of_modulus: bool = False, tol: float = TOL) -> np.ndarray:
    """Projection onto the eigenvectors of ``h`` (or ``|h|``) with eigenvalue in the interval.

    ``interval`` is ``"above"`` for ``(lam, inf)`` or ``"upto"`` for ``(0, lam]``.
    An eigenvalue within ``tol`` of ``lam`` counts as equal to ``lam``, and one
    within ``tol`` of zero counts as zero, so ``(0, lam]`` never picks up the
    kernel.
    """
    if interval not in (ABOVE, UP_TO):
        raise ValueError(f"interval must be {ABOVE!r} or {UP_TO!r}, got {interval!r}")
    arr = _hermitian_part(h, of_modulus, tol)
    arr = (arr + arr.conj().T) / 2
    w, vecs = np.linalg.eigh(arr)
    if interval == ABOVE:
        mask = w > lam + tol
    else:
        mask = (w > tol) & (w <= lam + tol)
    sel = vecs[:, mask]
    return sel @ sel.conj().T
