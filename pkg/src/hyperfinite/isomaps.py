"""Ring isomorphisms given by conjugation, and the lattice maps they induce.

A conjugation isomorphism is ``x -> a psi(x) a^-1`` where ``psi`` is either
the identity or entrywise complex conjugation (a real-linear, multiplicative
twist). The induced map on projections is ``p -> l(Phi(p))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_core import (
    ExactMatrix,
    Projection,
    ShapeError,
    SingularMatrixError,
    inverse,
    left_support,
    rank_exact,
)
from .spectral import TOL, as_array, polar, spectral_projection

__all__ = [
    "ConjugationIso",
    "conjugation_iso",
    "cutoff_approximation",
    "lattice_image",
    "polar_split",
    "polar_split_residual",
]

TWISTS = ("none", "adjoint")


def _level_of(size: int) -> int | None:
    return size.bit_length() - 1 if size & (size - 1) == 0 else None


@dataclass(frozen=True, eq=False)
class ConjugationIso:
    a: ExactMatrix
    a_inv: ExactMatrix
    level: int | None = None
    twist: str = "none"

    def __post_init__(self):
        if self.twist not in TWISTS:
            raise ValueError(f"twist must be one of {TWISTS}, got {self.twist!r}")
        n = self.a.rows
        if self.a @ self.a_inv != ExactMatrix.identity(n):
            raise ValueError("a_inv is not the inverse of a")

    @classmethod
    def from_conjugator(cls, a: ExactMatrix, twist: str = "none") -> ConjugationIso:
        if not a.is_square():
            raise ShapeError(f"conjugator must be square, got {a.rows}x{a.cols}")
        try:
            a_inv = inverse(a)
        except SingularMatrixError:
            raise SingularMatrixError("conjugator not invertible") from None
        return cls(a, a_inv, _level_of(a.rows), twist)

    def __call__(self, x: ExactMatrix) -> ExactMatrix:
        if x.shape != self.a.shape:
            raise ShapeError(f"cannot conjugate {x.rows}x{x.cols} by {self.a.rows}x{self.a.cols}")
        if self.twist == "adjoint":
            # the adjoint followed by the transpose: entrywise conjugation
            x = x.adjoint().transpose()
        return self.a @ x @ self.a_inv

    def inverse_map(self, y: ExactMatrix) -> ExactMatrix:
        x = self.a_inv @ y @ self.a
        return x.adjoint().transpose() if self.twist == "adjoint" else x


def conjugation_iso(a: ExactMatrix, x: ExactMatrix, twist: str = "none") -> ExactMatrix:
    return ConjugationIso.from_conjugator(a, twist)(x)


def lattice_image(iso: ConjugationIso, p) -> Projection:
    """``l(Phi(p))``, exact."""
    if not isinstance(p, Projection):
        p = Projection(p)
    return Projection(left_support(iso(p.matrix)), check=False)


def polar_split(a) -> tuple[np.ndarray, np.ndarray]:
    """Write ``a = b v`` with ``b = v |a| v*`` positive and ``v`` unitary.

    Conjugation by ``a`` is then conjugation by ``v`` followed by
    conjugation by ``b``.
    """
    if isinstance(a, ExactMatrix):
        if not a.is_square() or rank_exact(a) < a.rows:
            raise SingularMatrixError("conjugator not invertible")
    arr = as_array(a)
    pair = polar(arr)
    v = pair.v
    if v.shape != arr.shape or not np.allclose(v.conj().T @ v, np.identity(arr.shape[0]), atol=1e-8):
        raise SingularMatrixError("conjugator not invertible")
    b = v @ pair.modulus @ v.conj().T
    return (b + b.conj().T) / 2, v


def polar_split_residual(a, samples) -> float:
    """Largest entrywise gap between ``a t a^-1`` and ``b (v t v*) b^-1`` over ``samples``."""
    b, v = polar_split(a)
    arr = as_array(a)
    a_inv = np.linalg.inv(arr)
    b_inv = np.linalg.inv(b)
    worst = 0.0
    for t in samples:
        t = as_array(t)
        direct = arr @ t @ a_inv
        split = b @ (v @ t @ v.conj().T) @ b_inv
        worst = max(worst, float(np.max(np.abs(direct - split))))
    return worst


def cutoff_approximation(x, lam: float, *, tol: float = TOL, with_projection: bool = False):
    """``x e`` with ``e`` the spectral projection of ``|x|`` for ``(0, lam]``.

    With ``with_projection=True`` returns ``(x e, e)``.
    """
    if lam <= 0:
        raise ValueError(f"cutoff must be positive, got {lam}")
    arr = as_array(x)
    e = spectral_projection(arr, lam, "upto", of_modulus=True, tol=tol)
    approx = arr @ e
    return (approx, e) if with_projection else approx
