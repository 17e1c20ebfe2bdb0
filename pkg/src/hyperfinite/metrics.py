"""Convergence gauges on a tower level: rank metric, measure distance, L^p and L_log.

The rank metric is exact. The others are computed in floats from the
singular profile, with the trace normalized so the identity has trace 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact_core import ExactMatrix, rank_exact
from .spectral import TOL, singular_values, spectral_projection
from .tower import TowerElement, promote

__all__ = [
    "MetricValue",
    "log_norm",
    "lp_norm",
    "measure_certificate",
    "measure_distance",
    "rank_metric",
]


@dataclass(frozen=True)
class MetricValue:
    kind: str  # "rank", "measure", "lp", "log"
    value: Fraction | float
    p: float | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("metric values are nonnegative")

    @property
    def label(self) -> str:
        return f"lp({self.p:g})" if self.kind == "lp" else self.kind


def _matrix(x) -> ExactMatrix:
    return x.matrix if isinstance(x, TowerElement) else x


def rank_metric(x, y) -> Fraction:
    """``rank(x - y) / size``, exact. Tower elements are lifted to a common level."""
    if isinstance(x, TowerElement) and isinstance(y, TowerElement):
        m = max(x.level, y.level)
        diff = promote(x, m).matrix - promote(y, m).matrix
    else:
        diff = _matrix(x) - _matrix(y)
    return Fraction(rank_exact(diff), diff.rows)


def _profile(x) -> np.ndarray:
    return singular_values(x).values


def measure_distance(x) -> float:
    """Distance to zero generating convergence in measure.

    With singular values ``s_1 >= ... >= s_N`` and ``s_{N+1} = 0`` this is
    ``min_k max(s_{k+1}, k/N)`` over ``k = 0..N``: discard the ``k`` largest
    directions (co-trace ``k/N``) and pay the operator norm of what is left.
    """
    s = _profile(x)
    n = len(s)
    tail = np.append(s, 0.0)
    return float(np.min(np.maximum(tail, np.arange(n + 1) / n)))


def measure_certificate(x, tol: float = TOL) -> tuple[float, np.ndarray, float, float]:
    """A projection ``e`` witnessing ``x`` in the neighborhood N(d, d), d = measure_distance(x).

    Returns ``(d, e, cotrace, norm)`` with ``cotrace = tau(1 - e)`` and
    ``norm = ||x e||``. Both are at most ``d`` up to ``tol``.
    """
    d = measure_distance(x)
    arr = _matrix(x).to_numpy()
    n = arr.shape[0]
    above = spectral_projection(arr, d, "above", of_modulus=True, tol=tol)
    e = np.identity(n) - above
    cotrace = float(np.real(np.trace(above))) / n
    norm = float(np.linalg.norm(arr @ e, 2))
    return d, e, cotrace, norm


def lp_norm(x, p: float) -> float:
    """``(tau(|x|^p))^(1/p)`` for ``p >= 1``."""
    if p < 1:
        raise ValueError(f"L^p norm needs p >= 1, got {p}")
    s = _profile(x)
    if math.isinf(p):
        return float(s[0])
    return float(np.mean(s**p) ** (1.0 / p))


def log_norm(x) -> float:
    """``tau(log(1 + |x|))``."""
    return float(np.mean(np.log1p(_profile(x))))
