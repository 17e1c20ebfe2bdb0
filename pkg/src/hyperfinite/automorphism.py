"""A discontinuous algebra automorphism of the matrix-unit tower.

At level ``n`` the conjugator is ``a_n = c_1 c_2 ... c_n`` (each factor
promoted to level ``n``) where ``c_n`` is diagonal with the pattern
``(2^n, 1)`` repeated ``2^(n-1)`` times, and ``Phi_n(x) = a_n x a_n^-1``.
The maps are coherent along the tower, so they define one automorphism of
the union. The partial isometries ``v_n = sum_i e(n)_{2i-1,2i}`` satisfy
``Phi(v_n) = 2^n v_n``: ``2^-n v_n`` tends to zero in measure while its
image stays at distance 1/2.

Two execution paths exist. The structured path stores ``a_n`` by its
diagonal and conjugates entrywise by ``gamma_i / gamma_j``; it reaches
level 14. The dense path multiplies full exact matrices and is capped at
level 6, where it serves as an independent cross-check.
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact_core import (
    DENSE,
    DIAGONAL,
    UNIT_SPARSE,
    ExactMatrix,
    GaussianRational,
    ONE,
    dumps_matrix,
    inverse,
    left_support,
)
from .metrics import measure_distance, rank_metric
from .tower import (
    DENSE_MAX_LEVEL,
    STRUCTURED_MAX_LEVEL,
    LevelError,
    TowerElement,
    matrix_unit,
    promote,
    trace_normalized,
)

__all__ = [
    "CheckResult",
    "ConjugatorLevel",
    "DIVERGENCE_COLUMNS",
    "VerificationReport",
    "apply_phi",
    "apply_phi_inverse",
    "build_a",
    "build_c",
    "build_v",
    "cross_representation_check",
    "divergence_table",
    "divergence_csv",
    "divergence_markdown",
    "homomorphism_check",
    "verify_level",
    "verify_levels",
]

STRUCTURED = "structured"
MODES = (DENSE, STRUCTURED)


def _range_check(n: int, tag: str, least: int = 1) -> None:
    cap = DENSE_MAX_LEVEL if tag == DENSE else STRUCTURED_MAX_LEVEL
    if not isinstance(n, int) or not (least <= n <= cap):
        raise LevelError(f"level must be in {least}..{cap} for {tag} storage, got {n!r}")


def _tag_for(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return DENSE if mode == DENSE else DIAGONAL


@lru_cache(maxsize=None)
def build_c(n: int, tag: str = DIAGONAL) -> TowerElement:
    _range_check(n, tag)
    big = GaussianRational(2**n)
    diag = ExactMatrix.diagonal([big, ONE] * 2 ** (n - 1))
    return TowerElement(n, diag.with_tag(tag))


@dataclass(frozen=True)
class ConjugatorLevel:
    n: int
    c: TowerElement
    a: TowerElement
    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        scale = 2**self.n
        for k in range(0, len(self.gamma), 2):
            if self.gamma[k] != scale * self.gamma[k + 1]:
                raise ArithmeticError(f"gamma ratio fails at k={k // 2 + 1} on level {self.n}")
        if any(g <= 0 for g in self.gamma):
            raise ArithmeticError("gamma entries must be positive")


@lru_cache(maxsize=None)
def build_a(n: int, tag: str = DIAGONAL) -> ConjugatorLevel:
    """``a_n`` as the product of the promoted ``c_1 .. c_n``."""
    _range_check(n, tag)
    a = build_c(1, tag)
    for k in range(2, n + 1):
        a = promote(a, k) @ build_c(k, tag)
    if not a.matrix.is_diagonal():
        raise ArithmeticError(f"a_{n} is not diagonal")
    gamma = []
    for v in a.matrix.diagonal_entries():
        if not v.is_real():
            raise ArithmeticError(f"a_{n} has a non-real diagonal entry {v}")
        gamma.append(v.re)
    return ConjugatorLevel(n, build_c(n, tag), a, tuple(gamma))


@lru_cache(maxsize=None)
def _dense_inverse(n: int) -> ExactMatrix:
    return inverse(build_a(n, DENSE).a.matrix)


def _conjugate_by_gamma(x: ExactMatrix, gamma, invert: bool = False) -> ExactMatrix:
    if x.repr_tag == DIAGONAL:
        return x
    entries = {}
    for i, j, v in x.items():
        ratio = gamma[j] / gamma[i] if invert else gamma[i] / gamma[j]
        entries[(i, j)] = v * ratio
    return ExactMatrix._sparse_unchecked(x.shape, entries)


def apply_phi(n: int, x: TowerElement) -> TowerElement:
    """``Phi_n(x) = a_n x a_n^-1``, with ``x`` first promoted to level ``n``.

    Dense inputs are conjugated by full matrix products; diagonal and
    unit-sparse inputs entrywise.
    """
    if x.level > n:
        raise LevelError(f"element of level {x.level} is not in R_{n}")
    x = promote(x, n)
    if x.matrix.repr_tag == DENSE:
        a = build_a(n, DENSE).a.matrix
        return TowerElement(n, a @ x.matrix @ _dense_inverse(n))
    return TowerElement(n, _conjugate_by_gamma(x.matrix, build_a(n).gamma))


def apply_phi_inverse(n: int, x: TowerElement) -> TowerElement:
    if x.level > n:
        raise LevelError(f"element of level {x.level} is not in R_{n}")
    x = promote(x, n)
    if x.matrix.repr_tag == DENSE:
        a = build_a(n, DENSE).a.matrix
        return TowerElement(n, _dense_inverse(n) @ x.matrix @ a)
    return TowerElement(n, _conjugate_by_gamma(x.matrix, build_a(n).gamma, invert=True))


@lru_cache(maxsize=None)
def build_v(n: int, tag: str = UNIT_SPARSE) -> TowerElement:
    """The partial isometry ``v_n = sum_i e(n)_{2i-1,2i}`` (defined here for ``n >= 1``)."""
    _range_check(n, tag)
    size = 2**n
    v = ExactMatrix.unit_sparse((size, size), {(2 * i, 2 * i + 1): ONE for i in range(size // 2)})
    return TowerElement(n, v.to_dense() if tag == DENSE else v)


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    level: int
    check_id: str
    paper_ref: str
    passed: bool
    mode: str = STRUCTURED
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "pass": self.passed,
            "mode": self.mode,
            "witness": self.witness,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def merged(self, *others: VerificationReport) -> VerificationReport:
        checks = list(self.checks)
        for o in others:
            checks.extend(o.checks)
        checks.sort(key=lambda c: (c.level, c.check_id, c.mode))
        return VerificationReport(checks)

    def to_json(self) -> str:
        return json.dumps([c.to_dict() for c in self.checks], indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "check_id", "mode", "pass", "paper_ref", "witness"])
        for c in self.checks:
            w.writerow([c.level, c.check_id, c.mode, c.passed, c.paper_ref, json.dumps(c.witness) if c.witness else ""])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = ["| level | check | mode | result | statement |", "|---|---|---|---|---|"]
        for c in self.checks:
            result = "pass" if c.passed else f"FAIL {json.dumps(c.witness)}"
            lines.append(f"| {c.level} | {c.check_id} | {c.mode} | {result} | {c.paper_ref} |")
        return "\n".join(lines) + "\n"


REFS = {
    "commutation": "[c_n, e(n-1)_ij] = 0 for all i, j",
    "restriction": "Phi_n restricted to R_(n-1) equals Phi_(n-1)",
    "gamma_ratio": "a_n = sum_k gamma_k e(n)_kk with gamma_(2k-1) = 2^n gamma_(2k)",
    "phi_v": "Phi_n(v_n) = 2^n v_n",
    "trace_left_support": "tau(l(Phi_n(v_n))) = 1/2",
    "cross_representation": "structured and dense results serialize identically",
    "homomorphism": "Phi_n is a unital algebra automorphism of R_n",
}


def _result(n, check_id, mode, witness=None) -> CheckResult:
    return CheckResult(n, check_id, REFS[check_id], witness is None, mode, witness)


def _unit_of(pos: tuple[int, int]) -> list[int]:
    # a promoted unit e(n-1)_ij occupies positions (2i-2, 2j-2) and (2i-1, 2j-1), 0-based
    return [pos[0] // 2 + 1, pos[1] // 2 + 1]


def _first_difference(x: ExactMatrix, y: ExactMatrix):
    diff = (x - y).to_sparse()
    if diff.is_zero():
        return None
    i, j, v = next(diff.items())
    return (i, j), v


def _generic_element(level: int) -> TowerElement:
    """``sum alpha_ij e(level)_ij`` with pairwise distinct coefficients."""
    size = 2**level
    rows = [[i * size + j + 1 for j in range(size)] for i in range(size)]
    return TowerElement(level, ExactMatrix(rows))


def _generators(level: int):
    """Matrix units ``e_{k,k+1}`` and ``e_{k+1,k}``; they generate R_level as an algebra."""
    size = 2**level
    if size == 1:
        yield matrix_unit((level, 1, 1))
        return
    for k in range(1, size):
        yield matrix_unit((level, k, k + 1))
        yield matrix_unit((level, k + 1, k))


def _check_commutation(n: int, mode: str) -> CheckResult:
    c = build_c(n, _tag_for(mode)).matrix
    if mode == STRUCTURED:
        # [c, e(n-1)_ij] has entries c_{2i-1} - c_{2j-1} and c_{2i} - c_{2j}, so it
        # vanishes for every (i, j) iff c is constant on odd and on even positions.
        d = c.diagonal_entries()
        odd, even = d[0::2], d[1::2]
        for j in range(len(odd)):
            if odd[j] != odd[0] or even[j] != even[0]:
                res = odd[0] - odd[j] if odd[j] != odd[0] else even[0] - even[j]
                return _result(n, "commutation", mode, {"unit": [1, j + 1], "residual": res.format()})
        return _result(n, "commutation", mode)
    # dense: the commutator with a generic element splits into the commutators with
    # the individual units, which have disjoint supports
    x = promote(_generic_element(n - 1), n).matrix
    comm = c @ x - x @ c
    if not comm.is_zero():
        i, j, v = next(comm.items())
        return _result(n, "commutation", mode, {"unit": _unit_of((i, j)), "residual": v.format()})
    if n <= 4:
        size = 2 ** (n - 1)
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                u = promote(matrix_unit((n - 1, i, j), DENSE), n).matrix
                comm = c @ u - u @ c
                if not comm.is_zero():
                    _, _, v = next(comm.items())
                    return _result(n, "commutation", mode, {"unit": [i, j], "residual": v.format()})
    return _result(n, "commutation", mode)


def _check_restriction(n: int, mode: str) -> CheckResult:
    if mode == STRUCTURED:
        elements = _generators(n - 1)
    else:
        elements = [_generic_element(n - 1)]
    for x in elements:
        lhs = apply_phi(n, promote(x, n)).matrix
        rhs = promote(apply_phi(n - 1, x), n).matrix
        diff = _first_difference(lhs, rhs)
        if diff is not None:
            pos, v = diff
            witness = {"position": [pos[0] + 1, pos[1] + 1], "unit": _unit_of(pos), "residual": v.format()}
            return _result(n, "restriction", mode, witness)
    return _result(n, "restriction", mode)


def _check_gamma(n: int, mode: str) -> CheckResult:
    try:
        level = build_a(n, _tag_for(mode))
    except ArithmeticError as exc:
        return _result(n, "gamma_ratio", mode, {"error": str(exc)})
    g = level.gamma
    scale = 2**n
    for k in range(0, len(g), 2):
        if g[k] != scale * g[k + 1]:
            return _result(n, "gamma_ratio", mode, {"k": k // 2 + 1, "residual": str(g[k] - scale * g[k + 1])})
    return _result(n, "gamma_ratio", mode)


def _check_phi_v(n: int, mode: str) -> CheckResult:
    v = build_v(n, DENSE if mode == DENSE else UNIT_SPARSE)
    image = apply_phi(n, v).matrix
    diff = _first_difference(image, v.matrix * 2**n)
    if diff is not None:
        pos, r = diff
        return _result(n, "phi_v", mode, {"position": [pos[0] + 1, pos[1] + 1], "residual": r.format()})
    return _result(n, "phi_v", mode)


def _check_trace(n: int, mode: str) -> CheckResult:
    v = build_v(n, DENSE if mode == DENSE else UNIT_SPARSE)
    support = left_support(apply_phi(n, v).matrix)
    t = trace_normalized(support)
    if t != GaussianRational(Fraction(1, 2)):
        return _result(n, "trace_left_support", mode, {"trace": t.format()})
    return _result(n, "trace_left_support", mode)


def verify_level(n: int, mode: str = STRUCTURED) -> VerificationReport:
    """Run the five exact checks at level ``n`` (``n >= 2``)."""
    _range_check(n, _tag_for(mode), least=2)
    checks = [
        _check_commutation(n, mode),
        _check_restriction(n, mode),
        _check_gamma(n, mode),
        _check_phi_v(n, mode),
        _check_trace(n, mode),
    ]
    return VerificationReport(checks)


def _section4_objects(n: int, mode: str) -> dict[str, ExactMatrix]:
    tag = _tag_for(mode)
    sparse_tag = DENSE if mode == DENSE else UNIT_SPARSE
    v = build_v(n, sparse_tag)
    phi_v = apply_phi(n, v)
    return {
        "c": build_c(n, tag).matrix,
        "a": build_a(n, tag).a.matrix,
        "v": v.matrix,
        "phi_v": phi_v.matrix,
        "phi_v_adjoint": apply_phi(n, v.adjoint()).matrix,
        "phi_inverse_v": apply_phi_inverse(n, v).matrix,
        "left_support_phi_v": left_support(phi_v.matrix),
    }


def cross_representation_check(n: int) -> CheckResult:
    """Compare serialized structured and dense results for every object at level ``n``."""
    _range_check(n, DENSE)
    fast = _section4_objects(n, STRUCTURED)
    slow = _section4_objects(n, DENSE)
    for name in fast:
        if dumps_matrix(fast[name], n) != dumps_matrix(slow[name], n):
            return _result(n, "cross_representation", "both", {"object": name})
    return _result(n, "cross_representation", "both")


def homomorphism_check(n: int, seed: int, samples: int = 4) -> CheckResult:
    """Randomized exact check that ``Phi_n`` is additive, multiplicative, unital and invertible.

    Dense and structured conjugation must also agree on every sample.
    """
    from .sampling import random_matrix

    _range_check(n, DENSE)
    rng = random.Random(seed * 1009 + n)
    size = 2**n
    one = TowerElement(n, ExactMatrix.identity(size))
    if apply_phi(n, one) != one:
        return _result(n, "homomorphism", "both", {"law": "unital"})
    for k in range(samples):
        x = TowerElement(n, random_matrix(rng, size, height=8))
        y = TowerElement(n, random_matrix(rng, size, height=8))
        fx, fy = apply_phi(n, x), apply_phi(n, y)
        laws = {
            "additive": apply_phi(n, x + y) == fx + fy,
            "multiplicative": apply_phi(n, x @ y) == fx @ fy,
            "inverse": apply_phi_inverse(n, fx) == x,
            "structured_agrees": apply_phi(n, x.with_tag(UNIT_SPARSE)).matrix == fx.matrix,
        }
        for law, ok in laws.items():
            if not ok:
                return _result(n, "homomorphism", "both", {"law": law, "sample": k})
    return _result(n, "homomorphism", "both")


def _verify_job(args) -> VerificationReport:
    n, mode = args
    return verify_level(n, mode)


def verify_levels(levels, modes=MODES, jobs: int = 1) -> VerificationReport:
    """Verify several levels; dense checks are skipped above the dense cap.

    The merged report is ordered by (level, check_id, mode) however the
    work was scheduled.
    """
    tasks = [(n, m) for n in levels for m in modes if m == STRUCTURED or n <= DENSE_MAX_LEVEL]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_job, tasks))
    else:
        reports = [_verify_job(t) for t in tasks]
    return VerificationReport().merged(*reports)


# -- divergence table --------------------------------------------------------

DIVERGENCE_COLUMNS = (
    "n",
    "operator_norm_scale",
    "measure_distance_scaled_v",
    "measure_distance_phi_scaled_v",
    "rank_metric_scaled_v",
    "trace_left_support_phi_v",
)


def divergence_table(max_level: int, min_level: int = 1) -> list[dict]:
    """One row per level: ``2^-n v_n`` shrinks in measure, its image does not."""
    _range_check(max_level, UNIT_SPARSE)
    rows = []
    for n in range(min_level, max_level + 1):
        scaled = build_v(n) * Fraction(1, 2**n)
        image = apply_phi(n, scaled)
        zero = TowerElement(n, ExactMatrix.zeros(2**n, tag=UNIT_SPARSE))
        support = left_support(apply_phi(n, build_v(n)).matrix)
        rows.append(
            {
                "n": n,
                "operator_norm_scale": 2**n,
                "measure_distance_scaled_v": measure_distance(scaled.matrix),
                "measure_distance_phi_scaled_v": measure_distance(image.matrix),
                "rank_metric_scaled_v": rank_metric(scaled, zero),
                "trace_left_support_phi_v": trace_normalized(support).re,
            }
        )
    return rows


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def divergence_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DIVERGENCE_COLUMNS)
    for r in rows:
        w.writerow([_cell(r[c]) for c in DIVERGENCE_COLUMNS])
    return buf.getvalue()


def divergence_markdown(rows) -> str:
    lines = ["| " + " | ".join(DIVERGENCE_COLUMNS) + " |", "|" + "---|" * len(DIVERGENCE_COLUMNS)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r[c]) for c in DIVERGENCE_COLUMNS) + " |")
    return "\n".join(lines) + "\n"
