"""Command-line entry point.

Exit status is 0 when every emitted check passes, 1 when a check fails and
2 for usage, parse or shape errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import automorphism, lattice, metrics
from .automorphism import VerificationReport
from .exact_core import (
    ExactMatrix,
    GaussianRational,
    MatrixFormatError,
    ShapeError,
    SingularMatrixError,
    load_matrix,
    partial_inverse,
    rank_exact,
    supports,
)
from .exact_core.regular import NotAProjectionError
from .isomaps import ConjugationIso, lattice_image, polar_split, polar_split_residual
from .lattice import NotSubequivalentError
from .sampling import random_matrix
from .tower import DENSE_MAX_LEVEL, STRUCTURED_MAX_LEVEL, LevelError

COMMANDS = ("verify", "divergence", "norms", "support", "pinv", "lattice", "lattice-map", "polar-split")
FORMATS = ("json", "csv", "md")


class CliError(Exception):
    pass


# -- rendering ---------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, GaussianRational):
        return value.format()
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _jsonable(value):
    if isinstance(value, ExactMatrix):
        return value.format_rows()
    if isinstance(value, (Fraction, GaussianRational)):
        return _cell(value)
    if hasattr(value, "tolist"):
        return [[_cell_complex(v) for v in row] for row in value.tolist()]
    return value


def _cell_complex(v: complex) -> str:
    v = complex(v)
    v = complex(v.real + 0.0, v.imag + 0.0)  # drop signed zeros
    if v.imag == 0:
        return repr(v.real)
    return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}i"


def _matrix_rows(value) -> list[list[str]]:
    if isinstance(value, ExactMatrix):
        return value.format_rows()
    return [[_cell_complex(v) for v in row] for row in value.tolist()]


def render(result: dict, fmt: str) -> str:
    """Render named scalars and matrices as JSON, CSV or markdown."""
    if fmt == "json":
        return json.dumps({k: _jsonable(v) for k, v in result.items()}, indent=2) + "\n"
    scalars = {k: v for k, v in result.items() if not (isinstance(v, ExactMatrix) or hasattr(v, "tolist"))}
    matrices = {k: v for k, v in result.items() if k not in scalars}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if scalars:
            w.writerow(["quantity", "value"])
            for k, v in scalars.items():
                w.writerow([k, _cell(v)])
        for k, v in matrices.items():
            w.writerow([f"# {k}"])
            for row in _matrix_rows(v):
                w.writerow(row)
        return buf.getvalue()
    lines = []
    if scalars:
        lines += ["| quantity | value |", "|---|---|"]
        lines += [f"| {k} | {_cell(v)} |" for k, v in scalars.items()]
    for k, v in matrices.items():
        rows = _matrix_rows(v)
        width = len(rows[0])
        lines += ["", f"**{k}**", "", "| | " + " | ".join(str(j + 1) for j in range(width)) + " |"]
        lines.append("|---|" + "---|" * width)
        lines += [f"| **{i + 1}** | " + " | ".join(r) + " |" for i, r in enumerate(rows)]
    return "\n".join(lines).lstrip("\n") + "\n"


def render_report(report: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return report.to_csv()
    return report.to_markdown()


# -- commands ----------------------------------------------------------------


def _load(path: str) -> ExactMatrix:
    matrix, _ = load_matrix(path)
    return matrix


def cmd_verify(args) -> tuple[str, bool]:
    if not 2 <= args.max_level <= STRUCTURED_MAX_LEVEL:
        raise CliError(f"--max-level must be in 2..{STRUCTURED_MAX_LEVEL} for verify, got {args.max_level}")
    levels = range(2, args.max_level + 1)
    report = automorphism.verify_levels(levels, jobs=args.jobs)
    extra = []
    for n in range(2, min(args.max_level, DENSE_MAX_LEVEL) + 1):
        extra.append(automorphism.cross_representation_check(n))
        extra.append(automorphism.homomorphism_check(n, args.seed))
    report = report.merged(VerificationReport(extra))
    return render_report(report, args.format), report.passed


def cmd_divergence(args) -> tuple[str, bool]:
    if not 1 <= args.max_level <= STRUCTURED_MAX_LEVEL:
        raise CliError(f"--max-level must be in 1..{STRUCTURED_MAX_LEVEL}, got {args.max_level}")
    rows = automorphism.divergence_table(args.max_level)
    if args.format == "csv":
        return automorphism.divergence_csv(rows), True
    if args.format == "json":
        out = [{k: (str(v) if isinstance(v, Fraction) else v) for k, v in r.items()} for r in rows]
        return json.dumps(out, indent=2) + "\n", True
    return automorphism.divergence_markdown(rows), True


def cmd_norms(args) -> tuple[str, bool]:
    x = _load(args.input)
    if not x.is_square():
        raise CliError(f"norms need a square matrix, got {x.rows}x{x.cols}")
    result = {
        "rank_metric_to_zero": Fraction(rank_exact(x), x.rows),
        "measure_distance": metrics.measure_distance(x),
    }
    for p in args.p or [1.0]:
        if p < 1:
            raise CliError(f"--p must be >= 1, got {p}")
        result[f"lp_norm(p={p:g})"] = metrics.lp_norm(x, p)
    result["log_norm"] = metrics.log_norm(x)
    return render(result, args.format), True


def cmd_support(args) -> tuple[str, bool]:
    x = _load(args.input)
    s = supports(x)
    result = {"rank": rank_exact(x), "left": s.left.matrix, "right": s.right.matrix, "support": s.support.matrix}
    return render(result, args.format), True


def cmd_pinv(args) -> tuple[str, bool]:
    x = _load(args.input)
    return render({"partial_inverse": partial_inverse(x)}, args.format), True


def cmd_lattice(args) -> tuple[str, bool]:
    p, q = _load(args.p_file), _load(args.q_file)
    if p.shape != q.shape:
        raise CliError(f"shape mismatch: {p.rows}x{p.cols} vs {q.rows}x{q.cols}")
    if args.op in ("meet", "join"):
        return render({args.op: lattice.lattice_op(p, q, args.op).matrix}, args.format), True
    if args.op == "leq":
        return render({"leq": lattice.leq(p, q)}, args.format), True
    if args.op == "subequivalent":
        return render({"subequivalent": lattice.subequivalent(p, q)}, args.format), True
    u = lattice.partial_isometry_between(p, q, tol=args.tol)
    return render({"partial_isometry": u}, args.format), True


def cmd_lattice_map(args) -> tuple[str, bool]:
    a, p = _load(args.a_file), _load(args.p_file)
    if a.shape != p.shape:
        raise CliError(f"shape mismatch: {a.rows}x{a.cols} vs {p.rows}x{p.cols}")
    iso = ConjugationIso.from_conjugator(a, args.twist)
    return render({"image": iso(p), "lattice_image": lattice_image(iso, p).matrix}, args.format), True


def cmd_polar_split(args) -> tuple[str, bool]:
    a = _load(args.input)
    b, v = polar_split(a)
    rng = random.Random(args.seed)
    samples = [random_matrix(rng, a.rows, height=8) for _ in range(args.samples)]
    residual = polar_split_residual(a, samples)
    ok = residual <= 1e-8
    return render({"residual": residual, "b": b, "v": v}, args.format), ok


HANDLERS = {
    "verify": cmd_verify,
    "divergence": cmd_divergence,
    "norms": cmd_norms,
    "support": cmd_support,
    "pinv": cmd_pinv,
    "lattice": cmd_lattice,
    "lattice-map": cmd_lattice_map,
    "polar-split": cmd_polar_split,
}


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-level", type=int, default=8)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=_positive_float, default=1e-9)
    common.add_argument("--format", choices=FORMATS, default="md")
    common.add_argument("--output", "-o", help="write to this file instead of standard output")

    parser = argparse.ArgumentParser(prog="hyperfinite", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the exact checks for levels 2..max-level")
    p.add_argument("--jobs", type=int, default=1)
    sub.add_parser("divergence", parents=[common], help="measure-distance table for 2^-n v_n and its image")
    p = sub.add_parser("norms", parents=[common], help="rank, measure, L^p and L_log gauges of a matrix file")
    p.add_argument("input")
    p.add_argument("--p", type=float, action="append", help="L^p exponent (repeatable, default 1)")
    p = sub.add_parser("support", parents=[common], help="left, right and two-sided supports")
    p.add_argument("input")
    p = sub.add_parser("pinv", parents=[common], help="exact partial (Moore-Penrose) inverse")
    p.add_argument("input")
    p = sub.add_parser("lattice", parents=[common], help="projection lattice operations")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--op", choices=("meet", "join", "leq", "subequivalent", "partial-isometry"), default="join")
    p = sub.add_parser("lattice-map", parents=[common], help="l(a p a^-1) for a conjugator and a projection")
    p.add_argument("a_file")
    p.add_argument("p_file")
    p.add_argument("--twist", choices=("none", "adjoint"), default="none")
    p = sub.add_parser("polar-split", parents=[common], help="write a conjugator as positive times unitary")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=20)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, ok = HANDLERS[args.command](args)
    except MatrixFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        CliError,
        LevelError,
        ShapeError,
        SingularMatrixError,
        NotAProjectionError,
        NotSubequivalentError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
