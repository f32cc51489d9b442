"""Command-line front end: ``rhombus-dist <subcommand> ...``.

CSV output uses ``.`` decimals, ``,`` separators, ``\\n`` line endings and
17 significant digits so every float round-trips.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import distributions, polyfit, sampling, validation
from .moments import moments
from .geometry import AdjacencyCase

CASE_CHOICES = [c.value for c in AdjacencyCase] + ["all"]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _cases(name: str) -> list[AdjacencyCase]:
    return list(AdjacencyCase) if name == "all" else [AdjacencyCase.parse(name)]


def _single_case(args) -> AdjacencyCase:
    if args.case == "all":
        raise ValueError(f"'{args.command}' needs a single case, not 'all'")
    return AdjacencyCase.parse(args.case)


def _positive(text: str) -> float:
    value = float(text)
    if not (value > 0 and np.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _count(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return value


def _dump_json(obj, out):
    json.dump(obj, out, indent=2, allow_nan=False)
    out.write("\n")


def cmd_eval(args, out) -> int:
    case = _single_case(args)
    d = args.d
    p = distributions.pdf(case, args.side, d)
    c = distributions.cdf(case, args.side, d)
    if args.format == "json":
        _dump_json({"case": case.value, "side": args.side, "d": d, "pdf": p, "cdf": c}, out)
    else:
        out.write(f"{fmt(d)},{fmt(p)},{fmt(c)}\n")
    return 0


def cmd_table(args, out) -> int:
    case = _single_case(args)
    if args.points < 2:
        raise ValueError("table needs at least 2 points")
    lo, hi = distributions.support(case, args.side)
    d = np.linspace(lo, hi, args.points)
    p = distributions.pdf(case, args.side, d)
    c = distributions.cdf(case, args.side, d)
    if args.format == "json":
        _dump_json({"case": case.value, "side": args.side,
                    "d": d.tolist(), "pdf": p.tolist(), "cdf": c.tolist()}, out)
        return 0
    out.write("d,pdf,cdf\n")
    for row in zip(d, p, c):
        out.write(",".join(fmt(v) for v in row) + "\n")
    return 0


def cmd_sample(args, out) -> int:
    case = _single_case(args)
    batch = sampling.sample_distances(case, args.side, args.seed, args.n, workers=args.workers)
    if args.format == "json":
        _dump_json({"case": case.value, "side": args.side, "seed": args.seed,
                    "distances": batch.distances.tolist()}, out)
        return 0
    out.write("distance\n")
    out.write("".join(fmt(v) + "\n" for v in batch.distances))
    return 0


def cmd_moments(args, out) -> int:
    records = [moments(case, args.side) for case in _cases(args.case)]
    if args.format == "csv":
        out.write("case,side,mean,second_raw,variance\n")
        for r in records:
            out.write(f"{r.case.value},{fmt(r.side)},{fmt(r.mean)},{fmt(r.second_raw)},{fmt(r.variance)}\n")
    else:
        _dump_json([r.to_dict() for r in records], out)
    return 0


def cmd_validate(args, out) -> int:
    cases = _cases(args.case)
    reports = [validation.check_recursion(args.grid_size),
               validation.check_cdf_recursion(args.grid_size)]
    for case in cases:
        reports.append(validation.check_normalization(case))
        reports.append(validation.check_cdf_pdf(case, args.points_per_branch))
        reports.extend(validation.check_continuity_report(case))
    for r in reports:
        out.write(r.line() + "\n")
    return 0 if all(r.passed for r in reports) else 1


def cmd_fit(args, out) -> int:
    fits = [polyfit.fit_pdf(case, args.degree, args.points, args.side, step=args.step)
            for case in _cases(args.case)]
    docs = [f.to_dict() for f in fits]
    _dump_json(docs[0] if args.case != "all" else docs, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhombus-dist",
        description="Random distance distributions associated with unit rhombuses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, case_default=None, fmt_default="csv"):
        p.add_argument("--case", choices=CASE_CHOICES, default=case_default,
                       required=case_default is None)
        p.add_argument("--side", type=_positive, default=1.0, help="rhombus side length")
        p.add_argument("--format", choices=["csv", "json"], default=fmt_default)
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("eval", help="pdf and cdf at one distance")
    common(p)
    p.add_argument("--d", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="pdf and cdf over the support")
    common(p)
    p.add_argument("--points", type=int, default=500)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sample", help="Monte Carlo distances")
    common(p)
    p.add_argument("--n", type=_count, default=1000)
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moments", help="mean, second raw moment and variance")
    common(p, case_default="all", fmt_default="json")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("validate", help="run the self-consistency checks")
    common(p, case_default="all")
    p.add_argument("--grid-size", type=int, default=10_000)
    p.add_argument("--points-per-branch", type=int, default=1000)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fit", help="least-squares polynomial fit of the pdf")
    common(p, fmt_default="json")
    p.add_argument("--degree", type=int, default=20)
    p.add_argument("--points", type=int, default=polyfit.DEFAULT_GRID_POINTS)
    p.add_argument("--step", type=_positive, default=None,
                   help="grid spacing; overrides --points")
    p.set_defaults(func=cmd_fit)
    return parser


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rhombus-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    buf = io.StringIO(newline="\n")
    try:
        status = args.func(args, buf)
    except (ValueError, ArithmeticError) as exc:
        stderr.write(f"rhombus-dist: error: {exc}\n")
        return 2
    if args.output:
        _write_atomic(args.output, buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
