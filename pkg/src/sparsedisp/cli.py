"""Command-line front end.

Exit status: 0 on success, 1 for domain errors (bad arguments, failed
verification), 2 when a search budget or precision ceiling runs out.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import acceptance
from .bounds import CSV_HEADER, bounds_report, report_csv_row, report_json
from .classify import GridSpec, classify_grid, grid_records_csv, render_figure
from .dispersion import DEFAULT_BUDGET, SearchConfig, largest_empty_box
from .errors import BudgetExceeded, DomainError, ResourceError
from .numerics import format_rat, parse_rat
from .pointsets import (
    hammersley,
    k_of_epsilon,
    read_pointset,
    sparse_cardinality,
    sparse_grid,
    write_pointset,
    write_pointset_csv,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def _eps(text: str) -> Fraction:
    eps = parse_rat(text)
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {text}")
    return eps


def _eps_list(text: str) -> list[Fraction]:
    return [_eps(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("..")
        out.extend(range(int(lo), int(hi) + 1) if sep else [int(part)])
    return out


@contextmanager
def _output(path, binary=False):
    if path in (None, "-"):
        yield sys.stdout.buffer if binary else sys.stdout
    else:
        with open(path, "wb" if binary else "w") as fh:
            yield fh


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sparsedisp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a point set")
    g.add_argument("--k", type=int)
    g.add_argument("--eps", type=_eps, help="order is k(eps)")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--hammersley", type=int, metavar="N", help="N-point Hammersley set instead")
    g.add_argument("--format", choices=["text", "csv"], default="text")
    g.add_argument("--out")

    c = sub.add_parser("card", help="size of P(k,d) from the closed formula")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--d", type=int, required=True)

    s = sub.add_parser("disp", help="exact dispersion as a JSON record")
    s.add_argument("--in", dest="infile")
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--no-prune", action="store_true")
    s.add_argument("--out")

    b = sub.add_parser("bounds", help="all size bounds for (eps, d)")
    b.add_argument("--eps", type=_eps_list, required=True, help="comma list, e.g. 1/4,0.1")
    b.add_argument("--d", type=_int_list, required=True, help="comma list or range, e.g. 2..10")
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--log-base", choices=["e", "2"], default="e",
                   help="base of log in the two nonconstructive bounds (non-default: 2)")
    b.add_argument("--out")

    for name, formats, default in (
        ("classify", ["csv", "json"], "csv"),
        ("figure", ["ppm", "svg", "csv"], "ppm"),
    ):
        f = sub.add_parser(name, help=f"{name} the (eps, d) grid")
        f.add_argument("--d", type=_int_list, default=list(range(2, 101)))
        f.add_argument("--eps", type=_eps_list, default=[Fraction(1, n) for n in range(4, 101)])
        f.add_argument("--format", choices=formats, default=default)
        f.add_argument("--threads", type=int, default=1)
        f.add_argument("--out")

    v = sub.add_parser("verify", help="run acceptance checks")
    v.add_argument("suites", nargs="*", choices=["all", *acceptance.SUITES], default=["all"])
    return p


def _cmd_gen(args):
    if args.hammersley is not None:
        ps = hammersley(args.hammersley, args.d)
    else:
        if (args.k is None) == (args.eps is None):
            raise DomainError("gen needs exactly one of --k and --eps")
        k = args.k if args.k is not None else k_of_epsilon(args.eps)
        ps = sparse_grid(k, args.d)
    with _output(args.out) as out:
        if args.format == "csv":
            write_pointset_csv(ps, out)
        else:
            write_pointset(ps, out)


def _cmd_disp(args):
    if args.infile:
        with open(args.infile) as fh:
            ps = read_pointset(fh)
    elif args.k is not None and args.d is not None:
        ps = sparse_grid(args.k, args.d)
    else:
        raise DomainError("disp needs --in or both --k and --d")
    cfg = SearchConfig(budget=args.budget, parallel_slices=args.threads, prune=not args.no_prune)
    try:
        res = largest_empty_box(ps, cfg)
    except BudgetExceeded as exc:
        if exc.best is not None:
            print(f"largest empty box found before stopping: {format_rat(exc.best)}", file=sys.stderr)
        raise
    with _output(args.out) as out:
        out.write(json.dumps(res.to_json()) + "\n")


def _cmd_bounds(args):
    base = "e" if args.log_base == "e" else 2
    reports = [bounds_report(e, d, log_base=base) for e in args.eps for d in args.d]
    with _output(args.out) as out:
        if args.format == "json":
            out.write(json.dumps([report_json(r) for r in reports], indent=1) + "\n")
        else:
            if base != "e":
                out.write("# log base 2 in rudolf/sosnovec (non-default)\n")
            out.write(CSV_HEADER + "\n")
            for r in reports:
                out.write(report_csv_row(r) + "\n")


def _grid(args):
    spec = GridSpec(d_values=args.d, eps_values=args.eps)
    return spec, classify_grid(spec, workers=args.threads)


def _cmd_classify(args):
    spec, matrix = _grid(args)
    with _output(args.out) as out:
        if args.format == "json":
            cells = [
                {"d": d, "eps": format_rat(e), "region": str(cell)}
                for e, row in zip(spec.eps_values, matrix)
                for d, cell in zip(spec.d_values, row)
            ]
            out.write(json.dumps(cells) + "\n")
        else:
            out.write(grid_records_csv(matrix, spec))


def _cmd_figure(args):
    spec, matrix = _grid(args)
    data = render_figure(matrix, args.format, spec)
    with _output(args.out, binary=True) as out:
        out.write(data)


def _cmd_verify(args):
    failed = 0
    for check in acceptance.run_suites(args.suites):
        print(check.line(), flush=True)
        failed += not check.passed
    return 1 if failed else 0


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "card":
            print(sparse_cardinality(args.k, args.d))
            return 0
        handler = {
            "gen": _cmd_gen,
            "disp": _cmd_disp,
            "bounds": _cmd_bounds,
            "classify": _cmd_classify,
            "figure": _cmd_figure,
            "verify": _cmd_verify,
        }[args.command]
        return handler(args) or 0
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
