"""Command-line interface: ``stablerank <command> ...``.

Exit codes: 0 success, 1 unreadable input, 2 violated precondition,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .barcode import bar_decomposition
from .contours import parse_contour
from .hardness import BENCH_COLUMNS, BandSpec, band_functor, bench_row, graph_to_minrank, hardness_pipeline
from .homology import betti_diagrams, euler_characteristic
from .io import FormatError, csv_text, fmt_point, format_barcode, format_module, parse_graph, parse_module, q
from .linalg import BudgetExceeded, PreconditionError, rational
from .noise import noise_contains, shift
from .stable_rank import fingerprint_r1, minrank_solve, stable_rank_bruteforce, stable_rank_function

EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def _rat(text: str) -> Fraction:
    try:
        return rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a non-negative rational: {text!r}") from exc


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _contour(text: str, r: int):
    try:
        C = parse_contour(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from exc
    if C.r != r:
        raise PreconditionError(f"contour has {C.r} coordinates but the module has r = {r}")
    return C


def cmd_betti(args, out):
    G = parse_module(_read(args.file))
    diagrams = betti_diagrams(G.frame)
    degrees = [args.n] if args.n is not None else range(len(diagrams))
    for n in degrees:
        if n < 0:
            raise PreconditionError("homological degree must be non-negative")
        for v, m in sorted(diagrams[n].items() if n < len(diagrams) else []):
            out.write(f"{n}: {m} @ {fmt_point(G.coordinate(v))}\n")


def cmd_euler(args, out):
    G = parse_module(_read(args.file))
    out.write(f"{euler_characteristic(G.frame)}\n")


def cmd_barcode(args, out):
    G = parse_module(_read(args.file))
    out.write(format_barcode(bar_decomposition(G.frame).scaled(G.alpha)))


def cmd_shift(args, out):
    G = parse_module(_read(args.file))
    C = _contour(args.contour, G.r)
    out.write(format_module(shift(G, C, _rat(args.tau)).shifted))


def cmd_noise_test(args, out):
    G = parse_module(_read(args.file))
    C = _contour(args.contour, G.r)
    out.write("true\n" if noise_contains(G, C, _rat(args.eps)) else "false\n")


def cmd_stable_rank(args, out):
    G = parse_module(_read(args.file))
    C = _contour(args.contour, G.r)
    if args.sweep:
        f = stable_rank_function(G, C, args.budget, method=args.method, jobs=args.jobs)
        out.write(f.to_csv())
        return
    if args.tau is None:
        raise PreconditionError("stable-rank needs --tau unless --sweep is given")
    tau = _rat(args.tau)
    if args.method == "bruteforce" or (args.method == "auto" and G.r > 1):
        value = stable_rank_bruteforce(G, C, tau, args.budget, jobs=args.jobs)
    else:
        value = stable_rank_function(G, C, method="r1")(tau)
    out.write(f"{value}\n")


def cmd_fingerprint(args, out):
    G = parse_module(_read(args.file))
    taus = [_rat(t) for t in args.tau.split(",")]
    us = [_rat(u) for u in args.u.split(",")]
    rows = fingerprint_r1(G, _rat(args.w), [(t, u) for t in taus for u in us])
    out.write(csv_text(["tau", "u", "value"], rows))


def cmd_minrank(args, out):
    X, p = parse_graph(_read(args.file))
    out.write(f"{minrank_solve(graph_to_minrank(X, p), args.budget, jobs=args.jobs)}\n")


def cmd_band(args, out):
    X, p = parse_graph(_read(args.file))
    out.write(format_module(band_functor(BandSpec.from_graph(X, p))))


def cmd_bench(args, out):
    root = Path(args.graphs)
    if not root.is_dir():
        raise FormatError(f"{root} is not a directory")
    rows = []
    for path in sorted(root.glob("*.txt")):
        X, p = parse_graph(path.read_text())
        rows.append(bench_row(path.stem, hardness_pipeline(X, p, args.budget, jobs=args.jobs)))
    out.write(csv_text(BENCH_COLUMNS, rows))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stablerank", description="Betti data and stable ranks of tame persistence modules.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, file_help="module file"):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help=file_help)
        sp.add_argument("--budget", type=_positive, default=None, help="search budget (default: $STABLERANK_BUDGET or 10^6)")
        sp.add_argument("--jobs", type=_positive, default=1, help="worker processes for exhaustive searches")
        sp.set_defaults(func=func)
        return sp

    sp = add("betti", cmd_betti, "print Betti diagrams")
    sp.add_argument("--n", type=int, default=None, help="homological degree (default: all)")
    add("euler", cmd_euler, "print the Euler characteristic")
    add("barcode", cmd_barcode, "print the bars of a one-parameter module")
    sp = add("shift", cmd_shift, "print the tau-shift as a module")
    sp.add_argument("--contour", required=True)
    sp.add_argument("--tau", required=True)
    sp = add("noise-test", cmd_noise_test, "test membership in the noise at eps")
    sp.add_argument("--contour", required=True)
    sp.add_argument("--eps", required=True)
    sp = add("stable-rank", cmd_stable_rank, "stable rank at tau, or the whole step function")
    sp.add_argument("--contour", required=True)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--sweep", action="store_true", help="print the step function as CSV")
    sp.add_argument("--method", choices=["auto", "r1", "bruteforce"], default="auto")
    sp = add("fingerprint", cmd_fingerprint, "truncated-noise table of a one-parameter module")
    sp.add_argument("--w", default="1", help="direction of the standard contour")
    sp.add_argument("--tau", required=True, help="comma-separated radii")
    sp.add_argument("--u", required=True, help="comma-separated truncation points")
    add("minrank", cmd_minrank, "min-rank of a graph instance", "graph file")
    add("band", cmd_band, "print the band functor of a graph", "graph file")
    sp = sub.add_parser("bench", help="run the hardness pipeline over a directory of graph files")
    sp.add_argument("--graphs", required=True, help="directory of *.txt graph files")
    sp.add_argument("--budget", type=_positive, default=None)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.set_defaults(func=cmd_bench)
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except FormatError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    return 0


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "q"]
