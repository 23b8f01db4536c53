"""Command line interface: ``upcross simulate | estimate | mc-study``.

Exit codes: 0 success, 1 usage or argument error, 2 data, parse or file error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .errors import DomainError, ParseError, ThresholdRangeError
from .estimators import STATUS_NO_UPCROSSINGS, default_k_grid, eta_curve
from .io import read_series_csv, write_curve_csv, write_series_csv, write_study_csv
from .montecarlo import (DESK_REPLICATES, DESK_RUNS, PAPER_REPLICATES, PAPER_RUNS,
                         McStudySpec, run_study)
from .series import log_returns
from .simulate import ProcessSpec, known_indices, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

log = logging.getLogger("upcross")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v <= 2**64 - 1:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="upcross", description="Runs estimator of the upcrossings index.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate a process with known index")
    s.add_argument("--process", choices=["armax", "ar1", "iid"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, help="AR(1) innovation parameter (>= 2)")
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--out", required=True)

    e = sub.add_parser("estimate", help="estimate eta over a grid of k")
    e.add_argument("--input", required=True, help="single-column CSV")
    e.add_argument("--k", type=_positive_int, help="single order-statistic index")
    e.add_argument("--k-min", type=_positive_int)
    e.add_argument("--k-max", type=_positive_int)
    e.add_argument("--ci-level", type=float)
    e.add_argument("--log-axis", action="store_true", help="mark the curve for a log-scale k axis")
    e.add_argument("--transform", choices=["none", "log_returns"], default="none")
    e.add_argument("--out", required=True)

    m = sub.add_parser("mc-study", help="Monte Carlo study over sample sizes and k")
    m.add_argument("--process", choices=["armax", "ar1", "iid"], required=True)
    m.add_argument("--r", type=int)
    m.add_argument("--n", dest="n_list", type=int, nargs="+", required=True)
    m.add_argument("--runs", type=_positive_int)
    m.add_argument("--replicates", type=_positive_int)
    m.add_argument("--paper-scale", action="store_true",
                   help=f"{PAPER_RUNS} runs x {PAPER_REPLICATES} replicates")
    m.add_argument("--k", dest="k_grid", type=_positive_int, nargs="+",
                   help="explicit k grid (default 1..n//4)")
    m.add_argument("--ci-level", type=float, default=0.95)
    m.add_argument("--seed", type=_seed, required=True)
    m.add_argument("--workers", type=_positive_int, default=1)
    m.add_argument("--out", required=True)
    return p


def _cmd_simulate(args):
    try:
        spec = ProcessSpec(kind=args.process, n=args.n, seed=args.seed, r=args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    write_series_csv(args.out, simulate(spec))
    ki = known_indices(spec)
    print(f"eta={ki.eta!r} theta={ki.theta!r} nu_over_tau={ki.nu_over_tau!r}", file=sys.stderr)


def _grid(args, n):
    if args.k is not None:
        if args.k_min is not None or args.k_max is not None:
            raise UsageError("--k cannot be combined with --k-min/--k-max")
        return [args.k]
    if args.k_min is None and args.k_max is None:
        grid = default_k_grid(n)
        if not grid:
            raise UsageError(f"series too short (n={n}) for the default k grid")
        return grid
    lo = args.k_min if args.k_min is not None else 1
    hi = args.k_max if args.k_max is not None else max(n // 4, lo)
    if hi < lo:
        raise UsageError(f"--k-max {hi} is below --k-min {lo}")
    return list(range(lo, hi + 1))


def _cmd_estimate(args):
    if args.ci_level is not None and not 0.0 < args.ci_level < 1.0:
        raise UsageError("--ci-level must lie in (0, 1)")
    series = read_series_csv(args.input)
    if args.transform == "log_returns":
        series = log_returns(series)
    grid = _grid(args, series.n)
    try:
        curve = eta_curve(series, grid, ci_level=args.ci_level,
                          scale_hint="logarithmic" if args.log_axis else "linear")
    except ThresholdRangeError as exc:
        raise UsageError(str(exc)) from exc
    write_curve_csv(args.out, curve)
    if len(grid) == 1:
        est = curve.entries[0][1]
        if est.status == STATUS_NO_UPCROSSINGS:
            print(f"k={grid[0]} threshold={est.threshold!r}: no upcrossings")
        else:
            line = (f"k={grid[0]} threshold={est.threshold!r} eta_hat={est.eta_hat:.5f} "
                    f"upcrossings={est.n_upcrossings} run_starts={est.n_run_starts}")
            if est.ci is not None:
                line += (f" ci{est.ci.level:g}=[{est.ci.lower:.5f}, {est.ci.upper:.5f}]"
                         + (" (degenerate)" if est.ci.degenerate else ""))
            print(line)
    else:
        n_ok = sum(e.eta_hat is not None for _, e in curve.entries)
        print(f"n={series.n} k={grid[0]}..{grid[-1]}: {n_ok}/{len(grid)} thresholds with upcrossings")


def _cmd_mc_study(args):
    runs, reps = (PAPER_RUNS, PAPER_REPLICATES) if args.paper_scale else (DESK_RUNS, DESK_REPLICATES)
    try:
        spec = McStudySpec(
            kind=args.process, r=args.r, sample_sizes=args.n_list, master_seed=args.seed,
            runs=args.runs or runs, replicates=args.replicates or reps,
            k_grid=args.k_grid, ci_level=args.ci_level,
        )
        for n in spec.sample_sizes:
            spec.grid_for(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = run_study(spec, workers=args.workers)
    write_study_csv(args.out, result)
    for n, s in result.sizes.items():
        j = s.k.tolist().index(s.k0)
        print(f"n={n} k0={s.k0} k0/n={s.k0_fraction:.3f} "
              f"E={s.mean[j]:.5f}±{s.hw_mean[j]:.5f} MSE={s.mse[j]:.5f}±{s.hw_mse[j]:.6f} "
              f"SD={s.sd[j]:.5f}±{s.hw_sd[j]:.5f}")


COMMANDS = {"simulate": _cmd_simulate, "estimate": _cmd_estimate, "mc-study": _cmd_mc_study}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"upcross: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DomainError, OSError) as exc:
        print(f"upcross: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
