"""Command line: ``qcorr measure``, ``qcorr sweep`` and ``qcorr selftest``.

Exit codes: 0 success, 1 bad input, 2 solver did not converge (values are
still printed), 3 self-test failure.
"""

import argparse
import json
import logging
import os
import sys
import time

from .correlations import SolverConfig, measure_all
from .errors import QCorrError
from .families import werner_state
from .selftest import run_selftest
from .states import load_state
from .sweep import gnuplot_script, rows_to_csv, run_sweep, write_csv_atomic

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_SELFTEST = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; here 2 means "not converged"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _solver_args(p):
    p.add_argument("--tol", type=float, default=1e-6, help="Frank-Wolfe gap tolerance in bits")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-iters", type=int, default=5000, help="Frank-Wolfe iteration cap")


def build_parser():
    parser = _Parser(prog="qcorr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="all measures for one state")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--werner", type=float, metavar="GAMMA")
    src.add_argument("--file", metavar="PATH", help="state JSON {d_a, d_b, re, im}")
    _solver_args(m)
    m.add_argument("--povm-trials", type=int, default=0)
    m.add_argument("--json", action="store_true", help="print JSON instead of text")

    s = sub.add_parser("sweep", help="Werner-family sweep as CSV")
    s.add_argument("--gamma-min", type=float, default=0.0)
    s.add_argument("--gamma-max", type=float, default=1.0)
    s.add_argument("--gamma-step", type=float, default=0.01)
    _solver_args(s)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    s.add_argument("--plot-script", metavar="PATH", help="also write a gnuplot script")

    t = sub.add_parser("selftest", help="randomized property checks")
    t.add_argument("--trials", type=int, default=20)
    t.add_argument("--seed", type=_seed, default=0)
    t.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def _print_report(report, out):
    width = 16
    for key, value in report.as_dict().items():
        if key == "diagnostics":
            continue
        text = "n/a" if value is None else f"{value:.6f}"
        print(f"{key:<{width}} {text}", file=out)
    d = report.diagnostics
    print(f"{'ree_gap':<{width}} {d['ree_gap']:.3e}", file=out)
    print(f"{'ree_iterations':<{width}} {d['ree_iterations']}", file=out)
    print(f"{'converged':<{width}} {d['converged']}", file=out)
    if not d["certified"]:
        print("note: PPT does not certify separability for these dimensions; REE is an upper bound", file=out)


def cmd_measure(args, out=None):
    out = out or sys.stdout
    try:
        rho = werner_state(args.werner) if args.werner is not None else load_state(args.file)
    except (QCorrError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = SolverConfig(tol=args.tol, max_iters=args.max_iters, seed=args.seed, povm_trials=args.povm_trials)
    report = measure_all(rho, config)
    if args.json:
        json.dump(report.as_dict(), out, indent=2)
        out.write("\n")
    else:
        _print_report(report, out)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_sweep(args, out=None):
    out = out or sys.stdout
    try:
        config = SolverConfig(tol=args.tol, max_iters=args.max_iters)
        rows = run_sweep(args.gamma_min, args.gamma_max, args.gamma_step, args.tol, args.seed, args.threads, config)
    except (QCorrError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rows_to_csv(rows)
    if args.out == "-":
        out.write(text)
    else:
        write_csv_atomic(text, args.out)
        if args.plot_script:
            with open(args.plot_script, "w", encoding="utf-8") as fh:
                fh.write(gnuplot_script(os.path.basename(args.out)))
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NOT_CONVERGED


def cmd_selftest(args, out=None):
    out = out or sys.stdout
    for name, ok, detail in run_selftest(args.trials, args.seed, args.inject_fault):
        print(f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip(), file=out)
        if not ok:
            print(f"selftest failed: {name}", file=out)
            return EXIT_SELFTEST
    print("selftest passed", file=out)
    return EXIT_OK


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    start = time.perf_counter()
    handler = {"measure": cmd_measure, "sweep": cmd_sweep, "selftest": cmd_selftest}[args.command]
    code = handler(args)
    logging.getLogger(__name__).info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
