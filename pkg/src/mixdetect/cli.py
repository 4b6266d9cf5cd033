"""Command-line front end.

Exit codes: 0 success, 1 the ``test`` subcommand rejected the null,
2 usage or input error, 3 runtime error (budget, I/O). Machine-readable
results go to stdout; the effective configuration and diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import power, theory
from .dist import BaseDistribution
from .errors import CalibrationBudgetError, DomainError, MixDetectError
from .montecarlo import DEFAULT_BUDGET
from .procedures import PROCEDURES, calibrate_procedure, load_table, run_procedure, save_table, table_summary
from .streams import THREADS_ENV, worker_count

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    """Bad input detected after argument parsing."""


def _emit_config(command: str, **settings) -> None:
    settings = {"command": command, **settings, "threads": worker_count()}
    print("effective-config " + json.dumps(settings, sort_keys=True), file=sys.stderr)


def cmd_calibrate(args) -> int:
    _emit_config(
        "calibrate",
        n=args.n,
        dist=args.dist,
        alpha=args.alpha,
        reps=args.reps,
        seed=args.seed,
        kind=args.kind,
        out=args.out,
        hc_plugin_literal=args.hc_plugin_literal,
    )
    table = calibrate_procedure(
        args.kind, args.n, args.dist, args.alpha, args.reps, args.seed, hc_plugin_literal=args.hc_plugin_literal
    )
    save_table(table, args.out)
    print(json.dumps(table_summary(table)))
    return EXIT_OK


def read_observations(path: str) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: not a number: {text!r}") from None
    return values


def cmd_test(args) -> int:
    _emit_config("test", input=args.input, table=args.table)
    table = load_table(args.table)
    values = read_observations(args.input)
    if len(values) != table.n:
        raise UsageError(f"{args.input} holds {len(values)} observations but the table expects n={table.n}")
    decision = run_procedure(values, table)
    print(json.dumps(decision.to_dict()))
    return EXIT_REJECT if decision.reject else EXIT_OK


def cmd_power(args) -> int:
    experiment = power.load_experiment(args.config)
    _emit_config("power", config=experiment.to_config(), out=args.out)
    result = power.run_power_experiment(experiment)
    if args.out:
        power.export_csv(result, args.out)
    else:
        sys.stdout.write(power.format_csv(result))
    return EXIT_OK


def parse_grid(text: str) -> tuple[float, ...]:
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like start:stop:step, got {text!r}") from None
    return power.arithmetic_grid(start, stop, step)


def cmd_boundary(args) -> int:
    _emit_config("boundary", regime=args.regime, delta_grid=args.delta_grid, out=args.out)
    regime = theory.Regime.parse(args.regime)
    rows = [(regime.value, repr(d), repr(theory.detection_boundary(regime, d))) for d in parse_grid(args.delta_grid)]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("regime", "delta", "r_star"))
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_check(args) -> int:
    _emit_config("check", n=args.n, alpha=args.alpha, M=args.M, dist=args.dist)
    report = theory.check_side_conditions(args.n, args.alpha, args.M, args.dist)
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixdetect",
        description="Detect two-component location mixtures when the null location is unknown.",
        epilog=f"Worker threads are capped by the {THREADS_ENV} environment variable.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    dists = [d.value for d in BaseDistribution]
    kinds = [p.replace("_", "-") for p in PROCEDURES]

    p = sub.add_parser("calibrate", help="simulate null thresholds and write a table", allow_abbrev=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", choices=dists, default="gaussian")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=DEFAULT_BUDGET, help="Monte Carlo budget B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=kinds, default="spacing")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--hc-plugin-literal",
        action="store_true",
        help="plug-in HC with p_i = P(Z > X_i + mean) instead of P(Z > X_i - mean)",
    )
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser(
        "test",
        help="run a calibrated test on a sample (exit 1 means REJECT)",
        description="Prints the decision as JSON. Exit status 1 means the null was rejected.",
        allow_abbrev=False,
    )
    p.add_argument("--input", required=True, help="one observation per line")
    p.add_argument("--table", required=True)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("power", help="run a power-curve experiment from a JSON config", allow_abbrev=False)
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("boundary", help="tabulate a detection boundary r*(delta)", allow_abbrev=False)
    p.add_argument("--regime", choices=[r.value for r in theory.Regime], required=True)
    p.add_argument("--delta-grid", required=True, help="start:stop:step, inclusive")
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("check", help="evaluate the sample-size side conditions", allow_abbrev=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--M", type=float, default=None, help="bound on mu2 - mu1 (dense regime)")
    p.add_argument("--dist", choices=dists, default="gaussian")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (CalibrationBudgetError, OSError) as exc:
        print(f"mixdetect: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (UsageError, DomainError, MixDetectError, ValueError) as exc:
        print(f"mixdetect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
