"""Command-line interface: simulate, calibrate, sweep, compare.

Exit codes: 0 success, 2 configuration error, 3 unreachable calibration target.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .config import load_config
from .oc import (
    allocation_sweep,
    calibrate_n,
    compare_with_conventional,
    simulate as simulate_reps,
    summarize,
)
from .stats import DomainError
from .trial import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNREACHABLE = 3

OC_HEADER = [
    "design", "scenario", "reps", "seed", "fwer", "fwer_se", "pcs", "pcs_se",
    "gen_power", "gen_power_se", "avg_n", "avg_duration",
]
TRACE_HEADER = [
    "rep", "selected_dose", "rejected", "false_rejection", "n_enrolled", "duration", "stage2_p",
]
SWEEP_HEADER = ["n1", "n2", "total", "pcs", "gen_power"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def _write_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    if out:
        Path(out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def cmd_simulate(args) -> int:
    config, scenario = load_config(args.config)
    reps = simulate_reps(config, scenario, args.reps, args.seed, args.workers, args.conventional)
    oc = summarize(reps, scenario)
    row = [
        config.design + ("-CC" if args.conventional else ""),
        scenario.name, oc.reps, args.seed, oc.fwer, oc.fwer_se, oc.pcs, oc.pcs_se,
        oc.generalized_power, oc.gen_power_se, oc.avg_sample_size, oc.avg_duration,
    ]
    _write_csv(OC_HEADER, [row], args.out)
    if args.trace:
        trace = (
            [
                r.rep,
                None if r.selected is None else r.selected + 1,
                r.rejected, r.false_rejection, r.n_enrolled, r.duration, r.stage2_p,
            ]
            for r in reps
        )
        _write_csv(TRACE_HEADER, trace, args.trace)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    config, scenario = load_config(args.config)
    try:
        grid = json.loads(Path(args.grid).read_text())
        n1_grid, n2_grid = [int(v) for v in grid["n1"]], [int(v) for v in grid["n2"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"grid file {args.grid}: expected JSON with 'n1' and 'n2' lists ({exc})")
    try:
        res = calibrate_n(
            config, scenario, args.target, n1_grid, n2_grid, args.reps, args.seed,
            args.workers, args.conventional,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = {
        "reachable": res.reachable,
        "n1": res.n1,
        "n2": res.n2,
        "gen_power": res.power,
        "target": args.target,
        "grid": [
            {"n1": a, "n2": b, "total": t, "gen_power": p} for a, b, t, p in res.table
        ],
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if not res.reachable:
        print(
            f"target {args.target} unreachable on this grid; best point n1={res.n1} n2={res.n2}",
            file=sys.stderr,
        )
        return EXIT_UNREACHABLE
    return EXIT_OK


def cmd_sweep(args) -> int:
    config, scenario = load_config(args.config)
    rows = allocation_sweep(config, scenario, args.total, args.n1, args.reps, args.seed, args.workers)
    _write_csv(
        SWEEP_HEADER,
        ([r.n1, r.n2, args.total, r.pcs, r.generalized_power] for r in rows),
        args.out,
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    config, scenario = load_config(args.config)
    cc_config, cc_scenario = load_config(args.cc_config)
    if cc_scenario.doses != scenario.doses:
        raise ConfigError("the conventional counterpart must use the same scenario doses")
    rep = compare_with_conventional(config, cc_config, scenario, args.reps, args.seed, args.workers)

    def oc_dict(oc):
        return {
            "fwer": oc.fwer, "pcs": oc.pcs, "gen_power": oc.generalized_power,
            "avg_n": oc.avg_sample_size, "avg_duration": oc.avg_duration,
        }

    json.dump(
        {
            "design": config.design,
            "scenario": scenario.name,
            "reps": args.reps,
            "seed": args.seed,
            "seamless": oc_dict(rep.seamless),
            "conventional": oc_dict(rep.conventional),
            "savings": rep.savings,
        },
        sys.stdout,
        indent=2,
    )
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seamless-trials",
        description="Simulate seamless phase 2-3 dose-optimization designs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON design + scenario file")
        p.add_argument("--reps", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = sub.add_parser("simulate", help="operating characteristics of one configuration")
    common(p)
    p.add_argument("--out", help="summary CSV (default: stdout)")
    p.add_argument("--trace", help="optional per-replication CSV")
    p.add_argument("--conventional", action="store_true", help="simulate the conventional counterpart")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="smallest (n1, n2) reaching a generalized power target")
    common(p)
    p.add_argument("--target", type=float, default=0.80)
    p.add_argument("--grid", required=True, help='JSON file {"n1": [...], "n2": [...]}')
    p.add_argument("--conventional", action="store_true", help="calibrate the conventional counterpart")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("sweep", help="stage-1/stage-2 allocation at a fixed total")
    common(p)
    p.add_argument("--total", type=int, required=True, help="planned total enrollment")
    p.add_argument("--n1", type=_parse_int_list, required=True, help="comma-separated n1 values")
    p.add_argument("--out", help="sweep CSV (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="sample-size savings against the conventional counterpart")
    common(p)
    p.add_argument("--cc-config", required=True, help="configuration of the conventional counterpart")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.reps < 1:
        print("error: --reps must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
