"""Command-line entry point.

Subcommands: psd, ortho, nmse, iorel, complexity, selftest.  Configuration
comes from a flat ``key = value`` text file (--config) with optional --seed,
--trials and --out overrides; --small switches every experiment to the
desk-scale parameter set (N = 256, 20 trials, oversampling 8).

Exit codes: 0 success, 1 validation error, 2 acceptance failure in selftest.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import acceptance
from .channel import make_eva_channel
from .receiver import (
    chirp_domain_matrix,
    default_lead,
    effective_taps,
    fold_cpp_taps,
    required_taps,
)
from .experiments import (
    ExperimentConfig,
    complexity_compare,
    load_config,
    matrix_to_csv,
    run_iorel_check,
    run_nmse_sweep,
    run_ortho_experiment,
    run_psd_experiment,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValueError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="chirplab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("psd", "ortho", "nmse", "iorel", "complexity", "selftest"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--trials", type=int, help="override the trial count")
        p.add_argument("--out", help="output CSV path")
        p.add_argument(
            "--small",
            action="store_true",
            help="desk-scale run: N=256, trials=20, oversampling=8",
        )
    sub.choices["complexity"].add_argument("--n", type=int, default=1024)
    sub.choices["complexity"].add_argument("--n-od", type=int, default=32)
    return parser


def _experiment_config(args) -> ExperimentConfig:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.config is not None:
        ec = load_config(args.config, overrides)
    else:
        ec = ExperimentConfig(**{k: int(v) for k, v in overrides.items()})
    if args.small:
        ec = ec.shrink()
    return ec


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _run(args) -> int:
    if args.command == "selftest":
        failed = 0
        for result in acceptance.run_all(small=args.small):
            print(result.line())
            failed += 0 if result.passed else 1
        return 2 if failed else 0

    if args.command == "complexity":
        report = complexity_compare(args.n, args.n_od, measure=True)
        for key in ("n", "n_od", "count_full", "count_bank", "count_ratio"):
            print(f"{key} = {_fmt(report[key])}")
        for size, sec in zip(report["measured_sizes"], report["measured_seconds"]):
            print(f"seconds_n{size} = {_fmt(sec)}")
        print(f"loglog_slope = {_fmt(report['loglog_slope'])}")
        return 0

    ec = _experiment_config(args)
    if args.command == "nmse":
        sweep = run_nmse_sweep(ec)
        if args.out:
            sweep.write_csv(args.out)
        for v, m, s in zip(sweep.values, sweep.nmse_db, sweep.stderr_db):
            print(f"{_fmt(float(v))},{_fmt(m)},{_fmt(s)}")
        return 0
    if args.command == "psd":
        ana, emp, bw = run_psd_experiment(ec)
        if args.out:
            emp.write_csv(args.out)
            stem, dot, ext = args.out.rpartition(".")
            ana.write_csv(f"{stem}_analytic.{ext}" if dot else f"{args.out}_analytic")
        print(f"occupied_bandwidth_hz = {_fmt(bw)}")
        return 0
    if args.command == "ortho":
        grid, predictions = run_ortho_experiment(ec)
        if args.out:
            grid.write_csv(args.out)
        n = grid.cfg.N
        hot = int(np.count_nonzero(grid.entries / grid.cfg.T > 0.05) - n)
        print(f"pairs_above_threshold = {hot}")
        if predictions is None:
            print("predictor = unavailable (non-integer fold count)")
        else:
            agree = np.array_equal(
                predictions, grid.entries / grid.cfg.T > 0.05
            )
            print(f"predictor_agrees = {agree}")
        return 0
    if args.command == "iorel":
        report = run_iorel_check(ec)
        for key, value in report.items():
            print(f"{key} = {_fmt(float(value))}")
        if args.out:
            cfg = ec.chirp_config()
            rng = np.random.default_rng([ec.seed, 0])
            channel = make_eva_channel(ec.channel_spec(), rng)
            filt = ec.srrc()
            lead = default_lead(filt)
            taps = effective_taps(
                channel, filt, cfg.N, lead, required_taps(channel, filt)
            )
            matrix_to_csv(
                chirp_domain_matrix(cfg, fold_cpp_taps(cfg, taps)), args.out
            )
        return 0
    raise ValueError(f"unknown subcommand: {args.command}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
