"""Command-line front end: ``beamtrack run | root | beamwidth``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from beamtrack import config, report
from beamtrack.beamwidth import select_beamwidth, solve_root
from beamtrack.sim import run_monte_carlo

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _err(msg: str) -> None:
    print(f"beamtrack: error: {msg}", file=sys.stderr)


def cmd_run(args) -> int:
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    try:
        cfg = config.load(args.config, overrides)
    except config.ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    formats = set(args.format or ["csv"])

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        _err(f"output directory {out} is not writable: {exc}")
        return EXIT_IO

    results = {mode: run_monte_carlo(cfg.replace(mode=mode), workers=args.workers) for mode in ("adaptive", "fixed")}
    adaptive, fixed = results["adaptive"], results["fixed"]

    try:
        (out / "config.txt").write_text(config.dumps(cfg))
        if "csv" in formats:
            report.write_aggregate_csv(out / "aggregate.csv", adaptive, fixed)
            for mode, agg in results.items():
                for i, trace in enumerate(agg.traces):
                    report.write_trace_csv(out / f"trace_run{i}_{mode}.csv", trace)
        if "json" in formats:
            report.write_json(
                out / "aggregate.json",
                {"config": config.to_flat(cfg), **{mode: report.metrics_dict(agg) for mode, agg in results.items()}},
            )
            for mode, agg in results.items():
                for i, trace in enumerate(agg.traces):
                    report.write_json(out / f"trace_run{i}_{mode}.json", report.trace_dict(trace))
    except OSError as exc:
        _err(f"writing results failed: {exc}")
        return EXIT_IO

    print(f"{'mode':<10}{'rmse_deg':>12}{'mean_m':>10}{'corr':>10}")
    for mode, agg in results.items():
        print(
            f"{mode:<10}{math.degrees(agg.mean_rmse):>12.6f}"
            f"{agg.mean_m_per_step.mean():>10.3f}{agg.pearson_e_vs_abs_err:>10.4f}"
        )
    gain = 1 - adaptive.mean_rmse / fixed.mean_rmse if fixed.mean_rmse > 0 else math.nan
    print(f"relative RMSE improvement (adaptive vs fixed): {gain:.2%}")
    print(f"results written to {out}")
    return EXIT_OK


def cmd_root(args) -> int:
    x = solve_root()
    print(f"x_star   {x:.9f}")
    print(f"residual {math.tan(x) - 2 * x:.3e}")
    return EXIT_OK


def cmd_beamwidth(args) -> int:
    if not 0 < args.phi_hat_deg < 180:
        _err(f"phi_hat_deg must lie in (0, 180), got {args.phi_hat_deg}")
        return EXIT_CONFIG
    if not args.e_deg >= 0:
        _err(f"e_deg must be nonnegative, got {args.e_deg}")
        return EXIT_CONFIG
    if args.m0 < 1:
        _err(f"m0 must be >= 1, got {args.m0}")
        return EXIT_CONFIG
    decision = select_beamwidth(math.radians(args.phi_hat_deg), math.radians(args.e_deg), args.m0)
    print(f"m_k {decision.m_k}")
    print(f"clamped {str(decision.clamped).lower()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamtrack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo comparison of adaptive and fixed beamwidth")
    run.add_argument("--config", help="flat key = value config file")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
    run.add_argument("--format", action="append", choices=("csv", "json"), help="output format (repeatable; default csv)")
    run.add_argument("--seed", type=int, help="shorthand for --set seed=N")
    run.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    run.set_defaults(func=cmd_run)

    root = sub.add_parser("root", help="print the first positive root of tan x = 2x")
    root.set_defaults(func=cmd_root)

    bw = sub.add_parser("beamwidth", help="active antenna count for one estimate")
    bw.add_argument("phi_hat_deg", type=float, help="estimated AoA in degrees")
    bw.add_argument("e_deg", type=float, help="RMS AoA error in degrees")
    bw.add_argument("--m0", type=int, default=64, help="total antennas (default 64)")
    bw.set_defaults(func=cmd_beamwidth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
