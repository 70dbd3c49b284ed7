"""Command-line front end.

Commands: simulate, bounds, figure, sweep, validate. Outputs are flat CSV
files (plus one PNG per figure) under --out; rows echo every parameter
needed to reproduce them and repeated invocations with the same config and
seed are byte-identical. Exit codes: 0 success, 1 runtime failure, 2
config error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis
from .charts import render_chart
from .config import ConfigError, apply_sweep_value, load_config_file, parse_experiment
from .model import ArrivalKind
from .presets import FIGURE_NAMES, figure_preset
from .sim import _mu_values, run_monte_carlo

SIM_COLUMNS = [
    "policy", "N", "T", "runs", "seed", "lambda", "p", "omega",
    "ewsaoi_mean", "ewsaoi_ci95",
    "r_rs_star", "pomw_middle_bound", "r_rsm", "lower_bound",
]
BOUND_COLUMNS = [
    "N", "lambda", "p", "omega", "rs_ewsaoi", "mu_star", "r_rs_star",
    "mu_prime", "beta", "mu_matched", "pomw_middle_bound", "r_rsm",
    "q_star", "lower_bound", "guarantee",
]
FIGURE_COLUMNS = [
    "figure", "series", "sweep_parameter", "sweep_value",
    "N", "T", "runs", "seed", "lambda", "p", "omega", "value", "ci95",
]


def _fmt(x):
    return f"{x:.6f}"


def _fmt_param(x):
    return f"{x:g}"


def _joined(values):
    return ";".join(_fmt_param(v) for v in values)


def _param_columns(config):
    """Per-node parameter echoes; randomized fields show their ranges."""
    ranges = {name: (lo, hi) for name, lo, hi in (config.randomize or ())}

    def column(name, values):
        if name in ranges:
            lo, hi = ranges[name]
            return f"U({_fmt_param(lo)}..{_fmt_param(hi)})"
        return _joined(values)

    return (
        column("lam", [q.lam for q in config.nodes]),
        column("p", [q.p for q in config.nodes]),
        column("omega", [q.omega for q in config.nodes]),
    )


def _bounds_computable(config):
    return config.arrival_kind is ArrivalKind.BERNOULLI and not config.randomize


def _simulation_row(config, metrics):
    lam_col, p_col, omega_col = _param_columns(config)
    row = {
        "policy": config.policy.name,
        "N": str(config.n_nodes),
        "T": str(config.horizon),
        "runs": str(config.runs),
        "seed": str(config.base_seed),
        "lambda": lam_col,
        "p": p_col,
        "omega": omega_col,
        "ewsaoi_mean": _fmt(metrics.ewsaoi_mean),
        "ewsaoi_ci95": _fmt(metrics.ci95_halfwidth),
        "r_rs_star": "",
        "pomw_middle_bound": "",
        "r_rsm": "",
        "lower_bound": "",
    }
    if _bounds_computable(config):
        _, rs_star = analysis.optimal_rs(config.nodes)
        middle, rsm, _ = analysis.pomw_upper_bound(config.nodes)
        _, lower = analysis.universal_lower_bound(config.nodes)
        row.update(
            r_rs_star=_fmt(rs_star),
            pomw_middle_bound=_fmt(middle),
            r_rsm=_fmt(rsm),
            lower_bound=_fmt(lower),
        )
    return row


def _write_csv(path, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _run_one(config):
    return run_monte_carlo(config)


def _run_all(configs, parallel):
    if parallel > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_run_one, configs))
    return [_run_one(c) for c in configs]


def _apply_overrides(config, args):
    for name, attr in (("runs", "runs"), ("horizon", "horizon")):
        value = getattr(args, name, None)
        if value is not None:
            config = replace(config, **{attr: value})
    if getattr(args, "seed", None) is not None:
        config = replace(config, base_seed=args.seed)
    return config


def _sweep_points(config, sweep):
    if sweep is None:
        return [(None, config)]
    return [(v, apply_sweep_value(config, sweep.parameter, v)) for v in sweep.values]


def cmd_simulate(args, require_sweep=False):
    doc = load_config_file(args.config)
    config, sweep = parse_experiment(doc)
    if require_sweep and sweep is None:
        raise ConfigError("sweep: missing required field for the sweep command")
    config = _apply_overrides(config, args)

    points = _sweep_points(config, sweep)
    results = _run_all([c for _, c in points], args.parallel)
    rows = [_simulation_row(c, m) for (_, c), m in zip(points, results)]
    columns = SIM_COLUMNS
    if sweep is not None:
        columns = ["sweep_parameter", "sweep_value"] + SIM_COLUMNS
        for (value, _), row in zip(points, rows):
            row["sweep_parameter"] = sweep.parameter
            row["sweep_value"] = _fmt_param(value)

    out = Path(args.out) / ("sweep.csv" if require_sweep else "simulate.csv")
    _write_csv(out, columns, rows)
    for row in rows:
        print(f"{row['policy']}: ewsaoi_mean={row['ewsaoi_mean']} ci95={row['ewsaoi_ci95']}")
    print(f"wrote {out}")
    return 0


def cmd_bounds(args):
    doc = load_config_file(args.config)
    config, sweep = parse_experiment(doc)
    if not _bounds_computable(config):
        raise ConfigError(
            "bounds are defined for fixed-parameter bernoulli networks only"
        )
    columns = BOUND_COLUMNS if sweep is None else ["sweep_parameter", "sweep_value"] + BOUND_COLUMNS
    rows = []
    for value, point in _sweep_points(config, sweep):
        mu = None
        if point.policy.name == "rs":
            lam = np.array([[q.lam for q in point.nodes]])
            p = np.array([[q.p for q in point.nodes]])
            omega = np.array([[q.omega for q in point.nodes]])
            mu = _mu_values(point, lam, p, omega)[0]
        report = analysis.bound_report(point.nodes, mu=mu)
        lam_col, p_col, omega_col = _param_columns(point)
        row = {
            "N": str(point.n_nodes),
            "lambda": lam_col,
            "p": p_col,
            "omega": omega_col,
            "rs_ewsaoi": "" if report.rs_ewsaoi is None else _fmt(report.rs_ewsaoi),
            "mu_star": _joined(report.mu_star),
            "r_rs_star": _fmt(report.r_rs_star),
            "mu_prime": _joined(report.mu_prime),
            "beta": _joined(report.beta),
            "mu_matched": _joined(report.mu_matched),
            "pomw_middle_bound": _fmt(report.pomw_middle_bound),
            "r_rsm": _fmt(report.r_rsm),
            "q_star": _joined(report.q_star),
            "lower_bound": _fmt(report.lower_bound),
            "guarantee": _fmt(report.guarantee_bound),
        }
        if sweep is not None:
            row["sweep_parameter"] = sweep.parameter
            row["sweep_value"] = _fmt_param(value)
        rows.append(row)

    out = Path(args.out) / "bounds.csv"
    _write_csv(out, columns, rows)
    print(f"wrote {out}")
    return 0


def cmd_figure(args):
    if args.name not in FIGURE_NAMES:
        print(f"config error: unknown figure {args.name!r}, expected one of {FIGURE_NAMES}",
              file=sys.stderr)
        return 2
    parameter, _, jobs, analytic = figure_preset(
        args.name, runs=args.runs, horizon=args.horizon, seed=args.seed
    )
    results = _run_all([job.config for job in jobs], args.parallel)

    rows = []
    for job, metrics in zip(jobs, results):
        lam_col, p_col, omega_col = _param_columns(job.config)
        rows.append(
            {
                "figure": args.name,
                "series": job.series,
                "sweep_parameter": parameter,
                "sweep_value": _fmt_param(job.sweep_value),
                "N": str(job.config.n_nodes),
                "T": str(job.config.horizon),
                "runs": str(job.config.runs),
                "seed": str(job.config.base_seed),
                "lambda": lam_col,
                "p": p_col,
                "omega": omega_col,
                "value": _fmt(metrics.ewsaoi_mean),
                "ci95": _fmt(metrics.ci95_halfwidth),
            }
        )
    for series, value, nodes, analytic_value in analytic:
        rows.append(
            {
                "figure": args.name,
                "series": series,
                "sweep_parameter": parameter,
                "sweep_value": _fmt_param(value),
                "N": str(len(nodes)),
                "T": "",
                "runs": "",
                "seed": "",
                "lambda": _joined([q.lam for q in nodes]),
                "p": _joined([q.p for q in nodes]),
                "omega": _joined([q.omega for q in nodes]),
                "value": _fmt(analytic_value),
                "ci95": "",
            }
        )

    out_csv = Path(args.out) / f"{args.name}.csv"
    out_png = Path(args.out) / f"{args.name}.png"
    _write_csv(out_csv, FIGURE_COLUMNS, rows)
    render_chart(out_csv, out_png)
    print(f"wrote {out_csv}")
    print(f"wrote {out_png}")
    return 0


def cmd_validate(args):
    doc = load_config_file(args.config)
    config, sweep = parse_experiment(doc)
    points = len(sweep.values) if sweep else 1
    print(
        f"config ok: {config.policy.name} policy, {config.n_nodes} node(s), "
        f"T={config.horizon}, runs={config.runs}, seed={config.base_seed}, "
        f"{points} experiment(s)"
    )
    return 0


def _add_common(parser, with_sim_flags=True):
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    if with_sim_flags:
        parser.add_argument("--seed", type=int, default=None, help="override the config seed")
        parser.add_argument("--runs", type=int, default=None, help="override the run count")
        parser.add_argument("--horizon", type=int, default=None, help="override the horizon")
        parser.add_argument(
            "--parallel", type=int, default=1, help="worker processes for sweep points"
        )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aoi-uplink",
        description="Simulate and analyze AoI scheduling in a slotted multiuser uplink.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the configured experiment(s)")
    sim.add_argument("--config", required=True)
    _add_common(sim)

    bounds = sub.add_parser("bounds", help="closed-form bounds only, no simulation")
    bounds.add_argument("--config", required=True)
    _add_common(bounds, with_sim_flags=False)

    figure = sub.add_parser("figure", help="run a built-in figure preset")
    figure.add_argument("name", help=f"one of {', '.join(FIGURE_NAMES)}")
    _add_common(figure)

    sweep = sub.add_parser("sweep", help="run the config's parameter sweep")
    sweep.add_argument("--config", required=True)
    _add_common(sweep)

    validate = sub.add_parser("validate", help="check a config document")
    validate.add_argument("--config", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "bounds":
            return cmd_bounds(args)
        if args.command == "figure":
            return cmd_figure(args)
        if args.command == "sweep":
            return cmd_simulate(args, require_sweep=True)
        if args.command == "validate":
            return cmd_validate(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
