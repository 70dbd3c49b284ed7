"""Built-in figure presets: parameter sweeps with their analytic curves.

Each preset expands into simulation jobs (one per sweep point and policy)
plus closed-form curve rows. Default run counts follow the source
experiment sections; horizons and grids are desk-scale choices and all of
runs/horizon/seed can be overridden from the CLI.
"""
from __future__ import annotations

from dataclasses import dataclass

from .analysis import optimal_rs, pomw_upper_bound, universal_lower_bound
from .model import NodeParams
from .sim import ExperimentConfig, PolicySpec

DEFAULT_SEED = 20240901

FIGURE_NAMES = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")


@dataclass(frozen=True)
class SimJob:
    series: str
    sweep_value: float
    config: ExperimentConfig


def _sym_nodes(n, lam, p, omega=1.0):
    return tuple(NodeParams(lam=lam, p=p, omega=omega) for _ in range(n))


def _analytic_rows(nodes, value):
    _, rs_star = optimal_rs(nodes)
    middle, rsm, _ = pomw_upper_bound(nodes)
    _, lower = universal_lower_bound(nodes)
    return [
        ("optimal randomized", value, nodes, rs_star),
        ("pomw upper bound", value, nodes, middle),
        ("matched randomized", value, nodes, rsm),
        ("lower bound", value, nodes, lower),
    ]


def _lambda_sweep_vs_bounds(runs, horizon, seed):
    """Symmetric two-node network over the full range of arrival rates."""
    values = [round(0.1 * i, 1) for i in range(1, 11)]
    jobs, analytic = [], []
    for lam in values:
        nodes = _sym_nodes(2, lam, 0.8)
        for policy in ("pomw", "fomw"):
            jobs.append(
                SimJob(
                    series=policy,
                    sweep_value=lam,
                    config=ExperimentConfig(
                        nodes=nodes,
                        policy=PolicySpec(policy),
                        horizon=horizon,
                        runs=runs,
                        base_seed=seed,
                    ),
                )
            )
        analytic.extend(_analytic_rows(nodes, lam))
    return "lam", values, jobs, analytic


def _success_rate_sweep(runs, horizon, seed):
    """Max-weight variants vs channel quality for three arrival-rate mixes."""
    values = [round(0.1 * i, 1) for i in range(3, 11)]
    pairs = [(0.5, 0.5), (0.25, 0.75), (0.1, 0.9)]
    jobs = []
    for p in values:
        for lam_a, lam_b in pairs:
            nodes = (NodeParams(lam_a, p), NodeParams(lam_b, p))
            for policy in ("pomw", "fomw"):
                jobs.append(
                    SimJob(
                        series=f"{policy} lam={lam_a:g}/{lam_b:g}",
                        sweep_value=p,
                        config=ExperimentConfig(
                            nodes=nodes,
                            policy=PolicySpec(policy),
                            horizon=horizon,
                            runs=runs,
                            base_seed=seed,
                        ),
                    )
                )
    return "p", values, jobs, []


def _network_size_sweep(lam):
    def build(runs, horizon, seed):
        values = [10, 15, 20, 25, 30]
        jobs, analytic = [], []
        for n in values:
            nodes = _sym_nodes(n, lam, 0.8)
            for policy in ("pomw", "fomw"):
                jobs.append(
                    SimJob(
                        series=policy,
                        sweep_value=n,
                        config=ExperimentConfig(
                            nodes=nodes,
                            policy=PolicySpec(policy),
                            horizon=horizon,
                            runs=runs,
                            base_seed=seed,
                        ),
                    )
                )
            analytic.extend(_analytic_rows(nodes, n))
        return "n", values, jobs, analytic

    return build


def _baseline_sweep(randomize):
    def build(runs, horizon, seed):
        values = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5]
        jobs = []
        for lam in values:
            nodes = _sym_nodes(10, lam, 0.5)
            for policy in ("pomw", "mwa", "rr"):
                jobs.append(
                    SimJob(
                        series=policy,
                        sweep_value=lam,
                        config=ExperimentConfig(
                            nodes=nodes,
                            policy=PolicySpec(policy),
                            horizon=horizon,
                            runs=runs,
                            base_seed=seed,
                            randomize=randomize,
                        ),
                    )
                )
        return "lam", values, jobs, []

    return build


_PRESETS = {
    "fig3": (_lambda_sweep_vs_bounds, 2000, 100_000),
    "fig4": (_success_rate_sweep, 2000, 20_000),
    "fig5": (_network_size_sweep(0.1), 2000, 20_000),
    "fig6": (_network_size_sweep(0.5), 2000, 20_000),
    "fig7": (_baseline_sweep(None), 10_000, 10_000),
    "fig8": (_baseline_sweep((("omega", 0.1, 1.9), ("p", 0.1, 0.9))), 10_000, 10_000),
}


def figure_preset(name, runs=None, horizon=None, seed=None):
    """Expand a preset into (sweep_parameter, values, sim jobs, analytic rows)."""
    if name not in _PRESETS:
        raise KeyError(f"unknown figure {name!r}, expected one of {FIGURE_NAMES}")
    build, default_runs, default_horizon = _PRESETS[name]
    return build(
        runs if runs is not None else default_runs,
        horizon if horizon is not None else default_horizon,
        seed if seed is not None else DEFAULT_SEED,
    )
