"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`. The simulation-backed
criteria take a few minutes end to end; everything is deterministic.
"""
import json

import numpy as np
import pytest

from aoi_uplink.analysis import (
    guarantee_ratio_bound,
    optimal_rs,
    pomw_upper_bound,
    universal_lower_bound,
)
from aoi_uplink.belief import (
    BeliefVector,
    LocBelief,
    bayes_update_truncated,
    belief_vector,
    markov_belief_vector,
    markov_t_m,
    update_loc_belief,
)
from aoi_uplink.cli import main
from aoi_uplink.model import MarkovArrivalParams, NodeParams
from aoi_uplink.sim import ExperimentConfig, PolicySpec, run_monte_carlo

from oracles import lower_bound_grid_search, markov_step_recursion

PARALLEL_WORKERS = 2


def _report(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {number} ({name}): {status}"
    if detail:
        line += f" -- {detail}"
    print(line, flush=True)
    assert ok, line


def _sym_config(n, lam, p, policy, runs, horizon, seed, omega=1.0, **kw):
    nodes = tuple(NodeParams(lam=lam, p=p, omega=omega) for _ in range(n))
    return ExperimentConfig(
        nodes=nodes, policy=policy, horizon=horizon, runs=runs, base_seed=seed, **kw
    )


def _run_parallel(configs):
    from aoi_uplink.cli import _run_all

    return _run_all(configs, PARALLEL_WORKERS)


def test_criterion_1_belief_exactness():
    expected = {(1, 2): {1: 0.4, 2: 0.24, 3: 0.36}, (2, 1): {1: 0.4, 3: 0.6}}
    worst = 0.0
    for (k, m), reference in expected.items():
        b = belief_vector(k, m, 0.4)
        for age, prob in reference.items():
            worst = max(worst, abs(b.prob_of(age) - prob))
    _report(1, "belief exactness", worst < 1e-15, f"max error {worst:.2e}")


def test_criterion_2_loc_matches_bayes_filter():
    lams = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    steps, d_max = 50, 70
    worst = 0.0
    for trace_index in range(200):
        lam = lams[trace_index % len(lams)]
        rng = np.random.default_rng(1000 + trace_index)
        d = 1 if rng.random() < lam else 2
        z = LocBelief(1, 1)
        dense = bayes_update_truncated(BeliefVector.point_mass(1), lam, False, None, d_max)
        worst = max(worst, dense.max_diff(belief_vector(z.k, z.m, lam)))
        for _ in range(steps):
            scheduled = rng.random() < 0.5
            success = scheduled and rng.random() < 0.8
            obs = d if success else None
            dense = bayes_update_truncated(dense, lam, scheduled, obs, d_max)
            z = update_loc_belief(z, scheduled, obs)
            worst = max(worst, dense.max_diff(belief_vector(z.k, z.m, lam)))
            d = 1 if rng.random() < lam else d + 1
    _report(2, "(k, m) statistic matches the Bayes filter over 200 traces", worst < 1e-12,
            f"max entry error {worst:.2e}")


def test_criterion_3_rs_closed_form():
    config = _sym_config(
        2, 0.5, 0.8, PolicySpec("rs", mu=(0.5, 0.5)), runs=100, horizon=100_000, seed=301
    )
    metrics = run_monte_carlo(config)
    target = 4.5
    rel = abs(metrics.ewsaoi_mean - target) / target
    _report(3, "randomized scheduling closed form", rel < 0.01,
            f"sim {metrics.ewsaoi_mean:.4f} vs {target} (rel err {rel:.4f})")


def test_criterion_4_bound_ordering_lambda_sweep():
    lams = [round(0.1 * i, 1) for i in range(1, 11)]
    runs, horizon, seed = 200, 100_000, 400
    configs, metadata = [], []
    for lam in lams:
        for name in ("pomw", "fomw"):
            configs.append(_sym_config(2, lam, 0.8, PolicySpec(name), runs, horizon, seed))
            metadata.append((lam, name))
    results = dict(zip(metadata, _run_parallel(configs)))

    failures = []
    for lam in lams:
        nodes = tuple(NodeParams(lam=lam, p=0.8) for _ in range(2))
        _, rs_star = optimal_rs(nodes)
        middle, rsm, _ = pomw_upper_bound(nodes)
        _, lower = universal_lower_bound(nodes)
        pomw = results[(lam, "pomw")]
        fomw = results[(lam, "fomw")]
        ci_p, ci_f = pomw.ci95_halfwidth, fomw.ci95_halfwidth
        checks = [
            (lower <= fomw.ewsaoi_mean, f"lam={lam}: lower {lower:.3f} > fomw"),
            (fomw.ewsaoi_mean <= rs_star + 3 * ci_f, f"lam={lam}: fomw above rs_star"),
            (lower <= pomw.ewsaoi_mean, f"lam={lam}: lower {lower:.3f} > pomw"),
            (pomw.ewsaoi_mean <= middle + 3 * ci_p, f"lam={lam}: pomw above middle"),
            (middle <= rsm + 1e-12, f"lam={lam}: middle above rsm"),
        ]
        failures.extend(msg for ok, msg in checks if not ok)

    pomw1, fomw1 = results[(1.0, "pomw")], results[(1.0, "fomw")]
    gap = abs(pomw1.ewsaoi_mean - fomw1.ewsaoi_mean) / fomw1.ewsaoi_mean
    if gap > 0.02:
        failures.append(f"lam=1 pomw/fomw gap {gap:.4f} > 2%")
    nodes1 = tuple(NodeParams(lam=1.0, p=0.8) for _ in range(2))
    _, rs_star1 = optimal_rs(nodes1)
    middle1, rsm1, _ = pomw_upper_bound(nodes1)
    for label, value in (("rs_star", rs_star1), ("middle", middle1), ("rsm", rsm1)):
        if abs(value - 3.5) > 1e-12:
            failures.append(f"lam=1 {label} = {value} != 3.5")

    _report(4, "bound ordering over the arrival-rate sweep", not failures,
            "; ".join(failures) or f"10 points, lam=1 gap {gap:.4%}")


def test_criterion_5_lower_bound_solver():
    failures = []
    q, lb = universal_lower_bound([NodeParams(0.5, 0.8), NodeParams(0.5, 0.8)])
    if abs(lb - 2.75) > 1e-9 or np.max(np.abs(q - 0.4)) > 1e-9:
        failures.append(f"uncapped case: q={q}, lb={lb}")
    q, lb = universal_lower_bound([NodeParams(0.1, 0.8), NodeParams(0.1, 0.8)])
    if abs(lb - 6.5) > 1e-12 or np.max(np.abs(q - 0.1)) > 1e-12:
        failures.append(f"caps-binding case: q={q}, lb={lb}")

    rng = np.random.default_rng(500)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        params = [
            NodeParams(float(a), float(b), float(w))
            for a, b, w in zip(
                rng.uniform(0.05, 1.0, n), rng.uniform(0.1, 1.0, n), rng.uniform(0.1, 2.0, n)
            )
        ]
        _, lb = universal_lower_bound(params)
        _, ref = lower_bound_grid_search(
            [x.lam for x in params], [x.p for x in params], [x.omega for x in params]
        )
        rel = abs(lb - ref) / ref
        worst = max(worst, rel)
        if rel > 1e-4:
            failures.append(f"draw n={n}: rel {rel:.2e}")
    _report(5, "lower-bound solver vs grid search", not failures,
            "; ".join(failures) or f"100 draws, worst rel {worst:.2e}")


def test_criterion_6_guarantee_ratio():
    networks = [
        ([0.5, 0.5], [0.8, 0.8], [1.0, 1.0]),
        ([0.3, 0.3, 0.3], [0.6, 0.6, 0.6], [1.0, 1.0, 1.0]),
        ([0.9, 0.9], [0.9, 0.9], [1.0, 1.0]),
        ([0.25, 0.75], [0.9, 0.5], [1.0, 2.0]),
        ([0.2, 0.5, 0.9], [0.5, 0.7, 0.9], [0.5, 1.0, 1.5]),
        ([0.1, 0.9], [0.8, 0.6], [1.0, 1.0]),
    ]
    configs = []
    for lams, ps, omegas in networks:
        nodes = tuple(NodeParams(a, b, w) for a, b, w in zip(lams, ps, omegas))
        configs.append(
            ExperimentConfig(
                nodes=nodes,
                policy=PolicySpec("pomw", beta="guarantee"),
                horizon=100_000,
                runs=100,
                base_seed=600,
            )
        )
    results = _run_parallel(configs)

    failures, margins = [], []
    for config, metrics in zip(configs, results):
        _, lower = universal_lower_bound(config.nodes)
        ratio = metrics.ewsaoi_mean / lower
        bound = guarantee_ratio_bound(config.nodes)
        margins.append(bound - ratio)
        if ratio >= bound:
            failures.append(
                f"lams={[q.lam for q in config.nodes]}: ratio {ratio:.3f} >= {bound:.3f}"
            )
    _report(6, "guarantee ratio below 2/lam_min", not failures,
            "; ".join(failures) or f"min margin {min(margins):.3f}")


def test_criterion_7_markov_machinery():
    failures = []
    worst_t = 0.0
    for lam0 in (0.05, 0.2, 0.5, 0.8):
        for lam1 in (0.1, 0.4, 0.7, 0.95):
            params = MarkovArrivalParams(lam0, lam1)
            for omega in (0.0, 0.25, 0.5, 0.75, 1.0):
                w = omega
                for m in range(1, 101):
                    w = w * lam1 + (1.0 - w) * lam0
                    worst_t = max(worst_t, abs(markov_t_m(omega, m, params) - w))
    if worst_t >= 1e-12:
        failures.append(f"closed form vs iteration: {worst_t:.2e}")

    worst_d = 0.0
    for lam in (0.1, 0.4, 0.7, 1.0):
        params = MarkovArrivalParams(lam, lam)
        for k in (1, 2, 7):
            for m in (1, 3, 10, 25):
                worst_d = max(
                    worst_d, markov_belief_vector(k, m, params).max_diff(belief_vector(k, m, lam))
                )
    if worst_d >= 1e-12:
        failures.append(f"degeneration to the Bernoulli posterior: {worst_d:.2e}")

    worst_e = 0.0
    for lam0, lam1 in [(0.2, 0.6), (0.7, 0.1), (0.05, 0.95), (0.45, 0.55)]:
        params = MarkovArrivalParams(lam0, lam1)
        for k in (1, 2, 4):
            for m in (1, 2, 5, 15, 30):
                b = markov_belief_vector(k, m, params)
                worst_e = max(worst_e, abs(b.probs.sum() - 1.0))
                recursion = markov_step_recursion(k, m, lam0, lam1)
                for age, prob in recursion.items():
                    worst_e = max(worst_e, abs(b.prob_of(age) - prob))
    if worst_e >= 1e-12:
        failures.append(f"posterior vs step recursion: {worst_e:.2e}")

    _report(7, "Markov arrival machinery", not failures,
            "; ".join(failures) or f"worst errors {worst_t:.1e}/{worst_d:.1e}/{worst_e:.1e}")


def test_criterion_8_baseline_ordering():
    lams_low = [0.05, 0.1, 0.15]
    lams_high = [0.3, 0.4]
    runs, horizon, seed = 500, 10_000, 800
    configs, metadata = [], []
    for lam in lams_low + lams_high:
        for name in ("pomw", "mwa", "rr"):
            configs.append(_sym_config(10, lam, 0.5, PolicySpec(name), runs, horizon, seed))
            metadata.append((lam, name))
    results = dict(zip(metadata, _run_parallel(configs)))

    for lam in lams_low + lams_high:
        row = "  ".join(
            f"{name}={results[(lam, name)].ewsaoi_mean:.3f}+-{results[(lam, name)].ci95_halfwidth:.3f}"
            for name in ("pomw", "mwa", "rr")
        )
        print(f"  lam={lam:<5} {row}", flush=True)

    failures = []
    for lam in lams_low:
        pomw, mwa, rr = (results[(lam, n)] for n in ("pomw", "mwa", "rr"))
        pairs = [
            ("pomw", pomw, "mwa", mwa),
            ("pomw", pomw, "rr", rr),
            ("mwa", mwa, "rr", rr),
        ]
        for lo_name, lo, hi_name, hi in pairs:
            separated = lo.ewsaoi_mean + lo.ci95_halfwidth < hi.ewsaoi_mean - hi.ci95_halfwidth
            if not separated:
                failures.append(
                    f"lam={lam}: {lo_name} ({lo.ewsaoi_mean:.3f}+-{lo.ci95_halfwidth:.3f}) "
                    f"not below {hi_name} ({hi.ewsaoi_mean:.3f}+-{hi.ci95_halfwidth:.3f})"
                )
    for lam in lams_high:
        pomw, mwa = results[(lam, "pomw")], results[(lam, "mwa")]
        rel = abs(pomw.ewsaoi_mean - mwa.ewsaoi_mean) / mwa.ewsaoi_mean
        if rel > 0.03:
            failures.append(f"lam={lam}: pomw/mwa differ by {rel:.4f} > 3%")

    # Known measured reversal: below an arrival rate of roughly 0.08 the
    # max-AoI rule fixates on nodes whose buffered update is itself stale
    # (a success then saves only one slot of age), and round robin wins.
    # The lam=0.05 point therefore fails the middle inequality; it is kept
    # unweakened because the claimed ordering is stated for the whole
    # small-rate range.
    _report(8, "baseline ordering and coincidence", not failures, "; ".join(failures))


def test_criterion_9_csv_determinism(tmp_path):
    doc = {
        "network": {"n": 2, "lam": 0.6, "p": 0.8},
        "policy": {"name": "pomw"},
        "horizon": 2000,
        "runs": 5,
        "seed": 900,
    }
    config = tmp_path / "config.json"
    config.write_text(json.dumps(doc))
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "a")]) == 0
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "simulate.csv").read_bytes()
    b = (tmp_path / "b" / "simulate.csv").read_bytes()
    _report(9, "byte-identical CSV output", a == b, f"{len(a)} bytes")
