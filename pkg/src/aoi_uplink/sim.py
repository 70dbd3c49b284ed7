"""Seeded Monte-Carlo engine for the slotted uplink.

Episodes are simulated in lockstep, vectorized across independent runs:
all state lives in (runs, nodes) arrays and each slot advances every run
at once. Every run draws from its own generators seeded by
SeedSequence((base_seed, run_index)), so results are bit-for-bit
reproducible run by run, independent of batch size, chunking, or how many
other runs execute alongside.

Ground truth (true local ages) and the AP view (destination AoI,
occasional age observations) are tracked separately; policies only ever
see the AP view unless explicitly privileged. AP-side AoI bookkeeping is
cross-checked against ground truth every slot and any divergence is a
hard failure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analysis
from .model import ArrivalKind, ConsistencyError, MarkovArrivalParams, NodeParams
from .policies import (
    IDLE,
    FomwScheduler,
    MarkovPomwScheduler,
    MwaScheduler,
    PomwScheduler,
    RrScheduler,
    RsScheduler,
)

BETA_PRESETS = ("upper-bound", "guarantee")
MU_PRESETS = ("optimal", "matched")
POLICY_NAMES = ("pomw", "fomw", "rs", "rr", "mwa")

# soft cap on pre-generated uniforms per chunk, in array elements
_CHUNK_BUDGET = 4_000_000


@dataclass(frozen=True)
class PolicySpec:
    """Which scheduling rule to run and how its knobs are chosen.

    beta applies to pomw/fomw: a preset name ("upper-bound" tunes each
    node by omega/(lam mu' p); "guarantee" by omega/(lam q*)) or explicit
    per-node values. mu applies to rs: "optimal", "matched" (the
    probabilities realizing the drift bound), or explicit values.
    """

    name: str
    beta: str | tuple = "upper-bound"
    mu: str | tuple = "optimal"

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {self.name!r}, expected one of {POLICY_NAMES}")
        if isinstance(self.beta, str) and self.beta not in BETA_PRESETS:
            raise ValueError(f"unknown beta preset {self.beta!r}, expected one of {BETA_PRESETS}")
        if isinstance(self.mu, str) and self.mu not in MU_PRESETS:
            raise ValueError(f"unknown mu preset {self.mu!r}, expected one of {MU_PRESETS}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one Monte-Carlo experiment."""

    nodes: tuple
    policy: PolicySpec
    horizon: int
    runs: int
    base_seed: int
    arrival_kind: ArrivalKind = ArrivalKind.BERNOULLI
    markov: tuple | None = None  # per-node MarkovArrivalParams
    burn_in: int = 0
    randomize: tuple | None = None  # ((param_name, lo, hi), ...) redrawn per run

    def __post_init__(self):
        if len(self.nodes) < 1:
            raise ValueError("need at least one node")
        for node in self.nodes:
            if not isinstance(node, NodeParams):
                raise TypeError("nodes must be NodeParams instances")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.burn_in < self.horizon:
            raise ValueError(f"burn_in must be in [0, horizon), got {self.burn_in}")
        if self.base_seed < 0:
            raise ValueError("base_seed must be nonnegative")
        if self.arrival_kind is ArrivalKind.MARKOV:
            if self.markov is None or len(self.markov) != len(self.nodes):
                raise ValueError("markov arrivals need one MarkovArrivalParams per node")
            for mk in self.markov:
                if not isinstance(mk, MarkovArrivalParams):
                    raise TypeError("markov entries must be MarkovArrivalParams")
        elif self.markov is not None:
            raise ValueError("markov parameters supplied for bernoulli arrivals")
        if self.randomize is not None:
            for name, lo, hi in self.randomize:
                if name not in ("lam", "p", "omega"):
                    raise ValueError(f"cannot randomize unknown parameter {name!r}")
                if not 0.0 < lo <= hi:
                    raise ValueError(f"bad randomize range for {name}: ({lo}, {hi})")
                if name in ("lam", "p") and hi > 1.0:
                    raise ValueError(f"randomize range for {name} exceeds 1: ({lo}, {hi})")
        n = len(self.nodes)
        for label, values in (("beta", self.policy.beta), ("mu", self.policy.mu)):
            if not isinstance(values, str) and len(values) != n:
                raise ValueError(f"explicit {label} values must have one entry per node")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class EpisodeResult:
    """Per-run outcome: the weighted-AoI time average and a trace summary."""

    run_index: int
    ewsaoi: float
    per_node_time_avg_aoi: np.ndarray
    schedule_fraction: np.ndarray
    delivery_fraction: np.ndarray
    trace: dict | None = None


@dataclass(frozen=True)
class RunMetrics:
    """Aggregate of independent episodes, reduced in ascending run index."""

    ewsaoi_mean: float
    ewsaoi_std: float
    ci95_halfwidth: float
    per_node_mean_aoi: np.ndarray
    per_run_values: np.ndarray

    def __post_init__(self):
        if np.any(self.per_run_values <= 0.0):
            raise ConsistencyError("weighted-AoI averages must be positive")


@dataclass
class ApView:
    """Everything a (non-privileged) policy may condition on in one slot."""

    t: int
    aoi: np.ndarray  # AP-side destination AoI, (runs, nodes)
    policy_uniform: np.ndarray | None = None
    true_local_age: np.ndarray | None = None  # set only for privileged policies


def _materialize_params(config, run_indices, param_rngs):
    """Per-run (R, N) parameter arrays, with optional per-run redraws."""
    n = config.n_nodes
    r = len(run_indices)
    lam = np.tile([q.lam for q in config.nodes], (r, 1))
    p = np.tile([q.p for q in config.nodes], (r, 1))
    omega = np.tile([q.omega for q in config.nodes], (r, 1))
    if config.randomize:
        arrays = {"lam": lam, "p": p, "omega": omega}
        for i in range(r):
            for name, lo, hi in config.randomize:
                arrays[name][i] = param_rngs[i].uniform(lo, hi, n)
    return lam, p, omega


def _beta_values(config, lam, p, omega):
    spec = config.policy.beta
    if not isinstance(spec, str):
        return np.tile(np.asarray(spec, dtype=float), (lam.shape[0], 1))
    if spec == "upper-bound":
        if config.randomize:
            _, beta = analysis.pomw_weights((lam, p, omega), axis=-1)
            return beta
        _, beta = analysis.pomw_weights(config.nodes)
        return np.tile(beta, (lam.shape[0], 1))
    # guarantee preset: beta_i = omega_i / (lam_i q*_i)
    if config.randomize:
        rows = []
        for i in range(lam.shape[0]):
            nodes = [NodeParams(lam[i, j], p[i, j], omega[i, j]) for j in range(lam.shape[1])]
            rows.append(analysis.guarantee_beta(nodes))
        return np.asarray(rows)
    return np.tile(analysis.guarantee_beta(config.nodes), (lam.shape[0], 1))


def _mu_values(config, lam, p, omega):
    spec = config.policy.mu
    if not isinstance(spec, str):
        return np.tile(np.asarray(spec, dtype=float), (lam.shape[0], 1))
    if config.randomize:
        raise ValueError("randomized networks need explicit rs probabilities")
    if spec == "optimal":
        mu, _ = analysis.optimal_rs(config.nodes)
    else:
        _, _, mu = analysis.pomw_upper_bound(config.nodes)
    return np.tile(mu, (lam.shape[0], 1))


def _build_scheduler(config, lam, p, omega):
    name = config.policy.name
    if name == "pomw":
        beta = _beta_values(config, lam, p, omega)
        if config.arrival_kind is ArrivalKind.MARKOV:
            lam0 = np.array([mk.lam0 for mk in config.markov])
            lam1 = np.array([mk.lam1 for mk in config.markov])
            return MarkovPomwScheduler(p, beta, lam0, lam1)
        return PomwScheduler(lam, p, beta)
    if name == "fomw":
        return FomwScheduler(p, _beta_values(config, lam, p, omega))
    if name == "mwa":
        return MwaScheduler(p, omega)
    if name == "rr":
        return RrScheduler(config.n_nodes, lam.shape[0])
    return RsScheduler(_mu_values(config, lam, p, omega))


def _simulate_batch(config, run_indices, record_trace=False):
    """Advance all requested runs through the full horizon in lockstep."""
    run_indices = [int(i) for i in run_indices]
    r, n = len(run_indices), config.n_nodes
    seqs = [np.random.SeedSequence((config.base_seed, idx)) for idx in run_indices]
    children = [s.spawn(4) for s in seqs]
    param_rngs = [np.random.default_rng(c[0]) for c in children]
    arr_rngs = [np.random.default_rng(c[1]) for c in children]
    chan_rngs = [np.random.default_rng(c[2]) for c in children]
    pol_rngs = [np.random.default_rng(c[3]) for c in children]

    lam, p, omega = _materialize_params(config, run_indices, param_rngs)
    scheduler = _build_scheduler(config, lam, p, omega)
    needs_uniform = isinstance(scheduler, RsScheduler)

    markov = config.arrival_kind is ArrivalKind.MARKOV
    if markov:
        lam0 = np.tile([mk.lam0 for mk in config.markov], (r, 1))
        lam1 = np.tile([mk.lam1 for mk in config.markov], (r, 1))

    rows = np.arange(r)
    # warm-up slot: ages start at 1, one arrival draw decides local age at t=1
    u0 = np.stack([g.random(n) for g in arr_rngs])
    if markov:
        arrived = u0 < lam1  # chain starts in the just-arrived state
        last = arrived
    else:
        arrived = u0 < lam
    d = np.where(arrived, 1, 2).astype(np.int64)
    aoi = np.full((r, n), 2, dtype=np.int64)  # ground truth, via delivery rule
    aoi_ap = np.full((r, n), 2, dtype=np.int64)  # AP view, via observation rule

    horizon, burn_in = config.horizon, config.burn_in
    acc_aoi = np.zeros((r, n), dtype=np.int64)
    sched_count = np.zeros((r, n), dtype=np.int64)
    deliver_count = np.zeros((r, n), dtype=np.int64)
    trace = {"aoi": [], "local_age": [], "scheduled": [], "delivered": []} if record_trace else None

    view = ApView(t=0, aoi=aoi_ap)
    if scheduler.privileged:
        view.true_local_age = d

    chunk = max(16, min(horizon, _CHUNK_BUDGET // max(1, r * n)))
    t = 1
    while t <= horizon:
        nb = min(chunk, horizon - t + 1)
        arr_u = np.stack([g.random((nb, n)) for g in arr_rngs], axis=1)
        chan_u = np.stack([g.random(nb) for g in chan_rngs], axis=1)
        pol_u = np.stack([g.random(nb) for g in pol_rngs], axis=1) if needs_uniform else None

        for b in range(nb):
            if t > burn_in:
                acc_aoi += aoi_ap

            view.t = t
            view.policy_uniform = pol_u[b] if needs_uniform else None
            if scheduler.privileged:
                view.true_local_age = d
            j = scheduler.decide(view)

            active = j != IDLE
            safe_j = np.where(active, j, 0)
            success = active & (chan_u[b] < p[rows, safe_j])
            dhat = d[rows, safe_j]

            hit_rows = rows[success]
            hit_cols = safe_j[success]
            sched_count[rows[active], safe_j[active]] += 1
            deliver_count[hit_rows, hit_cols] += 1

            if record_trace:
                trace["aoi"].append(aoi_ap.copy())
                trace["local_age"].append(d.copy())
                trace["scheduled"].append(j.copy())
                trace["delivered"].append(success.copy())

            # arrivals for this slot decide the local ages of the next one
            if markov:
                arrived = arr_u[b] < np.where(last, lam1, lam0)
                last = arrived
            else:
                arrived = arr_u[b] < lam

            # ground truth: delivery drops AoI to the transmitted age + 1
            aoi += 1
            aoi[hit_rows, hit_cols] = dhat[success] + 1
            # AP view: an observed age resets the AoI the same way
            aoi_ap += 1
            aoi_ap[hit_rows, hit_cols] = dhat[success] + 1
            if not np.array_equal(aoi, aoi_ap):
                raise ConsistencyError("AP-side AoI diverged from ground truth")

            d = np.where(arrived, 1, d + 1)
            if not np.all(aoi >= d):
                raise ConsistencyError("destination AoI fell below the local age")

            scheduler.observe(safe_j, success, dhat)
            if hasattr(scheduler, "belief_aoi") and not np.array_equal(
                scheduler.belief_aoi(), aoi_ap
            ):
                raise ConsistencyError("policy posterior desynchronized from the AoI")
            t += 1

    slots = horizon - burn_in
    per_run = (acc_aoi * omega).sum(axis=1) / (n * slots)
    per_node = acc_aoi / slots

    results = []
    for i, idx in enumerate(run_indices):
        results.append(
            EpisodeResult(
                run_index=idx,
                ewsaoi=float(per_run[i]),
                per_node_time_avg_aoi=per_node[i],
                schedule_fraction=sched_count[i] / horizon,
                delivery_fraction=deliver_count[i] / horizon,
                trace=None
                if trace is None
                else {key: np.array([frame[i] for frame in val]) for key, val in trace.items()},
            )
        )
    return results


def run_episode(config: ExperimentConfig, run_index: int, record_trace=False) -> EpisodeResult:
    """Simulate one episode; deterministic given (base_seed, run_index)."""
    return _simulate_batch(config, [run_index], record_trace=record_trace)[0]


def run_monte_carlo(config: ExperimentConfig) -> RunMetrics:
    """Simulate all configured runs and aggregate their time averages."""
    episodes = _simulate_batch(config, range(config.runs))
    values = np.array([ep.ewsaoi for ep in episodes])
    std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    return RunMetrics(
        ewsaoi_mean=float(values.mean()),
        ewsaoi_std=std,
        ci95_halfwidth=1.96 * std / np.sqrt(len(values)),
        per_node_mean_aoi=np.mean([ep.per_node_time_avg_aoi for ep in episodes], axis=0),
        per_run_values=values,
    )
