"""Scheduling policies behind one decision interface.

Five rules: the max-weight policy driven by the two-parameter posterior
(pomw), its information-privileged counterpart that sees true local ages
(fomw), stationary randomized scheduling (rs), round robin (rr), and the
max weighted-AoI rule that ignores local ages entirely (mwa).

Each rule exists twice: as a scalar decision function over one network
state (the reference semantics, used directly in tests), and as a
scheduler class whose state is vectorized over independent Monte-Carlo
runs for the lockstep simulation engine. Ties always break toward the
lowest node index; only randomized scheduling ever idles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .belief import pomw_index_term

IDLE = -1


@dataclass(frozen=True)
class Decision:
    """Outcome of one scheduling step: a 0-based node index, or None to idle."""

    node: int | None


# --- scalar decision rules ---------------------------------------------------


def _argmax_first(scores) -> int:
    return int(np.argmax(scores))


def decide_pomw(beliefs, params) -> Decision:
    """Schedule the node with maximal beta * p * expected AoI reduction."""
    scores = [
        (q.beta * q.p) * pomw_index_term(z.k, z.m, q.lam)
        for z, q in zip(beliefs, params)
    ]
    return Decision(_argmax_first(scores))


def decide_fomw(d, D, params) -> Decision:
    """Privileged variant: schedule the maximal beta * p * (D - d)."""
    for di, Di in zip(d, D):
        if not Di >= di >= 1:
            raise ValueError(f"need D >= d >= 1, got d={di}, D={Di}")
    scores = [(q.beta * q.p) * (Di - di) for di, Di, q in zip(d, D, params)]
    return Decision(_argmax_first(scores))


def decide_rs(mu, u) -> Decision:
    """Pick the node whose probability interval contains u, or idle.

    [0, 1) is partitioned into consecutive intervals of lengths mu_1..mu_N
    followed by a residual idle interval of length 1 - sum(mu).
    """
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0.0) or np.any(mu > 1.0):
        raise ValueError("all scheduling probabilities must be in (0, 1]")
    if mu.sum() > 1.0 + 1e-12:
        raise ValueError(f"scheduling probabilities sum to {mu.sum()} > 1")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must be in [0, 1), got {u}")
    edge = 0.0
    for i, m in enumerate(mu):
        edge += m
        if u < edge:
            return Decision(i)
    return Decision(None)


def decide_rr(counter, n) -> Decision:
    """Circular order starting from node 0; the caller advances the counter."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    return Decision(counter % n)


def decide_mwa(D, params) -> Decision:
    """Schedule the maximal omega * p * D; needs no local-age information."""
    scores = [(q.omega * q.p) * Di for Di, q in zip(D, params)]
    return Decision(_argmax_first(scores))


# --- vectorized schedulers for the lockstep engine ---------------------------
#
# State arrays are (R, N): R independent runs, N nodes. decide() returns an
# (R,) array of node indices (IDLE for an idling run); observe() feeds back
# the scheduled indices, which runs got a successful observation, and the
# observed ages, in that order, once per slot.


class PomwScheduler:
    """Max-weight on the posterior AoI-reduction index, Bernoulli arrivals.

    Tracks (k, m) per run and node plus the cached survival factor
    (1-lam)**m so the index costs O(1) per node per slot.
    """

    privileged = False

    def __init__(self, lam, p, beta):
        self.lam = np.asarray(lam, dtype=float)
        self.gamma = 1.0 - self.lam
        self.inv_lam = 1.0 / self.lam
        self.bp = np.asarray(beta, dtype=float) * np.asarray(p, dtype=float)
        shape = self.lam.shape
        self.k = np.ones(shape, dtype=np.int64)
        self.m = np.ones(shape, dtype=np.int64)
        self.gm = self.gamma.copy()  # (1-lam)**m

    def decide(self, view):
        scores = self.m + (1.0 - self.gm) * (self.k - self.inv_lam)
        scores = self.bp * scores
        return np.argmax(scores, axis=1)

    def observe(self, j, observed, dhat):
        self.m += 1
        self.gm *= self.gamma
        rows = np.flatnonzero(observed)
        if rows.size:
            cols = j[rows]
            self.k[rows, cols] = dhat[rows]
            self.m[rows, cols] = 1
            self.gm[rows, cols] = self.gamma[rows, cols]

    def belief_aoi(self):
        return self.k + self.m


class MarkovPomwScheduler:
    """Max-weight on the posterior index under two-state Markov arrivals.

    The expected local age is maintained incrementally: one unobserved slot
    maps it through E <- (1-w)E + 1 while the arrival belief w advances
    through the chain; an observation re-anchors both.
    """

    privileged = False

    def __init__(self, p, beta, lam0, lam1):
        self.lam0 = np.asarray(lam0, dtype=float)
        self.lam1 = np.asarray(lam1, dtype=float)
        self.bp = np.asarray(beta, dtype=float) * np.asarray(p, dtype=float)
        shape = self.bp.shape
        self.k = np.ones(shape, dtype=np.int64)
        self.m = np.ones(shape, dtype=np.int64)
        # observing age 1 pins the previous arrival indicator to 1
        omega0 = np.broadcast_to(self.lam1, shape).copy()
        self.expected_age = omega0 + (1.0 - omega0) * 2.0
        self.w = self._advance(omega0)

    def _advance(self, w):
        return w * self.lam1 + (1.0 - w) * self.lam0

    def decide(self, view):
        scores = self.bp * (self.k + self.m - self.expected_age)
        return np.argmax(scores, axis=1)

    def observe(self, j, observed, dhat):
        self.m += 1
        self.expected_age = (1.0 - self.w) * self.expected_age + 1.0
        self.w = self._advance(self.w)
        rows = np.flatnonzero(observed)
        if rows.size:
            cols = j[rows]
            ages = dhat[rows]
            lam0 = np.broadcast_to(self.lam0, self.bp.shape)[rows, cols]
            lam1 = np.broadcast_to(self.lam1, self.bp.shape)[rows, cols]
            omega0 = np.where(ages == 1, lam1, lam0)
            self.k[rows, cols] = ages
            self.m[rows, cols] = 1
            self.expected_age[rows, cols] = omega0 + (1.0 - omega0) * (ages + 1.0)
            self.w[rows, cols] = omega0 * lam1 + (1.0 - omega0) * lam0

    def belief_aoi(self):
        return self.k + self.m


class FomwScheduler:
    """Privileged max-weight rule on the true age gap beta * p * (D - d)."""

    privileged = True

    def __init__(self, p, beta):
        self.bp = np.asarray(beta, dtype=float) * np.asarray(p, dtype=float)

    def decide(self, view):
        return np.argmax(self.bp * (view.aoi - view.true_local_age), axis=1)

    def observe(self, j, observed, dhat):
        pass


class MwaScheduler:
    """Max weighted AoI: schedule argmax omega * p * D."""

    privileged = False

    def __init__(self, p, omega):
        self.wp = np.asarray(omega, dtype=float) * np.asarray(p, dtype=float)

    def decide(self, view):
        return np.argmax(self.wp * view.aoi, axis=1)

    def observe(self, j, observed, dhat):
        pass


class RrScheduler:
    """Fixed circular order, identical across runs, starting at node 0."""

    privileged = False

    def __init__(self, n_nodes, n_runs):
        self.n = n_nodes
        self.runs = n_runs
        self.counter = 0

    def decide(self, view):
        j = np.full(self.runs, self.counter % self.n, dtype=np.int64)
        self.counter += 1
        return j

    def observe(self, j, observed, dhat):
        pass


class RsScheduler:
    """Stationary randomized scheduling; the only rule that can idle.

    Consumes one uniform per run per slot from the policy stream supplied
    by the engine through the view.
    """

    privileged = False

    def __init__(self, mu):
        mu = np.asarray(mu, dtype=float)
        if np.any(mu <= 0.0) or np.any(mu > 1.0):
            raise ValueError("all scheduling probabilities must be in (0, 1]")
        if np.any(mu.sum(axis=-1) > 1.0 + 1e-12):
            raise ValueError("scheduling probabilities must sum to at most 1")
        self.cum = np.cumsum(mu, axis=-1)
        self.n = mu.shape[-1]

    def decide(self, view):
        u = view.policy_uniform
        j = np.sum(u[:, None] >= self.cum, axis=1)
        return np.where(j >= self.n, IDLE, j)

    def observe(self, j, observed, dhat):
        pass
