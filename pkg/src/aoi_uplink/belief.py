"""Posterior machinery for the partially observed local ages.

Under Bernoulli arrivals the AP's posterior over a node's local age is
fully characterized by two integers: the last observed age k and the
number of slots m elapsed since that observation. This module provides
that two-parameter sufficient statistic, the closed-form posterior
vectors, the expected local age and the max-weight index built from it,
a truncated dense Bayes filter used as a verification oracle, and the
analogous machinery for two-state Markov arrivals.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .model import ConsistencyError, MarkovArrivalParams


class TruncationOverflowError(RuntimeError):
    """The dense Bayes filter ran out of headroom below its age cap."""


@dataclass(frozen=True)
class LocBelief:
    """Last-observation characterization of one node's posterior.

    k is the last observed local age, m the number of slots elapsed since
    that observation; both are >= 1. The implied destination AoI is k + m.
    """

    k: int
    m: int

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise ValueError(f"k and m must be >= 1, got k={self.k}, m={self.m}")

    @property
    def aoi(self) -> int:
        return self.k + self.m


class BeliefVector:
    """Sparse distribution over local-age values.

    Stored as parallel arrays of strictly increasing ages and their
    probabilities. The two-parameter posterior has support of size m + 1,
    so sparsity keeps the main path exact with no truncation.
    """

    __slots__ = ("ages", "probs")

    def __init__(self, ages, probs):
        ages = np.asarray(ages, dtype=np.int64)
        probs = np.asarray(probs, dtype=np.float64)
        if ages.shape != probs.shape or ages.ndim != 1:
            raise ValueError("ages and probs must be 1-D arrays of equal length")
        if np.any(ages < 1):
            raise ValueError("ages must be >= 1")
        if np.any(np.diff(ages) <= 0):
            raise ValueError("ages must be strictly increasing")
        if np.any(probs < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {probs.sum()!r}")
        self.ages = ages
        self.probs = probs

    @classmethod
    def point_mass(cls, age):
        return cls([age], [1.0])

    def as_dict(self) -> dict:
        return {int(a): float(p) for a, p in zip(self.ages, self.probs)}

    def prob_of(self, age) -> float:
        idx = np.searchsorted(self.ages, age)
        if idx < len(self.ages) and self.ages[idx] == age:
            return float(self.probs[idx])
        return 0.0

    def expected_age(self) -> float:
        return float(self.probs @ self.ages)

    def max_diff(self, other) -> float:
        """Largest absolute probability difference over the union of supports."""
        ages = np.union1d(self.ages, other.ages)
        return max(abs(self.prob_of(a) - other.prob_of(a)) for a in ages)

    def __repr__(self):
        pairs = ", ".join(f"{int(a)}: {p:.6g}" for a, p in zip(self.ages, self.probs))
        return f"BeliefVector({{{pairs}}})"


def belief_vector(k, m, lam) -> BeliefVector:
    """Closed-form posterior over the local age, ``m`` slots after observing age ``k``.

    With gamma = 1 - lam, the age is j in 1..m with probability
    lam * gamma**(j-1) (an arrival j slots back survived unreplaced) and
    k + m with the remaining mass gamma**m (no arrival since the
    observation). k + m > m always, so the supports never collide.
    """
    if k < 1 or m < 1:
        raise ValueError(f"k and m must be >= 1, got k={k}, m={m}")
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must be in (0, 1], got {lam}")
    gamma = 1.0 - lam
    ages = np.concatenate([np.arange(1, m + 1), [k + m]])
    probs = np.concatenate([lam * gamma ** np.arange(m), [gamma ** m]])
    return BeliefVector(ages, probs)


def expected_local_age(k, m, lam) -> float:
    """Mean of belief_vector(k, m, lam), in closed form.

    Equals 1/lam + (k - 1/lam) * (1 - lam)**m; the geometric part sums to
    1/lam in the limit and the residual tracks the unreplaced observation.
    """
    if k < 1 or m < 1:
        raise ValueError(f"k and m must be >= 1, got k={k}, m={m}")
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must be in (0, 1], got {lam}")
    inv = 1.0 / lam
    return inv + (k - inv) * (1.0 - lam) ** m


def pomw_index_term(k, m, lam) -> float:
    """Expected one-slot AoI reduction from a successful delivery.

    This is the destination AoI k + m minus the expected local age:
    m + (1 - (1-lam)**m) * (k - 1/lam). It is strictly positive and at
    most k + m - 1 for all valid (k, m, lam).
    """
    if k < 1 or m < 1:
        raise ValueError(f"k and m must be >= 1, got k={k}, m={m}")
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must be in (0, 1], got {lam}")
    return m + (1.0 - (1.0 - lam) ** m) * (k - 1.0 / lam)


def update_loc_belief(z: LocBelief, scheduled, observation=None) -> LocBelief:
    """Advance the (k, m) posterior through one slot.

    A successful observation of age d resets the pair to (d, 1); a slot
    with no observation (not scheduled, or the transmission failed) only
    increments m. Observations are feasible only in {1..m} + {k+m}; any
    other value means the simulator and the posterior have desynchronized.
    """
    if observation is not None:
        if not scheduled:
            raise ValueError("observation supplied for an unscheduled node")
        feasible = (1 <= observation <= z.m) or observation == z.k + z.m
        if not feasible:
            raise ConsistencyError(
                f"observed age {observation} outside the feasible support "
                f"{{1..{z.m}}} u {{{z.k + z.m}}} of belief (k={z.k}, m={z.m})"
            )
        return LocBelief(k=observation, m=1)
    return LocBelief(k=z.k, m=z.m + 1)


def bayes_update_truncated(b: BeliefVector, lam, scheduled, observation, d_max) -> BeliefVector:
    """One dense Bayes-filter step over ages 1..d_max (verification oracle).

    Conditions the current posterior on this slot's observation, then
    pushes it through the arrival kernel (reset to 1 with probability lam,
    else age + 1) and renormalizes. A slot with no observation carries no
    information -- the no-observation likelihood is constant in the age --
    so it reduces to the pure prediction step. Mass that would cross
    ``d_max`` raises TruncationOverflowError instead of being folded;
    callers must configure enough headroom.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must be in (0, 1], got {lam}")
    if observation is not None and not scheduled:
        raise ValueError("observation supplied for an unscheduled node")
    if np.any(b.ages > d_max):
        raise TruncationOverflowError(
            f"belief already carries mass at age {int(b.ages.max())} > d_max={d_max}"
        )

    dense = np.zeros(d_max + 1)
    dense[b.ages] = b.probs

    if observation is not None:
        if observation > d_max:
            raise TruncationOverflowError(
                f"observed age {observation} exceeds d_max={d_max}"
            )
        weight = dense[observation]
        if weight <= 0.0:
            raise ConsistencyError(
                f"observed age {observation} has zero posterior mass"
            )
        dense[:] = 0.0
        dense[observation] = 1.0

    if dense[d_max] > 0.0:
        raise TruncationOverflowError(
            f"prediction step would push mass beyond d_max={d_max}"
        )
    shifted = np.zeros(d_max + 1)
    shifted[2:] = dense[1:-1] * (1.0 - lam)
    shifted[1] = lam * dense.sum()
    shifted /= shifted.sum()

    support = np.flatnonzero(shifted)
    return BeliefVector(support, shifted[support])


# --- two-state Markov arrivals ---------------------------------------------


@dataclass(frozen=True)
class MarkovBeliefState:
    """Last-observation statistic for the Markov-arrival posterior.

    Beyond (k, m) it carries omega0, the arrival-belief anchor right after
    the observation (lam1 if k == 1, else lam0), from which the unrolled
    m-step updates are rebuilt.
    """

    k: int
    m: int
    omega0: float

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise ValueError(f"k and m must be >= 1, got k={self.k}, m={self.m}")
        if not 0.0 <= self.omega0 <= 1.0:
            raise ValueError(f"omega0 must be in [0, 1], got {self.omega0}")

    @property
    def aoi(self) -> int:
        return self.k + self.m


def _eta_step(omega, params: MarkovArrivalParams) -> float:
    # One unobserved-slot update of the arrival belief.
    return omega * params.lam1 + (1.0 - omega) * params.lam0


@functools.lru_cache(maxsize=None)
def _check_t_m_closed_form(lam0, lam1):
    # Cross-check the closed form against plain iteration once per
    # parameter pair; the closed form was rederived from the fixed point
    # of the one-step update and must reproduce it exactly.
    params = MarkovArrivalParams(lam0, lam1)
    for omega in (0.0, 0.37, 1.0):
        w = omega
        for m in range(1, 6):
            w = _eta_step(w, params)
            if abs(w - _t_m_closed(omega, m, params)) > 1e-12:
                raise AssertionError(
                    f"m-step arrival-belief closed form diverges from iteration "
                    f"at lam0={lam0}, lam1={lam1}, omega={omega}, m={m}"
                )


def _t_m_closed(omega, m, params: MarkovArrivalParams) -> float:
    r = params.lam1 - params.lam0
    denom = 1.0 - r
    if denom == 0.0:
        # lam0=0, lam1=1: the chain freezes, the belief never moves.
        return omega
    wstar = params.lam0 / denom
    return wstar + r ** m * (omega - wstar)


def markov_t_m(omega, m, params: MarkovArrivalParams) -> float:
    """m-step arrival-belief update with no observations in between.

    Applies the one-step map eta(w) = w*lam1 + (1-w)*lam0 m times, via its
    closed form around the fixed point lam0 / (1 + lam0 - lam1).
    """
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must be in [0, 1], got {omega}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    _check_t_m_closed_form(params.lam0, params.lam1)
    return _t_m_closed(omega, m, params)


def _arrival_beliefs(k, m, params: MarkovArrivalParams):
    # omega_j for j = 0..m-1: the arrival belief j slots after observing
    # age k (which pins the previous slot's arrival indicator to k == 1).
    omega0 = params.lam1 if k == 1 else params.lam0
    out = np.empty(m)
    w = omega0
    for j in range(m):
        out[j] = w
        w = _eta_step(w, params)
    return out


def markov_belief_vector(k, m, params: MarkovArrivalParams) -> BeliefVector:
    """Local-age posterior under Markov arrivals, m slots after observing k.

    Built by unrolling the recursion that deposits the current arrival
    belief at age 1 each slot and scales the surviving mass by its
    complement: age a in 1..m carries omega_{m-a} * prod(1 - omega_d) over
    d in (m-a, m), and age k + m the full survival product.
    """
    if k < 1 or m < 1:
        raise ValueError(f"k and m must be >= 1, got k={k}, m={m}")
    omegas = _arrival_beliefs(k, m, params)
    # survival[j] = prod over d in [j, m) of (1 - omega_d), survival[m] = 1
    survival = np.append(np.cumprod((1.0 - omegas)[::-1])[::-1], 1.0)
    lag = np.arange(m - 1, -1, -1)  # slots since the mass at age a entered
    probs = np.append(omegas[lag] * survival[lag + 1], survival[0])
    ages = np.append(np.arange(1, m + 1), k + m)
    return BeliefVector(ages, probs)


def markov_expected_local_age(k, m, params: MarkovArrivalParams) -> float:
    """Exact finite-sum mean of markov_belief_vector(k, m, params)."""
    return markov_belief_vector(k, m, params).expected_age()
