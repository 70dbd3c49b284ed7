"""Closed-form performance values and bounds for the weighted-AoI objective.

Randomized-scheduling averages and their optimizer, the max-weight tuning
weights and the pair of upper bounds they induce, the policy-independent
lower bound from the constrained throughput program, and the guarantee
ratio. All formulas assume Bernoulli arrivals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NodeParams


def _split(params):
    lam = np.asarray([q.lam for q in params], dtype=float)
    p = np.asarray([q.p for q in params], dtype=float)
    omega = np.asarray([q.omega for q in params], dtype=float)
    return lam, p, omega


def rs_ewsaoi(params, mu) -> float:
    """Stationary weighted-AoI average of randomized scheduling.

    Node i, scheduled independently with probability mu_i each slot over a
    channel of success rate p_i, contributes omega_i*(1/lam_i + 1/(p_i mu_i)).
    """
    lam, p, omega = _split(params)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != lam.shape:
        raise ValueError(f"mu must have one entry per node, got shape {mu.shape}")
    if np.any(mu <= 0.0) or np.any(mu > 1.0):
        raise ValueError("all scheduling probabilities must be in (0, 1]")
    if mu.sum() > 1.0 + 1e-12:
        raise ValueError(f"scheduling probabilities sum to {mu.sum()} > 1")
    return float(np.sum(omega * (1.0 / lam + 1.0 / (p * mu))) / len(params))


def optimal_rs(params):
    """Best randomized-scheduling probabilities and their average.

    mu*_i is proportional to sqrt(omega_i / p_i); the optimum value is
    (1/N) [sum omega_i/lam_i + (sum sqrt(omega_i/p_i))^2].
    """
    lam, p, omega = _split(params)
    w = np.sqrt(omega / p)
    mu_star = w / w.sum()
    value = float((np.sum(omega / lam) + w.sum() ** 2) / len(params))
    return mu_star, value


def pomw_weights(params, axis=-1):
    """Tuning weights for the partially observing max-weight policy.

    Returns (mu_prime, beta): the scheduling probabilities minimizing the
    drift-derived bound, mu'_i proportional to sqrt(omega_i/(lam_i p_i)),
    and the induced beta_i = omega_i / (lam_i mu'_i p_i).

    Accepts either a sequence of NodeParams or raw (lam, p, omega) arrays
    broadcast along ``axis`` (used for per-run randomized networks).
    """
    if len(params) and isinstance(params[0], NodeParams):
        lam, p, omega = _split(params)
    else:
        lam, p, omega = (np.asarray(a, dtype=float) for a in params)
    w = np.sqrt(omega / (lam * p))
    mu_prime = w / w.sum(axis=axis, keepdims=True)
    beta = omega / (lam * mu_prime * p)
    return mu_prime, beta


def pomw_upper_bound(params):
    """Drift bound for the partially observing max-weight policy.

    Returns (middle, r_rsm, mu_matched): the closed-form bound
    (1/N) sum omega_i (1/(lam_i mu'_i p_i) + 1), the larger randomized-
    scheduling average it is dominated by, and the matched probabilities
    mu_matched_i = lam_i mu'_i that realize it.
    """
    lam, p, omega = _split(params)
    mu_prime, _ = pomw_weights(params)
    middle = float(np.sum(omega * (1.0 / (lam * mu_prime * p) + 1.0)) / len(params))
    w = np.sqrt(omega * lam / p)
    mu_matched = w / np.sqrt(omega / (lam * p)).sum()
    r_rsm = rs_ewsaoi(params, mu_matched)
    return middle, r_rsm, mu_matched


def universal_lower_bound(params, tol=1e-10):
    """Policy-independent lower bound on the weighted-AoI average.

    Solves   min sum omega_i / q_i   s.t.  sum q_i/p_i <= 1,  0 < q_i <= lam_i
    by KKT: when the throughput constraint is slack at q = lam the caps are
    the optimum; otherwise the uncapped solution is q_i = sqrt(omega_i p_i / nu)
    with the multiplier nu found by bisection on the constraint residual.
    Returns (q_star, bound) with bound = (1/2N) sum omega_i (1/q*_i + 3).
    """
    lam, p, omega = _split(params)
    n = len(params)

    if np.sum(lam / p) <= 1.0:
        q = lam.copy()
    else:
        q_min = 1e-12

        def residual(nu):
            q_nu = np.minimum(lam, np.sqrt(omega * p / nu))
            return np.sum(q_nu / p) - 1.0

        lo, hi = 1e-300, float(np.max(omega * p / q_min ** 2))
        # residual is decreasing in nu: positive at lo (constraint violated),
        # negative at hi (q pushed to zero)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            r = residual(mid)
            if abs(r) <= tol:
                break
            if r > 0.0:
                lo = mid
            else:
                hi = mid
        q = np.minimum(lam, np.sqrt(omega * p / mid))

    bound = float(np.sum(omega * (1.0 / q + 3.0)) / (2.0 * n))
    return q, bound


def guarantee_ratio_bound(params) -> float:
    """Worst-case ratio of the max-weight average to the universal lower bound."""
    lam, _, _ = _split(params)
    return float(2.0 / lam.min())


def guarantee_beta(params):
    """Per-node beta preset under which the guarantee ratio is proven."""
    lam, _, omega = _split(params)
    q_star, _ = universal_lower_bound(params)
    return omega / (lam * q_star)


@dataclass(frozen=True)
class BoundReport:
    """All analytic quantities for one network, cross-validated on build."""

    rs_ewsaoi: float | None
    mu_star: np.ndarray
    r_rs_star: float
    mu_prime: np.ndarray
    beta: np.ndarray
    mu_matched: np.ndarray
    pomw_middle_bound: float
    r_rsm: float
    q_star: np.ndarray
    lower_bound: float
    guarantee_bound: float


def bound_report(params, mu=None) -> BoundReport:
    """Assemble a BoundReport, checking the identities that tie it together."""
    lam, _, _ = _split(params)
    mu_star, r_rs_star = optimal_rs(params)
    mu_prime, beta = pomw_weights(params)
    middle, r_rsm, mu_matched = pomw_upper_bound(params)
    q_star, lower = universal_lower_bound(params)

    if abs(mu_star.sum() - 1.0) > 1e-12 or abs(mu_prime.sum() - 1.0) > 1e-12:
        raise AssertionError("scheduling probabilities must sum to one")
    if mu_matched.sum() > 1.0 + 1e-12:
        raise AssertionError("matched probabilities must be feasible")
    if np.max(np.abs(mu_matched - lam * mu_prime)) > 1e-12:
        raise AssertionError("matched probabilities must equal lam * mu'")
    if abs(rs_ewsaoi(params, mu_star) - r_rs_star) > 1e-9 * max(1.0, r_rs_star):
        raise AssertionError("optimal randomized value must match its closed form")
    if middle > r_rsm + 1e-9:
        raise AssertionError("drift bound must not exceed the randomized bound")
    if lower > r_rs_star + 1e-9:
        raise AssertionError("lower bound must not exceed the optimal randomized value")
    if np.any(q_star > lam + 1e-12):
        raise AssertionError("throughputs must respect the arrival caps")
    p = np.asarray([q.p for q in params], dtype=float)
    if np.sum(q_star / p) > 1.0 + 1e-9:
        raise AssertionError("throughputs must respect the channel budget")

    return BoundReport(
        rs_ewsaoi=None if mu is None else rs_ewsaoi(params, mu),
        mu_star=mu_star,
        r_rs_star=r_rs_star,
        mu_prime=mu_prime,
        beta=beta,
        mu_matched=mu_matched,
        pomw_middle_bound=middle,
        r_rsm=r_rsm,
        q_star=q_star,
        lower_bound=lower,
        guarantee_bound=guarantee_ratio_bound(params),
    )
