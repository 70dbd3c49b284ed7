"""Ground-truth dynamics of the slotted status-update uplink.

Arrival processes (Bernoulli and two-state Markov), the local-age and
destination-AoI recursions, and the error-prone channel. Every operation
is a pure function of explicit state plus a caller-supplied uniform draw,
so trajectories are reproducible bit for bit from a seed and safe to call
from any thread.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ConsistencyError(RuntimeError):
    """An internal invariant of the simulated network was violated.

    Raised when observations fall outside their feasible support or when
    AP-side bookkeeping desynchronizes from ground truth; always indicates
    a bug, never a recoverable condition.
    """


@dataclass(frozen=True)
class NodeParams:
    """Static per-node parameters.

    lam   -- probability of a status-update arrival per slot, in (0, 1]
    p     -- probability that a scheduled transmission succeeds, in (0, 1]
    omega -- positive weight of this node in the network AoI objective
    beta  -- positive per-node weight used by the max-weight policies
    """

    lam: float
    p: float
    omega: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.lam <= 1.0:
            raise ValueError(f"lam must be in (0, 1], got {self.lam}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {self.p}")
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.beta > 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class MarkovArrivalParams:
    """Two-state Markov arrival chain.

    lam0 -- arrival probability given no arrival in the previous slot
    lam1 -- arrival probability given an arrival in the previous slot

    The complements gam0 = 1 - lam0 and gam1 = 1 - lam1 are derived,
    never stored. lam0 == lam1 degenerates to a Bernoulli process.
    """

    lam0: float
    lam1: float

    def __post_init__(self):
        if not 0.0 <= self.lam0 <= 1.0:
            raise ValueError(f"lam0 must be in [0, 1], got {self.lam0}")
        if not 0.0 <= self.lam1 <= 1.0:
            raise ValueError(f"lam1 must be in [0, 1], got {self.lam1}")

    @property
    def gam0(self) -> float:
        return 1.0 - self.lam0

    @property
    def gam1(self) -> float:
        return 1.0 - self.lam1


class ArrivalKind(Enum):
    BERNOULLI = "bernoulli"
    MARKOV = "markov"


@dataclass(frozen=True)
class ArrivalProcessState:
    """State of one node's arrival process.

    For the Bernoulli kind ``last_arrival`` is unused and fixed. For the
    Markov kind it is the arrival indicator of the previous slot; the
    initial value True makes the first draw use lam1, matching a fresh
    buffer (local age 1) at time zero.
    """

    kind: ArrivalKind
    last_arrival: bool = True


def step_arrival(state, params, u):
    """Draw one slot's arrival indicator and advance the process state.

    ``params`` is a NodeParams for Bernoulli arrivals or a
    MarkovArrivalParams for the two-state chain. ``u`` is a uniform
    draw in [0, 1). Returns ``(arrival, next_state)``.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must be in [0, 1), got {u}")
    if state.kind is ArrivalKind.BERNOULLI:
        arrival = u < params.lam
        return arrival, state
    threshold = params.lam1 if state.last_arrival else params.lam0
    arrival = u < threshold
    return arrival, ArrivalProcessState(ArrivalKind.MARKOV, arrival)


def evolve_local_age(d, arrival):
    """Advance a node's local age by one slot.

    A fresh arrival replaces the buffered update (age resets to 1);
    otherwise the buffered update ages by one slot.
    """
    if d < 1:
        raise ValueError(f"local age must be >= 1, got {d}")
    return 1 if arrival else d + 1


def evolve_destination_aoi(D, d, delivered):
    """Advance a node's destination AoI by one slot.

    ``delivered`` means the node was scheduled this slot and its
    transmission succeeded, in which case the AP now holds the packet of
    age ``d`` and the AoI drops to d + 1; otherwise it grows by one.
    """
    if not D >= d >= 1:
        raise ValueError(f"need D >= d >= 1, got D={D}, d={d}")
    return d + 1 if delivered else D + 1


def attempt_transmission(p, u):
    """Return True when a transmission with success rate ``p`` goes through."""
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must be in [0, 1), got {u}")
    return u < p


@dataclass
class GroundTruthState:
    """True per-node state of the network: local ages and destination AoI.

    The hidden/visible split lives in the simulator: policies never see
    ``d`` unless explicitly privileged.
    """

    d: list
    D: list

    def __post_init__(self):
        if len(self.d) != len(self.D):
            raise ValueError("d and D must have the same length")
        self.validate()

    def validate(self):
        for i, (di, Di) in enumerate(zip(self.d, self.D)):
            if di < 1 or Di < 1:
                raise ConsistencyError(f"node {i}: ages must be >= 1 (d={di}, D={Di})")
            if Di < di:
                raise ConsistencyError(f"node {i}: D={Di} < d={di} is unreachable")
