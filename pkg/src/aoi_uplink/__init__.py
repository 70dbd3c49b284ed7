"""Age-of-information scheduling for a slotted multiuser uplink.

A numpy library with three layers: closed-form posterior machinery for the
partially observed local ages, scheduling policies built on it, and a
seeded Monte-Carlo engine with the analytic performance bounds needed to
check it. See README for the CLI and the demo scripts.
"""

from .model import (
    ArrivalKind,
    ArrivalProcessState,
    ConsistencyError,
    GroundTruthState,
    MarkovArrivalParams,
    NodeParams,
    attempt_transmission,
    evolve_destination_aoi,
    evolve_local_age,
    step_arrival,
)
from .belief import (
    BeliefVector,
    LocBelief,
    MarkovBeliefState,
    TruncationOverflowError,
    bayes_update_truncated,
    belief_vector,
    expected_local_age,
    markov_belief_vector,
    markov_expected_local_age,
    markov_t_m,
    pomw_index_term,
    update_loc_belief,
)

__version__ = "0.1.0"
