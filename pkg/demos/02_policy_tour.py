"""One short episode under each scheduling policy, side by side.

All policies face identical arrivals and channel outcomes (common random
numbers), so differences in the AoI traces are purely differences in
scheduling. The partially observing max-weight rule sees only the AoI and
occasional age observations; its fully observing counterpart is allowed to
peek at the true buffer ages.
"""
import numpy as np

from aoi_uplink.model import NodeParams
from aoi_uplink.sim import ExperimentConfig, PolicySpec, run_episode, run_monte_carlo

NODES = (
    NodeParams(lam=0.15, p=0.9, omega=1.0),
    NodeParams(lam=0.50, p=0.6, omega=1.0),
    NodeParams(lam=0.90, p=0.8, omega=1.0),
)

POLICIES = [
    PolicySpec("pomw"),
    PolicySpec("fomw"),
    PolicySpec("mwa"),
    PolicySpec("rr"),
    PolicySpec("rs", mu="optimal"),
]


def main():
    print(f"Network: lam={[q.lam for q in NODES]}, p={[q.p for q in NODES]}\n")

    print("First 30 scheduling decisions (node index, '-' = idle):")
    for policy in POLICIES:
        config = ExperimentConfig(
            nodes=NODES, policy=policy, horizon=40, runs=1, base_seed=7
        )
        episode = run_episode(config, 0, record_trace=True)
        timeline = "".join(
            "-" if j < 0 else str(j) for j in episode.trace["scheduled"][:30]
        )
        print(f"  {policy.name:5s}  {timeline}")

    print("\nTime-average weighted AoI over 60 runs of 5000 slots:")
    for policy in POLICIES:
        config = ExperimentConfig(
            nodes=NODES, policy=policy, horizon=5000, runs=60, base_seed=7
        )
        metrics = run_monte_carlo(config)
        share = np.round(run_episode(config, 0).schedule_fraction, 2)
        print(
            f"  {policy.name:5s}  {metrics.ewsaoi_mean:7.3f} "
            f"(ci95 {metrics.ci95_halfwidth:.3f}), schedule share {share}"
        )

    print("\nNode 0 updates rarely (lam=0.15). The max-AoI rule fixates on it")
    print("even though its buffered packet is usually stale; the posterior-")
    print("driven rule hedges by how much AoI a success would actually win,")
    print("and the privileged variant, seeing true ages, spends those slots")
    print("where fresh packets are really waiting.")


if __name__ == "__main__":
    main()
