"""Tour of the two-parameter posterior over a node's local age.

After the access point observes a node's local age k and then hears
nothing for m slots, its posterior over the current local age has a
closed form supported on m + 1 points: ages 1..m (an arrival happened
since) plus age k + m (nothing arrived). This script prints the posterior
for a few (k, m) pairs, checks it against brute-force enumeration of
arrival sequences, and shows the expected-age and scheduling-index
surfaces that drive the max-weight policy.
"""
import numpy as np

from aoi_uplink import belief_vector, expected_local_age, pomw_index_term


def show(k, m, lam):
    b = belief_vector(k, m, lam)
    pairs = ", ".join(f"P(d={int(a)})={p:.4f}" for a, p in zip(b.ages, b.probs))
    print(f"  k={k}, m={m}, lam={lam}:  {pairs}")
    print(f"    expected local age {expected_local_age(k, m, lam):.4f}, "
          f"index {pomw_index_term(k, m, lam):.4f} (AoI = {k + m})")


def main():
    print("Closed-form posteriors (arrival rate 0.4):")
    show(1, 1, 0.4)
    show(1, 2, 0.4)   # the three-point posterior {1: .4, 2: .24, 3: .36}
    show(2, 1, 0.4)
    show(7, 3, 0.25)

    print("\nBrute-force check against all arrival sequences of length m:")
    lam, k, m = 0.35, 4, 10
    b = belief_vector(k, m, lam)
    from itertools import product
    dist = {}
    for bits in product((0, 1), repeat=m):
        d, w = k, 1.0
        for bit in bits:
            w *= lam if bit else 1 - lam
            d = 1 if bit else d + 1
        dist[d] = dist.get(d, 0.0) + w
    worst = max(abs(b.prob_of(a) - p) for a, p in dist.items())
    print(f"  k={k}, m={m}, lam={lam}: max deviation over 2^{m} sequences = {worst:.2e}")

    print("\nThe index grows with elapsed time m (staleness) and with k:")
    lam = 0.3
    for k in (1, 5, 15):
        row = "  ".join(f"{pomw_index_term(k, m, lam):7.3f}" for m in range(1, 9))
        print(f"  k={k:2d}:  {row}")

    print("\nSure arrivals (lam=1) collapse the posterior to age 1, so the")
    print("index equals AoI - 1 and max-weight reduces to greedy-by-AoI:")
    for k, m in [(1, 3), (4, 2), (9, 6)]:
        print(f"  k={k}, m={m}: index = {pomw_index_term(k, m, 1.0):.1f} = {k + m} - 1")

    print("\nAt fixed AoI D = k + m, a larger last observation k means a")
    print("staler expected buffer, hence a smaller expected gain:")
    D, lam = 12, 0.25
    ages = [expected_local_age(k, D - k, lam) for k in range(1, D)]
    print("  E[d] for k=1..{}: {}".format(D - 1, np.round(ages, 3)))


if __name__ == "__main__":
    main()
