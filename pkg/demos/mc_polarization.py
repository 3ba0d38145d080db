"""Monte Carlo view of the polarization recursion.

Samples random branch sequences of Z -> Z^2 / 2Z - Z^2, checks the estimator
against exact enumeration at small depth, then extracts the decay exponent
from a longer series.

Run:  python3 demos/mc_polarization.py [--trials 1000000] [--seed 7]
"""

import argparse
import math

from polarperc import (
    Interval,
    decay_rate,
    exact_unpolarized_prob,
    mc_unpolarized_prob,
    mc_unpolarized_series,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    iv = Interval(0.1, 0.9)

    # Exact enumeration is feasible for small n; use it to calibrate trust
    # in the sampler.
    print("n   exact        mc           pull (stderr units)")
    for n in (4, 8, 12):
        exact = exact_unpolarized_prob(0.5, iv, n)
        est, err = mc_unpolarized_prob(0.5, iv, n, args.trials, args.seed)
        pull = abs(est - exact) / max(err, 1e-12)
        print(f"{n:<3d} {exact:<12.6f} {est:<12.6f} {pull:.2f}")
    print()

    # One trajectory set, recorded at every stage: p_n is roughly halved
    # every mu/... steps, i.e. p_n ~ 2^(-n/mu).
    series = mc_unpolarized_series(0.5, iv, range(8, 29), args.trials, args.seed)
    print("n   p_n        log2(p_n)")
    for n, p, _ in series:
        print(f"{n:<3d} {p:<10.6f} {math.log2(p):+.3f}" if p > 0 else f"{n:<3d} 0")
    fit = decay_rate([(n, p) for n, p, _ in series if p > 0])
    print()
    print("decay rate (bits/step) =", fit.value, "+-", fit.stderr)
    print("mu = 1/rate            =", 1.0 / fit.value)


if __name__ == "__main__":
    main()
