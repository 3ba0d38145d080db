"""A tour of the Domany-Kinzel automaton on a ring.

Shows the parity-alternating parent rule, the special-case families, the
absorbing empty state, and the stationary density against its mean-field
prediction.

Run:  python3 demos/dk_automaton.py
"""

import numpy as np

from polarperc import DKParams, LatticeRow, density_run, dk_step


def render(row, width=64):
    cells = row.occupancy[:width]
    return "".join("#" if c else "." for c in cells)


def main():
    # Deterministic spreading: with p1 = p2 = 1 a single seed grows one site
    # per step, alternating sides with the time parity.
    row = LatticeRow.single(64, position=32)
    print("deterministic cone from one seed:")
    for _ in range(8):
        print(" ", render(row))
        row = dk_step(row, DKParams(1.0, 1.0), seed=0)
    print()

    # A supercritical bond run from a random row.
    rng = np.random.default_rng(5)
    row = LatticeRow(rng.integers(0, 2, size=64).astype(np.uint8))
    print("bond family at p = 0.8:")
    for _ in range(8):
        print(" ", render(row))
        row = dk_step(row, DKParams.bond(0.8), seed=42)
    print()

    # Families are just constraints on (p1, p2).
    p = 0.7
    print("families at p =", p)
    print("  bond    ", DKParams.bond(p))
    print("  site    ", DKParams.site(p))
    print("  compact ", DKParams.compact(p))
    print("  w18     ", DKParams.w18(p))
    print()

    # Stationary density from a full ring versus the mean-field formula
    # (2p-1)/p^2; agreement is good away from the critical point and
    # degrades as p approaches ~0.6447.
    print("p      simulated   mean-field")
    for p in (0.70, 0.80, 0.90, 0.95):
        rho = density_run(DKParams.bond(p), 4096, 2000, seed=9)
        sim = rho[1000:].mean()
        mf = (2 * p - 1) / p**2
        print(f"{p:.2f}   {sim:.4f}      {mf:.4f}")


if __name__ == "__main__":
    main()
