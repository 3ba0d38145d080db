"""Closed-form layer: golden-ratio constants, mean-field bond-DP formulas and
the residue expression for the critical exponent.

Everything here is an exact function of its arguments (double precision); no
simulation, no randomness.
"""

import math
from dataclasses import dataclass, field

__all__ = [
    "PHI",
    "PHI_CONJ",
    "GoldenConstants",
    "ReferenceConstants",
    "rho_mf",
    "rho_mf_deriv",
    "g_func",
    "g_deriv",
    "beta_residue",
    "beta_complementary",
    "mf_critical_coincidence",
]

#: Golden ratio, (1 + sqrt(5)) / 2.
PHI = (1.0 + math.sqrt(5.0)) / 2.0

#: Golden ratio conjugate, 1 / PHI = PHI - 1.
PHI_CONJ = PHI - 1.0


@dataclass(frozen=True)
class GoldenConstants:
    """Golden-ratio constants and the derived exponent pair.

    Attributes
    ----------
    phi : float
        Golden ratio, (1 + sqrt(5)) / 2.
    phi_conj : float
        Conjugate, 1 / phi = phi - 1.
    beta_analytic : float
        Critical exponent in closed form, 1 / (2 + phi).
    mu_analytic : float
        Scaling exponent in closed form, 2 + phi.
    """

    phi: float = PHI
    phi_conj: float = PHI_CONJ
    beta_analytic: float = field(default=1.0 / (2.0 + PHI))
    mu_analytic: float = field(default=2.0 + PHI)


@dataclass(frozen=True)
class ReferenceConstants:
    """Published reference values and bounds for the BEC scaling exponent.

    `mu_closed_lower` is the closed-form lower bound (1 - 1/(2 log 2))^(-1);
    the stored value is the literature's rounded 3.589, and the natural-log
    evaluation of the expression is asserted against it in the test suite.
    """

    mu_num: float = 3.627
    beta_num: float = 0.276486
    beta_num_err: float = 0.000008
    mu_lower: float = 3.579
    mu_upper: float = 3.639
    mu_closed_lower: float = 3.589
    mu_bmsc_upper: float = 4.714
    mu_optimal: float = 2.0
    pc_bond: float = 0.6447


def rho_mf(p):
    """Mean-field stationary density of bond directed percolation.

    Returns (2p - 1) / p^2.  Negative for p < 1/2; the caller interprets a
    negative value as the inactive phase (true density 0).

    Parameters
    ----------
    p : float
        Bond probability, in (0, 1].
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    return (2.0 * p - 1.0) / (p * p)


def rho_mf_deriv(p):
    """Derivative of `rho_mf` with respect to p: 2(1 - p) / p^3."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    return 2.0 * (1.0 - p) / p**3


def g_func(p):
    """Same-site point-mass weight of the stationary pair density.

    Returns (1 - p)^2 / (2p - 1), defined on (1/2, 1] (pole at p = 1/2).
    """
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must be in (1/2, 1], got {p}")
    q = 1.0 - p
    return q * q / (2.0 * p - 1.0)


def g_deriv(p):
    """Derivative of `g_func` with respect to p: -2p(1 - p) / (2p - 1)^2."""
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must be in (1/2, 1], got {p}")
    s = 2.0 * p - 1.0
    return -2.0 * p * (1.0 - p) / (s * s)


def beta_residue(p_c):
    """Critical exponent from the residue of the mean-field pole.

    beta = rho_mf'(p_c) / (rho_mf'(p_c) - g'(p_c)).  At p_c = PHI_CONJ this
    evaluates exactly to 1 / (2 + phi).

    Parameters
    ----------
    p_c : float
        Percolation threshold, in (1/2, 1).
    """
    if not 0.5 < p_c < 1.0:
        raise ValueError(f"p_c must be in (1/2, 1), got {p_c}")
    num = rho_mf_deriv(p_c)
    den = num - g_deriv(p_c)
    if den == 0.0:
        raise ZeroDivisionError("residue denominator vanished")
    return num / den


def beta_complementary():
    """The rejected complementary root, 1 - beta_residue(PHI_CONJ).

    Its reciprocal is below 2, i.e. below the optimal scaling exponent, which
    is why this branch is discarded.
    """
    return 1.0 - beta_residue(PHI_CONJ)


def mf_critical_coincidence():
    """Evaluate (rho_mf(PHI_CONJ), g_func(PHI_CONJ)).

    Both equal the golden ratio conjugate; their coincidence is what pins the
    pole of the density integral at the threshold.
    """
    return rho_mf(PHI_CONJ), g_func(PHI_CONJ)
