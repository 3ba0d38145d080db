"""Polarization / directed-percolation toolkit.

Reproduces, end to end, the chain connecting the binary-erasure-channel
polarization process, the Domany-Kinzel directed-percolation automaton, and
the golden-ratio closed forms for their shared critical exponents.
"""

from .dk import (
    DKParams,
    LatticeRow,
    OrderParameterCurve,
    bond_probability_evolution,
    density_curve,
    density_run,
    dk_step,
    pair_correlation,
    percolation_run,
    survival_probability,
)
from .errors import (
    BracketError,
    ConvergenceError,
    ExtinctionError,
    FitError,
    PolarpercError,
    ResourceLimitError,
)
from .fits import ExponentFit, ThresholdEstimate, decay_rate, find_threshold, fit_beta
from .golden import (
    PHI,
    PHI_CONJ,
    GoldenConstants,
    ReferenceConstants,
    beta_complementary,
    beta_residue,
    g_deriv,
    g_func,
    mf_critical_coincidence,
    rho_mf,
    rho_mf_deriv,
)
from .polarization import (
    DecayEstimate,
    ErasureState,
    GridFunction,
    Interval,
    dominant_decay,
    exact_unpolarized_prob,
    mc_unpolarized_prob,
    mc_unpolarized_series,
    operator_apply,
    polar_step,
    simplified_distribution,
    simplified_operator_apply,
    simplified_step,
)
from .scaling import (
    ScalingPoint,
    Spectrum,
    dump_spectrum,
    fit_scaling_exponent,
    load_spectrum,
    max_rate,
    synthetic_spectrum,
)

__version__ = "0.1.0"
