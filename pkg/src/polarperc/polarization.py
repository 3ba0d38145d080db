"""Erasure-parameter polarization on the binary erasure channel.

The erasure parameter of a synthetic channel evolves by squaring on one
branch and by z -> 2z - z^2 on the other, each taken with probability 1/2.
This module provides the single-step maps, exact enumeration of the branch
tree, Monte Carlo sampling of trajectories, and a discretized power
iteration on the averaging operator

    (T f)(z) = (f(z^2) + f(2z - z^2)) / 2

whose dominant decay rate on indicator-type initial data yields the scaling
exponent.
"""

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConvergenceError, ResourceLimitError

__all__ = [
    "ErasureState",
    "Interval",
    "GridFunction",
    "DecayEstimate",
    "polar_step",
    "simplified_step",
    "simplified_distribution",
    "exact_unpolarized_prob",
    "mc_unpolarized_prob",
    "mc_unpolarized_series",
    "operator_apply",
    "simplified_operator_apply",
    "dominant_decay",
]

MAX_ENUM_STAGES = 24
DEFAULT_GRID_NODES = 2**15 + 1


@dataclass(frozen=True)
class ErasureState:
    """Erasure parameter of one synthetic channel after `stage` steps."""

    z: float
    stage: int = 0

    def __post_init__(self):
        if not 0.0 <= self.z <= 1.0:
            raise ValueError(f"z must be in [0, 1], got {self.z}")
        if self.stage < 0:
            raise ValueError("stage must be nonnegative")


@dataclass(frozen=True)
class Interval:
    """Closed target interval [c, d] with 0 < c < d < 1."""

    c: float
    d: float

    def __post_init__(self):
        if not 0.0 < self.c < self.d < 1.0:
            raise ValueError(f"need 0 < c < d < 1, got [{self.c}, {self.d}]")

    def contains(self, z):
        return self.c <= z <= self.d


def polar_step(state, branch):
    """Apply one polarization step.

    Parameters
    ----------
    state : ErasureState
    branch : {"minus", "plus"}
        "minus" squares the parameter; "plus" maps it to 2z - z^2.
    """
    z = state.z
    if branch == "minus":
        z_next = z * z
    elif branch == "plus":
        z_next = 2.0 * z - z * z
    else:
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    return ErasureState(z_next, state.stage + 1)


def simplified_step(state, branch):
    """One step of the small-z simplified recursion (plus branch is identity)."""
    z = state.z
    if branch == "minus":
        z_next = z * z
    elif branch == "plus":
        z_next = z
    else:
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    return ErasureState(z_next, state.stage + 1)


def simplified_distribution(z0, n):
    """Exact distribution after n simplified steps.

    Only the number k of squaring branches matters, so the 2^n leaves collapse
    onto n + 1 values z0^(2^k) with binomial weights.

    Returns
    -------
    list of (value, probability), ordered by k = 0..n.
    """
    if not 0.0 < z0 < 1.0:
        raise ValueError(f"z0 must be in (0, 1), got {z0}")
    if not 0 <= n <= 60:
        raise ValueError(f"n must be in [0, 60], got {n}")
    total = 2.0**n
    return [(z0 ** (2.0**k), math.comb(n, k) / total) for k in range(n + 1)]


@numba.njit(cache=True)
def _enumerate_in_interval(z0, c, d, n):
    # Iterative DFS over the full binary branch tree, explicit stack of
    # (z, depth); counts leaves landing in [c, d].
    stack_z = np.empty(n + 1, dtype=np.float64)
    stack_k = np.empty(n + 1, dtype=np.int64)
    stack_z[0] = z0
    stack_k[0] = 0
    sp = 1
    hits = 0
    while sp > 0:
        sp -= 1
        z = stack_z[sp]
        depth = stack_k[sp]
        if depth == n:
            if c <= z <= d:
                hits += 1
            continue
        stack_z[sp] = z * z
        stack_k[sp] = depth + 1
        stack_z[sp + 1] = 2.0 * z - z * z
        stack_k[sp + 1] = depth + 1
        sp += 2
    return hits


def exact_unpolarized_prob(z0, iv, n):
    """Exact probability that the erasure parameter sits in `iv` after n steps.

    Enumerates all 2^n equiprobable branch sequences.

    Parameters
    ----------
    z0 : float
        Initial erasure parameter, in (0, 1).
    iv : Interval
    n : int
        Number of steps, at most 24.
    """
    if not 0.0 < z0 < 1.0:
        raise ValueError(f"z0 must be in (0, 1), got {z0}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_ENUM_STAGES:
        raise ResourceLimitError(
            f"exact enumeration limited to n <= {MAX_ENUM_STAGES}, got {n}"
        )
    hits = _enumerate_in_interval(z0, iv.c, iv.d, n)
    return hits / 2.0**n


def _stage_bits(seed, stage, trials):
    # One unbiased branch bit per trajectory, drawn from a Philox stream whose
    # counter is the stage index: bit(trial) is a pure function of
    # (seed, stage, trial), so trials are order-independent.
    bitgen = np.random.Philox(key=np.uint64(seed), counter=[stage, 0, 0, 0])
    return np.random.Generator(bitgen).random(trials) < 0.5


def _mc_trajectories(z0, n_max, trials, seed, record):
    """Run `trials` trajectories to stage n_max, recording hit counts.

    `record` maps stage -> Interval; returns {stage: hits}.
    """
    z = np.full(trials, z0, dtype=np.float64)
    hits = {}
    if 0 in record:
        hits[0] = int(np.count_nonzero((z >= record[0].c) & (z <= record[0].d)))
    for stage in range(n_max):
        minus = _stage_bits(seed, stage, trials)
        z = np.where(minus, z * z, 2.0 * z - z * z)
        if stage + 1 in record:
            iv = record[stage + 1]
            hits[stage + 1] = int(np.count_nonzero((z >= iv.c) & (z <= iv.d)))
    return hits


def mc_unpolarized_prob(z0, iv, n, trials, seed):
    """Monte Carlo estimate of the unpolarized probability at stage n.

    Returns
    -------
    (estimate, stderr) : binomial point estimate and standard error.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0.0 < z0 < 1.0:
        raise ValueError(f"z0 must be in (0, 1), got {z0}")
    hits = _mc_trajectories(z0, n, trials, seed, {n: iv})[n]
    p_hat = hits / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return p_hat, stderr


def mc_unpolarized_series(z0, iv, stages, trials, seed):
    """Monte Carlo estimates at several stages from one set of trajectories.

    Parameters
    ----------
    stages : iterable of int
        Stage indices to record (need not be contiguous).

    Returns
    -------
    list of (stage, estimate, stderr), sorted by stage.
    """
    stages = sorted(set(int(s) for s in stages))
    if not stages or stages[0] < 0:
        raise ValueError("stages must be nonnegative integers")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    record = {s: iv for s in stages}
    hits = _mc_trajectories(z0, max(stages), trials, seed, record)
    out = []
    for s in stages:
        p_hat = hits[s] / trials
        out.append((s, p_hat, math.sqrt(p_hat * (1.0 - p_hat) / trials)))
    return out


@dataclass
class GridFunction:
    """A function of the erasure parameter sampled on a fixed z-grid.

    Evaluation between nodes is piecewise linear (positivity- and
    bound-preserving, unlike higher-order schemes).  Outside the grid the
    function continues linearly to the stored endpoint values; the default
    constructors place nodes at z = 0 and z = 1 so this never triggers.
    """

    grid: np.ndarray
    values: np.ndarray
    interpolation: str = "linear"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if self.interpolation != "linear":
            raise ValueError(f"unsupported interpolation {self.interpolation!r}")

    @classmethod
    def uniform(cls, num_nodes=DEFAULT_GRID_NODES):
        """Zero function on a uniform grid over [0, 1]."""
        grid = np.linspace(0.0, 1.0, num_nodes)
        return cls(grid, np.zeros(num_nodes))

    @classmethod
    def indicator(cls, iv, num_nodes=DEFAULT_GRID_NODES):
        """Indicator of `iv` on a uniform grid (endpoints carry 0)."""
        f = cls.uniform(num_nodes)
        f.values = ((f.grid >= iv.c) & (f.grid <= iv.d)).astype(np.float64)
        return f

    @classmethod
    def constant(cls, value, num_nodes=DEFAULT_GRID_NODES):
        grid = np.linspace(0.0, 1.0, num_nodes)
        return cls(grid, np.full(num_nodes, float(value)))

    def __call__(self, z):
        return np.interp(z, self.grid, self.values)

    def mass(self):
        """Trapezoidal integral over the grid."""
        return float(np.trapezoid(self.values, self.grid))


def operator_apply(f):
    """One application of the polarization averaging operator.

    New value at each node z is (f(z^2) + f(2z - z^2)) / 2.
    """
    z = f.grid
    new_vals = 0.5 * (f(z * z) + f(2.0 * z - z * z))
    return GridFunction(z, new_vals, f.interpolation)


def simplified_operator_apply(f):
    """One application of the simplified operator, (f(z^2) + f(z)) / 2."""
    z = f.grid
    new_vals = 0.5 * (f(z * z) + f.values)
    return GridFunction(z, new_vals, f.interpolation)


@dataclass(frozen=True)
class DecayEstimate:
    """Converged per-stage mass ratio and the implied scaling exponent.

    `mu` is None when the ratio is 1 (no decay, e.g. a constant input).
    """

    decay_ratio: float
    mu: float | None
    iterations: int
    convergence_residual: float


def dominant_decay(f0, max_iters=2000, tol=1e-10, operator=operator_apply):
    """Power iteration for the dominant mass-decay ratio of the operator.

    Applies `operator`, records the mass ratio of consecutive iterates, and
    renormalizes to unit mass each step; stops when the ratio stabilizes to
    `tol`.  The scaling exponent is mu = -1 / log2(ratio).

    Raises
    ------
    ConvergenceError
        If the ratio has not stabilized after `max_iters` applications.
    """
    mass = f0.mass()
    if mass <= 0.0:
        raise ValueError("initial function must have positive mass")
    f = GridFunction(f0.grid, f0.values / mass, f0.interpolation)
    ratio_prev = None
    for it in range(1, max_iters + 1):
        f_next = operator(f)
        ratio = f_next.mass()
        if ratio <= 0.0:
            raise ConvergenceError("iterate mass collapsed to zero", residual=ratio)
        f = GridFunction(f_next.grid, f_next.values / ratio, f_next.interpolation)
        if ratio_prev is not None:
            residual = abs(ratio - ratio_prev)
            if residual < tol:
                if ratio >= 1.0 - 1e-15:
                    return DecayEstimate(ratio, None, it, residual)
                mu = -1.0 / math.log2(ratio)
                return DecayEstimate(ratio, mu, it, residual)
        ratio_prev = ratio
    raise ConvergenceError(
        f"mass ratio did not stabilize in {max_iters} iterations",
        residual=abs(ratio - ratio_prev) if ratio_prev is not None else None,
    )
