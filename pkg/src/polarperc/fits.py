"""Exponent extraction: threshold bisection, power-law fits, decay rates.

Shared by the percolation and polarization pipelines; every routine is a
pure function of its inputs (and explicit seeds).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, FitError

__all__ = [
    "ExponentFit",
    "ThresholdEstimate",
    "find_threshold",
    "fit_beta",
    "decay_rate",
]


@dataclass(frozen=True)
class ExponentFit:
    """A fitted exponent with its regression diagnostics."""

    value: float
    stderr: float
    window: tuple
    n_points: int
    residual_rms: float

    def as_dict(self, method=None):
        d = {
            "value": self.value,
            "stderr": self.stderr,
            "window": list(self.window),
            "n_points": self.n_points,
            "residual_rms": self.residual_rms,
        }
        if method is not None:
            d["method"] = method
        return d


@dataclass(frozen=True)
class ThresholdEstimate:
    """Bisection result for a percolation threshold."""

    p_c: float
    bracket: tuple
    trials_per_probe: int


def _linear_fit(x, y, weights=None):
    """Weighted least squares y = a + b x.

    Returns (slope, intercept, slope_stderr, residual_rms).  With weights the
    slope variance comes from the normal-equations covariance (weights taken
    as inverse variances); without, from the residual variance estimate.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    if n < 3:
        raise FitError(f"need >= 3 points, got {n}")
    if weights is None:
        w = np.ones(n)
        known_sigma = False
    else:
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w <= 0.0) or not np.all(np.isfinite(w)):
            raise FitError("weights must be positive and finite")
        known_sigma = True
    sw = w.sum()
    xbar = (w * x).sum() / sw
    ybar = (w * y).sum() / sw
    sxx = (w * (x - xbar) ** 2).sum()
    if sxx == 0.0:
        raise FitError("degenerate abscissa")
    slope = (w * (x - xbar) * (y - ybar)).sum() / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    rms = float(np.sqrt(np.mean(resid**2)))
    if known_sigma:
        slope_err = math.sqrt(1.0 / sxx)
    else:
        dof = n - 2
        s2 = float((resid**2).sum() / dof)
        slope_err = math.sqrt(s2 / sxx)
    return float(slope), float(intercept), float(slope_err), rms


def find_threshold(family, t_max, trials, tol, seed, probe_fn=None):
    """Bisect the survival transition of a one-parameter automaton family.

    Parameters
    ----------
    family : callable p -> DKParams
        Must be monotone: survival probability non-decreasing in p.
    t_max, trials : int
        Probe settings; a probe is classified "active" when its single-seed
        clusters both clear the extinction null and show saturated (no longer
        decaying) late-time survival.
    tol : float
        Final bracket width, >= 1e-4.
    seed : int
        Probe seeds are derived from (seed, probe index).
    probe_fn : callable, optional
        (params, t_max, trials, probe_seed) -> bool ("in active phase").
        Defaults to the Domany-Kinzel saturation probe; injectable for
        synthetic families in tests.

    Returns
    -------
    ThresholdEstimate
    """
    if tol < 1e-4:
        raise ValueError(f"tol must be >= 1e-4, got {tol}")
    if probe_fn is None:
        from .dk import saturation_probe

        probe_fn = saturation_probe

    def probe(p, idx):
        return probe_fn(family(p), t_max, trials, _mix64(seed, idx))

    lo, hi = 0.0, 1.0
    if probe(lo, 0):
        raise BracketError("lower bracket endpoint already survives")
    if not probe(hi, 1):
        raise BracketError("upper bracket endpoint does not survive")
    idx = 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if probe(mid, idx):
            hi = mid
        else:
            lo = mid
        idx += 1
    return ThresholdEstimate(0.5 * (lo + hi), (lo, hi), trials)


# Reduced chi-square above which the per-point error bars clearly fail to
# describe the scatter (systematic curvature dominates); the fit then falls
# back to equal weights, since inverse-variance weighting would only amplify
# the systematic bias of the most precise points.
_CHI2_REWEIGHT_CUTOFF = 10.0


def fit_beta(curve, p_c, window):
    """Power-law fit of an order-parameter curve above threshold.

    Weighted least squares of log(value) on log(p - p_c) for points whose
    distance to threshold lies in `window`; the slope is the critical
    exponent.  Point weights are the inverse variances of log(value),
    (value / stderr)^2.  When the weighted fit's reduced chi-square exceeds
    10 (residuals dominated by model error, not noise) or any stderr is 0,
    the fit is unweighted.
    """
    low, high = window
    if not 0.0 < low < high:
        raise FitError(f"window must satisfy 0 < low < high, got {window}")
    xs, ys, ws = [], [], []
    for p, value, stderr in curve.points:
        dist = p - p_c
        if low <= dist <= high:
            if value <= 0.0:
                raise FitError(f"nonpositive order parameter at p={p}")
            xs.append(math.log(dist))
            ys.append(math.log(value))
            ws.append(stderr / value)  # sigma of log(value)
    if len(xs) < 3:
        raise FitError(f"only {len(xs)} points inside window {window}")
    weights = None
    if all(s > 0.0 for s in ws):
        weights = [1.0 / s**2 for s in ws]
        slope, intercept, _, _ = _linear_fit(xs, ys, weights)
        resid = np.array(ys) - (intercept + slope * np.array(xs))
        chi2_dof = float((resid**2 * np.array(weights)).sum() / (len(xs) - 2))
        if chi2_dof > _CHI2_REWEIGHT_CUTOFF:
            weights = None
    slope, _, slope_err, rms = _linear_fit(xs, ys, weights)
    return ExponentFit(
        value=slope,
        stderr=slope_err,
        window=(low, high),
        n_points=len(xs),
        residual_rms=rms,
    )


def decay_rate(series):
    """Per-step base-2 decay rate from the tail half of a positive series.

    Fits log2(value) against the index over the last half of the points and
    returns the negated slope.
    """
    pts = sorted(series)
    if len(pts) < 3:
        raise FitError(f"need >= 3 points, got {len(pts)}")
    if any(v <= 0.0 for _, v in pts):
        raise ValueError("series values must be positive")
    tail = pts[len(pts) // 2 :] if len(pts) // 2 + 3 <= len(pts) else pts
    if len(tail) < 3:
        tail = pts
    x = [float(i) for i, _ in tail]
    y = [math.log2(v) for _, v in tail]
    slope, _, slope_err, rms = _linear_fit(x, y)
    return ExponentFit(
        value=-slope,
        stderr=slope_err,
        window=(x[0], x[-1]),
        n_points=len(tail),
        residual_rms=rms,
    )


def _mix64(a, b):
    """Stateless 64-bit mix of two integers (SplitMix64 finalizer, twice)."""
    mask = (1 << 64) - 1

    def fin(x):
        x &= mask
        x ^= x >> 30
        x = (x * 0xBF58476D1CE4E5B9) & mask
        x ^= x >> 27
        x = (x * 0x94D049BB133111EB) & mask
        x ^= x >> 31
        return x

    return fin(fin(a * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03) + b)
