"""Blocklength-versus-gap scaling on the binary erasure channel.

Builds the exact erasure spectrum of all 2^n synthetic channels, turns it
into achievable-rate points under a union bound on the block error, and fits
the power law N ~ (C - R)^(-mu) in log-log coordinates.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FitError, ResourceLimitError
from .fits import ExponentFit, _linear_fit

__all__ = [
    "Spectrum",
    "ScalingPoint",
    "synthetic_spectrum",
    "max_rate",
    "fit_scaling_exponent",
    "dump_spectrum",
    "load_spectrum",
]

MAX_SPECTRUM_STAGES = 24

_MAGIC = b"PSPC"
_VERSION = 1
# 16-byte header: magic, version u32, n u32, 4 pad bytes; z0 f64 follows,
# then the 2^n float64 spectrum values.  All little-endian.
_HEADER = struct.Struct("<4sII4x")
_Z0 = struct.Struct("<d")


@dataclass
class Spectrum:
    """Sorted erasure probabilities of all 2^n synthetic channels."""

    n: int
    z0: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} values, got {self.values.shape}")

    @property
    def block_length(self):
        return 2**self.n


def synthetic_spectrum(z0, n):
    """Exact spectrum of the n-stage polarization tree rooted at z0.

    Level doubling over a flat array: each value v spawns v^2 and 2v - v^2.
    The result is sorted ascending.
    """
    if not 0.0 < z0 < 1.0:
        raise ValueError(f"z0 must be in (0, 1), got {z0}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_SPECTRUM_STAGES:
        raise ResourceLimitError(
            f"spectrum construction limited to n <= {MAX_SPECTRUM_STAGES}, got {n}"
        )
    vals = np.array([z0], dtype=np.float64)
    for _ in range(n):
        sq = vals * vals
        vals = np.concatenate([sq, 2.0 * vals - sq])
    vals.sort()
    return Spectrum(n, z0, vals)


@dataclass(frozen=True)
class ScalingPoint:
    """One (blocklength, rate) point for the scaling fit.

    `degenerate` marks points whose gap to capacity is nonpositive; they are
    reported but excluded from fits.
    """

    n: int
    block_length: int
    rate: float
    gap: float
    pe_target: float
    degenerate: bool = field(default=False)


def max_rate(spec, pe_target):
    """Best achievable rate at a block-error target under the union bound.

    Picks the largest k such that the k smallest erasure probabilities sum to
    at most `pe_target`; rate = k / N, gap = (1 - z0) - rate.
    """
    if not 0.0 < pe_target < 1.0:
        raise ValueError(f"pe_target must be in (0, 1), got {pe_target}")
    if spec.values.size == 0:
        raise ValueError("empty spectrum")
    csum = np.cumsum(spec.values)
    k = int(np.searchsorted(csum, pe_target, side="right"))
    big_n = spec.block_length
    rate = k / big_n
    gap = (1.0 - spec.z0) - rate
    return ScalingPoint(spec.n, big_n, rate, gap, pe_target, degenerate=gap <= 0.0)


def fit_scaling_exponent(points):
    """Least-squares exponent of N ~ gap^(-mu) from non-degenerate points.

    Regresses log2(N) on log2(gap); mu is the negated slope.  Needs at least
    three usable points with distinct stage counts.
    """
    usable = [p for p in points if not p.degenerate and p.gap > 0.0]
    if len({p.n for p in usable}) < 3:
        raise FitError("need >= 3 non-degenerate points with distinct n")
    x = np.array([math.log2(p.gap) for p in usable])
    y = np.array([math.log2(p.block_length) for p in usable])
    if np.ptp(x) == 0.0:
        raise FitError("degenerate abscissa: all gaps identical")
    slope, _, slope_err, rms = _linear_fit(x, y)
    return ExponentFit(
        value=-slope,
        stderr=slope_err,
        window=(float(np.min(x)), float(np.max(x))),
        n_points=len(usable),
        residual_rms=rms,
    )


def dump_spectrum(spec, path):
    """Write a spectrum in the binary PSPC format."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, spec.n))
        fh.write(_Z0.pack(spec.z0))
        fh.write(spec.values.astype("<f8").tobytes())


def load_spectrum(path):
    """Read a spectrum written by `dump_spectrum`."""
    with open(path, "rb") as fh:
        magic, version, n = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        if version != _VERSION:
            raise ValueError(f"unsupported version {version}")
        (z0,) = _Z0.unpack(fh.read(_Z0.size))
        values = np.frombuffer(fh.read(), dtype="<f8").copy()
    return Spectrum(n, z0, values)
