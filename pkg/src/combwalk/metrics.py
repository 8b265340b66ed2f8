"""Distribution comparison metrics for population distributions.

Distributions here are non-negative weight vectors over integer sites; they
are compared as-is (no renormalization), so integrator norm drift shows up
in `norm_deficit` instead of being hidden.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np


class Moments(NamedTuple):
    norm: float
    mean: float
    variance: float


@dataclass(frozen=True)
class ComparisonReport:
    """Summary of how two aligned distributions differ.

    `mean_offset` is mean(a) - mean(b); variances are reported per
    distribution; `norm_deficit` is 1 - sum(a), the measured side's missing
    probability mass.
    """

    total_variation: float
    l_inf: float
    mean_offset: float
    variance_a: float
    variance_b: float
    norm_deficit: float

    def to_dict(self) -> dict:
        return asdict(self)


def _as_distribution(p, name: str) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if np.any(arr < 0):
        raise ValueError(f"{name} has negative entries")
    return arr


def total_variation(p, q) -> float:
    """Total variation distance (1/2) sum |p - q| on aligned supports."""
    a = _as_distribution(p, "p")
    b = _as_distribution(q, "q")
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return 0.5 * float(np.sum(np.abs(a - b)))


def moments(p, offsets=None) -> Moments:
    """Norm, mean and variance of a weight vector over integer sites.

    `offsets` defaults to 0 .. len(p)-1; pass explicit site indices for
    origin-relative distributions.
    """
    a = _as_distribution(p, "p")
    total = float(np.sum(a))
    if total == 0.0:
        raise ValueError("distribution is identically zero")
    n = np.arange(a.size, dtype=float) if offsets is None else np.asarray(offsets, float)
    if n.size != a.size:
        raise ValueError(f"offsets length {n.size} does not match distribution {a.size}")
    mean = float(np.dot(n, a)) / total
    second = float(np.dot(n * n, a)) / total
    return Moments(norm=total, mean=mean, variance=second - mean * mean)


def compare_distributions(p, q, offsets=None) -> ComparisonReport:
    """Full comparison of the measured distribution `p` against reference `q`."""
    a = _as_distribution(p, "p")
    b = _as_distribution(q, "q")
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    ma = moments(a, offsets)
    mb = moments(b, offsets)
    return ComparisonReport(
        total_variation=total_variation(a, b),
        l_inf=float(np.max(np.abs(a - b))),
        mean_offset=ma.mean - mb.mean,
        variance_a=ma.variance,
        variance_b=mb.variance,
        norm_deficit=1.0 - ma.norm,
    )


def align_supports(offsets_a, values_a, offsets_b, values_b):
    """Zero-pad two indexed distributions onto the union of their supports.

    Returns (offsets, a, b) with offsets covering the contiguous union range.
    """
    oa = np.asarray(offsets_a, dtype=int)
    ob = np.asarray(offsets_b, dtype=int)
    lo = min(oa.min(), ob.min())
    hi = max(oa.max(), ob.max())
    offsets = np.arange(lo, hi + 1)
    a = np.zeros(offsets.size)
    b = np.zeros(offsets.size)
    a[oa - lo] = values_a
    b[ob - lo] = values_b
    return offsets, a, b
