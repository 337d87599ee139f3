"""Parametric assay-quality metrics computed from group summaries.

All functions take the positive-control summary first and the
negative-control summary second, mirroring the mu_1/mu_2 convention.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateMeanDifference, DegenerateVariance, DivisionByZeroMean
from .samples import SummaryStats


def snr_assay(pos: SummaryStats, neg: SummaryStats) -> float:
    """Assay signal-to-noise ratio: (mu_1 - mu_2) / sigma_2."""
    if neg.std_dev == 0:
        raise DegenerateVariance("S/N needs a positive negative-control std dev")
    return (pos.mean - neg.mean) / neg.std_dev


def sbr(pos: SummaryStats, neg: SummaryStats) -> float:
    """Signal-to-background ratio: mu_1 / mu_2."""
    if neg.mean == 0:
        raise DivisionByZeroMean("S/B needs a nonzero negative-control mean")
    return pos.mean / neg.mean


def z_factor(pos: SummaryStats, neg: SummaryStats) -> float:
    """Z'-factor: 1 - 3*(sigma_1 + sigma_2) / |mu_1 - mu_2|, range (-inf, 1]."""
    diff = abs(pos.mean - neg.mean)
    if diff == 0:
        raise DegenerateMeanDifference("Z'-factor is undefined for equal group means")
    return 1.0 - 3.0 * (pos.std_dev + neg.std_dev) / diff


def ssmd(pos: SummaryStats, neg: SummaryStats) -> float:
    """Strictly standardized mean difference: (mu_1 - mu_2) / sqrt(sigma_1^2 + sigma_2^2)."""
    pooled = pos.variance + neg.variance
    if pooled == 0:
        raise DegenerateVariance("SSMD needs at least one positive group variance")
    return (pos.mean - neg.mean) / float(np.sqrt(pooled))


def cnr(pos: SummaryStats, neg: SummaryStats) -> float:
    """Contrast-to-noise ratio: |SSMD| (magnitude only, direction stripped)."""
    return abs(ssmd(pos, neg))
