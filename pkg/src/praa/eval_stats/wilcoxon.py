"""Wilcoxon signed-rank test for matched pairs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

EXACT_LIMIT = 25


@dataclass(frozen=True)
class WilcoxonResult:
    w_plus: float
    w_minus: float
    statistic: float
    n: int
    p_value: float
    exact: bool


def _exact_null_counts(doubled_ranks):
    """Number of sign assignments reaching each value of 2*W+ (ranks may be half-integers)."""
    counts = np.zeros(int(sum(doubled_ranks)) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r] if r else counts
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(pairs) -> WilcoxonResult:
    """Two-sided signed-rank test on (first, second) pairs.

    Zero differences are dropped and tied magnitudes get average ranks. The
    p-value is exact over all 2**n sign assignments for n <= 25 and uses the
    tie-corrected normal approximation above that.
    """
    diffs = np.array([a - b for a, b in pairs], dtype=float)
    diffs = diffs[diffs != 0]
    n = len(diffs)
    if n == 0:
        raise ValueError("all differences are zero")
    ranks = rankdata(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    statistic = min(w_plus, w_minus)

    if n <= EXACT_LIMIT:
        doubled = np.rint(2 * ranks).astype(int)
        counts = _exact_null_counts(doubled)
        total = 2**n
        k = int(round(2 * w_plus))
        lower = sum(counts[: k + 1]) / total
        upper = sum(counts[k:]) / total
        p = min(1.0, 2 * min(lower, upper))
        return WilcoxonResult(w_plus, w_minus, statistic, n, float(p), True)

    mean = n * (n + 1) / 4
    _, tie_sizes = np.unique(np.abs(diffs), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24 - np.sum(tie_sizes**3 - tie_sizes) / 48
    z = (statistic - mean) / math.sqrt(var)
    p = min(1.0, math.erfc(-z / math.sqrt(2)))  # 2 * Phi(z) with z <= 0
    return WilcoxonResult(w_plus, w_minus, statistic, n, float(p), False)
