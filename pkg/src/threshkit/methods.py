"""Global threshold selectors over gray-level histograms.

Each selector returns a ThresholdResult carrying the method name, the
chosen gray level t, and a method-specific diagnostic. Group moments are
accumulated in exact integer arithmetic; division to double precision
happens only at the end, so selections are deterministic and the
within-group-variance argmin is exact even under ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .image import GRAY_LEVELS, GRAY_MAX, Histogram, _check_level

METHODS = ("mean", "ptile", "hdt", "emt", "manual")

_LEVELS = np.arange(GRAY_LEVELS, dtype=np.int64)


class EmptyHistogramError(ValueError):
    """Raised when a selector is asked to threshold an empty histogram."""


@dataclass(frozen=True)
class GroupStats:
    """Weight, mean and population variance of one side of a partition."""

    probability: float
    mean: float
    variance: float


@dataclass(frozen=True)
class ThresholdResult:
    method: str
    t: int
    criterion: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not 0 <= self.t <= GRAY_MAX:
            raise ValueError(f"threshold {self.t} outside [0, 255]")


def _require_nonempty(hist: Histogram):
    if hist.total < 1:
        raise EmptyHistogramError("histogram is empty")


def mean_threshold(hist: Histogram) -> ThresholdResult:
    """Threshold at the floor of the exact mean gray level."""
    _require_nonempty(hist)
    weighted = int(np.dot(hist.counts, _LEVELS))
    return ThresholdResult("mean", weighted // hist.total)


def ptile_threshold(hist: Histogram, p: float) -> ThresholdResult:
    """Threshold so the bright object covers at most fraction p of the area.

    Returns the smallest t whose above-t pixel fraction is <= p; the
    achieved fraction is reported as the criterion. Assumes objects are
    brighter than the background.
    """
    _require_nonempty(hist)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    above = hist.total - np.cumsum(hist.counts)
    ratios = above / hist.total
    t = int(np.argmax(ratios <= p))  # first hit; t=255 always qualifies
    return ThresholdResult("ptile", t, criterion=float(ratios[t]), params={"p": p})


def within_group_variance(hist: Histogram, t: int):
    """Split the histogram at t and weigh the two group variances.

    The low group holds values <= t, the high group values > t. Returns
    (C, low, high) where C = P_low * var_low + P_high * var_high. An
    empty group contributes zero; its stats are all zero.
    """
    _require_nonempty(hist)
    t = _check_level(t)
    counts = hist.counts
    n1 = int(counts[: t + 1].sum())
    s1 = int(np.dot(counts[: t + 1], _LEVELS[: t + 1]))
    q1 = int(np.dot(counts[: t + 1], _LEVELS[: t + 1] ** 2))
    n2 = hist.total - n1
    s2 = int(np.dot(counts, _LEVELS)) - s1
    q2 = int(np.dot(counts, _LEVELS**2)) - q1
    low = _group_stats(n1, s1, q1, hist.total)
    high = _group_stats(n2, s2, q2, hist.total)
    c = low.probability * low.variance + high.probability * high.variance
    return c, low, high


def _group_stats(n: int, s: int, q: int, total: int) -> GroupStats:
    if n == 0:
        return GroupStats(0.0, 0.0, 0.0)
    # q*n - s*s >= 0 by Cauchy-Schwarz, so the variance never dips negative
    return GroupStats(n / total, s / n, (q * n - s * s) / (n * n))


def hdt_threshold(hist: Histogram) -> ThresholdResult:
    """Minimize the within-group variance over all candidate thresholds.

    Scans t in [vmin, vmax-1] so both groups stay nonempty, breaking ties
    toward the smallest t. A constant image degenerates to t = value
    (everything background). The scan runs on cumulative integer moments;
    candidates are compared as exact rationals, so the argmin matches a
    direct per-t partition bit for bit.
    """
    _require_nonempty(hist)
    counts = hist.counts
    occupied = np.flatnonzero(counts)
    vmin, vmax = int(occupied[0]), int(occupied[-1])
    if vmin == vmax:
        return ThresholdResult("hdt", vmin, criterion=0.0)

    cum_n = np.cumsum(counts)
    cum_s = np.cumsum(counts * _LEVELS)
    total = hist.total
    s_all = int(cum_s[-1])

    # Minimizing C(t) is equivalent to maximizing B(t) = s1^2/n1 + s2^2/n2
    # (between-group form); comparing B as exact integer fractions avoids
    # any floating-point argmin ambiguity.
    best_t = vmin
    best_num = -1
    best_den = 1
    for t in range(vmin, vmax):
        n1 = int(cum_n[t])
        s1 = int(cum_s[t])
        n2 = total - n1
        s2 = s_all - s1
        num = s1 * s1 * n2 + s2 * s2 * n1
        den = n1 * n2
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den

    criterion, _, _ = within_group_variance(hist, best_t)
    return ThresholdResult("hdt", best_t, criterion=criterion)


def manual_threshold(hist: Histogram, t: int) -> ThresholdResult:
    """Record a human-chosen threshold; no criterion is attached."""
    t = _check_level(t)
    return ThresholdResult("manual", t)
