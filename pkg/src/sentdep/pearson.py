"""Pearson correlation over lag-aligned pairs, with a significance rule.

The coefficient is computed with the classic two-pass formula: subtract
each sample mean, then form sum(dx*dy) / sqrt(sum(dx^2) * sum(dy^2)).
Accumulation uses compensated summation (math.fsum), which keeps the
result within ~1e-15 of an exact-arithmetic evaluation for series of this
length. A correlation is flagged significant when its magnitude strictly
exceeds a threshold (default 0.4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import AlignedPairs
from .errors import DegenerateSeries, InsufficientData

#: Minimum pair count for a correlation to be defined (and stable).
MIN_PAIRS = 3

#: |r| must strictly exceed this to be called significant.
DEFAULT_THRESHOLD = 0.4


@dataclass(frozen=True)
class CorrelationResult:
    """Correlation coefficient plus the significance decision."""

    r: float
    n: int
    significant: bool
    threshold: float


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Two-pass Pearson correlation of two equal-length sequences.

    Raises InsufficientData for fewer than three pairs and
    DegenerateSeries when either side is constant (zero variance makes
    the coefficient undefined).
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < MIN_PAIRS:
        raise InsufficientData(f"need at least {MIN_PAIRS} pairs, got {n}")
    # max == min is an exact constant-series test; a summed-variance
    # threshold would misfire on rounding noise.
    if max(xs) == min(xs):
        raise DegenerateSeries("first series is constant")
    if max(ys) == min(ys):
        raise DegenerateSeries("second series is constant")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    r = sxy / math.sqrt(sxx * syy)
    # Rounding can push |r| infinitesimally past 1 for collinear data.
    return max(-1.0, min(1.0, r))


def classify(r: float, threshold: float = DEFAULT_THRESHOLD) -> bool:
    """Significance rule: |r| strictly greater than ``threshold``."""
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    return abs(r) > threshold


def correlate(
    aligned: AlignedPairs, threshold: float = DEFAULT_THRESHOLD
) -> CorrelationResult:
    """Correlation of lag-aligned (sentiment, price) pairs."""
    r = pearson(aligned.xs(), aligned.ys())
    return CorrelationResult(
        r=r, n=aligned.n, significant=classify(r, threshold), threshold=threshold
    )
