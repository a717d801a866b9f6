"""Empirical partial-quotient statistics against the Kuzmin law."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import mpmath

from .errors import DomainError, EmptyHistogram

DEFAULT_CUTOFF = 100


def kuzmin_expected(k: int, dps: int | None = None):
    """log2((k+1)^2 / (k (k+2))).

    The argument is 1 + 1/(k(k+2)), so the value is computed with log1p to stay
    accurate for large k.  With ``dps`` the result is an mpmath number carrying
    that many decimal digits; otherwise a float.
    """
    if k < 1:
        raise DomainError(f"Kuzmin probability undefined for k={k}")
    if dps is None:
        return math.log1p(1 / (k * (k + 2))) / math.log(2)
    with mpmath.workdps(dps):
        return mpmath.log1p(mpmath.mpf(1) / (k * (k + 2))) / mpmath.log(2)


def kuzmin_tail(K: int) -> float:
    """Probability of a quotient above K; the partial sums telescope."""
    return math.log2((K + 2) / (K + 1))


@dataclass
class QuotientHistogram:
    cutoff: int = DEFAULT_CUTOFF
    counts: dict = field(default_factory=dict)
    tail: int = 0

    @property
    def total(self):
        return sum(self.counts.values()) + self.tail

    def __add__(self, other: "QuotientHistogram") -> "QuotientHistogram":
        if self.cutoff != other.cutoff:
            raise ValueError("cannot merge histograms with different cutoffs")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return QuotientHistogram(self.cutoff, dict(merged), self.tail + other.tail)


def histogram(b_stream: Iterable[int], cutoff: int = DEFAULT_CUTOFF) -> QuotientHistogram:
    """Count quotients 1..cutoff individually and everything above in ``tail``.

    The stream must not include b_0.
    """
    counts = Counter()
    tail = 0
    for b in b_stream:
        if b < 1:
            raise DomainError(f"partial quotient {b} < 1 (was b_0 included?)")
        if b > cutoff:
            tail += 1
        else:
            counts[int(b)] += 1
    return QuotientHistogram(cutoff, dict(sorted(counts.items())), tail)


@dataclass
class KuzminComparison:
    deviations: dict[int, float]
    tail_deviation: float
    max_deviation: float
    tv_distance: float


def kuzmin_distance(h: QuotientHistogram) -> KuzminComparison:
    total = h.total
    if not total > 0:
        raise EmptyHistogram("histogram is empty")
    deviations = {k: h.counts.get(k, 0) / total - kuzmin_expected(k)
                  for k in range(1, h.cutoff + 1)}
    tail_dev = h.tail / total - kuzmin_tail(h.cutoff)
    return KuzminComparison(
        deviations=deviations,
        tail_deviation=tail_dev,
        max_deviation=max(abs(v) for v in deviations.values()),
        tv_distance=0.5 * (sum(abs(v) for v in deviations.values()) + abs(tail_dev)),
    )
