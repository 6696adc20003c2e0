"""Exact law of the one-dimensional drunk angel's displacement.

A single move is uniform on {-c, ..., c}.  After ``l`` moves the number of
walks ending at displacement ``k`` is the coefficient of x**(k + c*l) in
(1 + x + ... + x**(2c))**l, which the inclusion-exclusion sum below extracts
without expanding the polynomial.  Counts are Python ints, probabilities are
``Fraction`` objects; floats only appear in ``DisplacementPmf.as_floats``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


def binom(a: int, b: int) -> int:
    """Binomial coefficient that vanishes outside 0 <= b <= a."""
    if b < 0 or a < 0 or a < b:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class StepDistribution:
    """Uniform law of one coordinate of one move of an angel of power ``c``."""

    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"power must be >= 0, got {self.power}")

    @property
    def values(self) -> range:
        return range(-self.power, self.power + 1)

    @property
    def probability(self) -> Fraction:
        return Fraction(1, 2 * self.power + 1)

    @property
    def mean(self) -> Fraction:
        return Fraction(0)

    @property
    def variance(self) -> Fraction:
        c = self.power
        return Fraction(c * c + c, 3)


@dataclass(frozen=True)
class DisplacementPmf:
    """Exact distribution of the displacement after ``turns`` moves.

    ``counts`` maps each reachable displacement to the number of walks that
    end there; the common denominator is ``(2*power + 1) ** turns``.
    """

    power: int
    turns: int
    counts: dict[int, int]

    @property
    def denominator(self) -> int:
        return (2 * self.power + 1) ** self.turns

    @property
    def support(self) -> range:
        reach = self.power * self.turns
        return range(-reach, reach + 1)

    def count(self, j: int) -> int:
        return self.counts.get(j, 0)

    def mass(self, j: int) -> Fraction:
        return Fraction(self.count(j), self.denominator)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for j in self.support:
            yield j, self.mass(j)

    def total(self) -> Fraction:
        return Fraction(sum(self.counts.values()), self.denominator)

    def as_floats(self) -> dict[int, float]:
        return {j: float(p) for j, p in self.items()}

    def __eq__(self, other):
        if not isinstance(other, DisplacementPmf):
            return NotImplemented
        strip = lambda d: {j: v for j, v in d.items() if v}
        return (
            self.power == other.power
            and self.turns == other.turns
            and strip(self.counts) == strip(other.counts)
        )


def walk_count(c: int, l: int, k: int) -> int:
    """Number of ``l``-step walks with steps in {-c..c} ending exactly at ``k``.

    Evaluates sum_{m=0}^{l} (-1)^m C(l, m) C(l-1+k+cl-m(2c+1), l-1).  The
    alternating sum is exact for every integer ``k``; it is zero when
    ``|k| > c*l`` without any special casing.
    """
    if l < 1:
        raise ValueError(f"turn count must be >= 1, got {l}")
    if c < 0:
        raise ValueError(f"power must be >= 0, got {c}")
    width = 2 * c + 1
    total = 0
    for m in range(l + 1):
        term = binom(l, m) * binom(l - 1 + k + c * l - m * width, l - 1)
        total += -term if m % 2 else term
    return total


def pmf_exact(c: int, l: int) -> DisplacementPmf:
    if l < 0:
        raise ValueError(f"turn count must be >= 0, got {l}")
    if l == 0:
        return DisplacementPmf(c, 0, {0: 1})
    reach = c * l
    counts = {j: walk_count(c, l, j) for j in range(-reach, reach + 1)}
    return DisplacementPmf(c, l, counts)


def pmf_convolve_oracle(c: int, l: int) -> DisplacementPmf:
    """Same distribution as :func:`pmf_exact`, by repeated convolution.

    Independent of the closed-form count; used to check it.  Cost grows like
    ``c**2 * l**2`` so keep ``c*l`` moderate.
    """
    if c < 0:
        raise ValueError(f"power must be >= 0, got {c}")
    if l < 0:
        raise ValueError(f"turn count must be >= 0, got {l}")
    width = 2 * c + 1
    counts = [1]
    for _ in range(l):
        nxt = [0] * (len(counts) + width - 1)
        for i, v in enumerate(counts):
            if v:
                for s in range(width):
                    nxt[i + s] += v
        counts = nxt
    offset = c * l
    return DisplacementPmf(c, l, {i - offset: v for i, v in enumerate(counts)})


def cdf_within(c: int, l: int, k: int) -> Fraction:
    """P(|displacement| <= k) after ``l`` moves, as an exact fraction."""
    if k < 0:
        raise ValueError(f"distance must be >= 0, got {k}")
    pmf = pmf_exact(c, l)
    k = min(k, c * l)
    num = sum(pmf.count(j) for j in range(-k, k + 1))
    return Fraction(num, pmf.denominator)
