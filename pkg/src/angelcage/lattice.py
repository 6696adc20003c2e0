"""Lattice points in Euclidean balls and the devil's cage size.

The cage region is Euclidean everywhere in this package; the supremum norm only
bounds a single move of the angel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

LatticePoint = tuple[int, ...]

#: Largest bounding box (in candidate points) ``count_ball_exact`` will scan.
ENUMERATION_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would scan more points than allowed."""


def euclidean_norm(x: Sequence[int]) -> float:
    return math.sqrt(sum(int(v) * int(v) for v in x))


def sup_norm(x: Sequence[int]) -> int:
    return max((abs(int(v)) for v in x), default=0)


def _squared_radius_floor(r) -> int:
    """floor(r**2), exact for ints and Fractions."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    if isinstance(r, (int, Fraction)):
        return math.floor(Fraction(r) ** 2)
    return math.floor(Fraction(float(r)) ** 2)


def count_ball_exact(n: int, r, budget: int = ENUMERATION_BUDGET) -> int:
    """Count points of Z^n with Euclidean norm <= r by scanning the box.

    The last two coordinates are handled as a sorted table of partial sums of
    squares, so the box is filtered with one ``searchsorted`` per leading
    coordinate tuple instead of materialising every candidate.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    big_r = _squared_radius_floor(r)
    m = math.isqrt(big_r)
    side = 2 * m + 1
    if side**n > budget:
        raise BudgetExceeded(
            f"{side}^{n} = {side**n} candidate points exceeds budget {budget}"
        )
    squares = np.arange(-m, m + 1, dtype=np.int64) ** 2
    if n == 1:
        return int(np.count_nonzero(squares <= big_r))
    tail = np.sort((squares[:, None] + squares[None, :]).ravel())
    lead = np.zeros(1, dtype=np.int64)
    for _ in range(n - 2):
        lead = (lead[:, None] + squares[None, :]).ravel()
        lead = lead[lead <= big_r]
    return int(np.searchsorted(tail, big_r - lead, side="right").sum())


def count_disk_hcv(r) -> int:
    """Planar lattice count N(r) from the Hilbert and Cohn-Vossen series.

    N(r) = 1 + 4 * sum_i (floor(r^2/(4i+1)) - floor(r^2/(4i+3))), stopping once
    4i+1 exceeds r^2.
    """
    big_r = _squared_radius_floor(r)
    total = 0
    i = 0
    while 4 * i + 1 <= big_r:
        total += big_r // (4 * i + 1) - big_r // (4 * i + 3)
        i += 1
    return 1 + 4 * total


def _gamma_half_integer(x2: int) -> float:
    """Gamma(x2 / 2) for a positive integer x2, by the recurrence."""
    if x2 < 1:
        raise ValueError("argument must be a positive half-integer")
    if x2 % 2 == 0:
        g, start = 1.0, 2  # Gamma(1)
    else:
        g, start = math.sqrt(math.pi), 1  # Gamma(1/2)
    for a2 in range(start, x2, 2):
        g *= a2 / 2
    return g


def unit_ball_volume(n: int) -> float:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.pi ** (n / 2) / _gamma_half_integer(n + 2)


def ball_volume(n: int, r: float) -> float:
    """Volume pi^(n/2) r^n / Gamma(n/2 + 1) of the Euclidean n-ball."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    return unit_ball_volume(n) * r**n


def shell_turns(n: int, c: int, k: int) -> int:
    """Turns N the devil needs to build the hollow sphere of inner radius k.

    One dimension needs the 2c+2 cells on both sides of [-k, k].  Otherwise N
    is the ceiling of the volume difference of the balls of radius k+c and
    k-1 (the integer power difference is formed exactly first).
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    if k < 1:
        raise ValueError(f"inner radius must be >= 1, got {k}")
    if n == 1:
        return 2 * c + 2
    return math.ceil(unit_ball_volume(n) * ((k + c) ** n - (k - 1) ** n))


@dataclass(frozen=True)
class HollowShell:
    """Lattice points at Euclidean distance in (k-1, k+c] from the origin."""

    dim: int
    power: int
    inner_k: int

    def __post_init__(self):
        if self.dim < 1 or self.power < 1 or self.inner_k < 1:
            raise ValueError(f"invalid shell {self}")

    def turns(self) -> int:
        return shell_turns(self.dim, self.power, self.inner_k)

    def contains(self, x: Sequence[int]) -> bool:
        s = sum(int(v) * int(v) for v in x)
        return (self.inner_k - 1) ** 2 < s <= (self.inner_k + self.power) ** 2

    def encloses(self, x: Sequence[int]) -> bool:
        """True if ``x`` lies in the region the cage is meant to trap."""
        return sum(int(v) * int(v) for v in x) <= self.inner_k**2

    def exact_size(self) -> int:
        """Exact lattice count of the shell; for study only, never a turn budget."""
        outer = count_ball_exact(self.dim, self.inner_k + self.power)
        inner = count_ball_exact(self.dim, self.inner_k - 1)
        return outer - inner
