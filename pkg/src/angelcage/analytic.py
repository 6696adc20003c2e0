"""Normal-approximation caging probabilities for the Gauss's circle strategy.

After N moves each coordinate of the angel is approximately Normal(0, sigma^2)
with sigma^2 = N (c^2 + c) / 3, independently across axes, so the caging
probability is the mass of an isotropic Gaussian inside the ball of radius k.
That mass has closed forms by parity of the dimension, which are evaluated
here and cross-checked against a direct radial quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from angelcage.lattice import shell_turns

METHODS = (
    "exact-1d-lower",
    "gaussian-2d",
    "series-even",
    "series-odd",
    "quadrature-oracle",
)

# past this many terms the odd series is declared divergent (cannot happen for sigma > 0)
MAX_SERIES_TERMS = 10**6
SERIES_RTOL = 1e-15
TERM_FLOOR = 1e-300
# clamp slack tolerated before a probability is reported as broken
CLAMP_SLACK = 1e-12


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CagePlan:
    """Everything the devil commits to before the game starts."""

    dim: int
    power: int
    inner_k: int
    turns: int
    sigma_sq: float


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"probability out of range: {self.value}")

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class Bounds3D:
    lower: float
    upper: float


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def _clamp(p: float) -> float:
    if p < -CLAMP_SLACK or p > 1.0 + CLAMP_SLACK:
        raise ArithmeticError(f"probability {p!r} outside [0, 1] beyond round-off")
    return min(max(p, 0.0), 1.0)


def per_axis_variance(c: int) -> float:
    return (c * c + c) / 3


def make_plan(n: int, c: int, k: int) -> CagePlan:
    turns = shell_turns(n, c, k)
    return CagePlan(n, c, k, turns, turns * per_axis_variance(c))


def cage_prob_1d_lower(c: int, k: float) -> ProbabilityEstimate:
    """Lower bound sqrt(1 - exp(-3k^2 / (4c(c+1)^2))) on the 1-D caging chance."""
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    if k < 0:
        raise ValueError(f"inner radius must be >= 0, got {k}")
    if math.isinf(k):
        return ProbabilityEstimate(1.0, "exact-1d-lower")
    x = 3 * k * k / (4 * c * (c + 1) ** 2)
    return ProbabilityEstimate(math.sqrt(-math.expm1(-x)), "exact-1d-lower")


def threshold_k_1d(c: int, eps: float) -> int:
    """Smallest integer k with k >= sqrt(-ln(eps(2-eps)) * 4c(c+1)^2 / 3), at least 1."""
    _check_eps(eps)
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    bound = math.sqrt(-math.log(eps * (2 - eps)) * 4 * c * (c + 1) ** 2 / 3)
    return max(1, math.ceil(bound))


def sigma_sq_2d(c: int, k: float) -> float:
    """Per-axis variance pi c (c+1)^2 (2k+c-1) / 3 with the unrounded turn count."""
    return math.pi * c * (c + 1) ** 2 * (2 * k + c - 1) / 3


def cage_prob_2d(c: int, k: float) -> ProbabilityEstimate:
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    if k < 1:
        raise ValueError(f"inner radius must be >= 1, got {k}")
    if math.isinf(k):
        return ProbabilityEstimate(1.0, "gaussian-2d")
    p = -math.expm1(-k * k / (2 * sigma_sq_2d(c, k)))
    return ProbabilityEstimate(_clamp(p), "gaussian-2d")


def threshold_k_2d(c: int, eps: float) -> int:
    """Inner radius that makes the planar caging chance exceed 1 - eps.

    With A = -2 ln(eps) pi c (c+1)^2 / 3 the condition exp(-k^2/2sigma^2) <= eps
    becomes k^2 >= A (2k + c - 1).  The positive root r of the equality is
    A + sqrt(A^2 + A(c-1)); the published radii are ceil(r) + 1.
    """
    _check_eps(eps)
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    a = -2 * math.log(eps) * math.pi * c * (c + 1) ** 2 / 3
    root = a + math.sqrt(a * a + a * (c - 1))
    return math.ceil(root) + 1


def double_factorial(j: int) -> int:
    if j < -1:
        raise ValueError(f"double factorial undefined for {j}")
    return math.prod(range(j, 0, -2))


def log_double_factorial(j: int) -> float:
    if j <= 20:
        return math.log(double_factorial(j))
    if j % 2 == 0:
        h = j // 2
        return h * math.log(2) + math.lgamma(h + 1)
    return (j + 1) / 2 * math.log(2) + math.lgamma(j / 2 + 1) - 0.5 * math.log(math.pi)


def _plan_sigma_sq(n: int, c: int, k: int, sigma_sq: float | None) -> float:
    if sigma_sq is None:
        return make_plan(n, c, k).sigma_sq
    if sigma_sq <= 0:
        raise ValueError(f"sigma_sq must be > 0, got {sigma_sq}")
    return sigma_sq


def even_series(n: int, sigma_sq: float, k: float) -> float:
    """1 - exp(-x) sum_{d < n/2} x^d / d!  with x = k^2 / (2 sigma^2).

    When the result is small the subtraction loses every digit, so the same
    quantity is taken from the complementary tail exp(-x) sum_{d >= n/2} x^d/d!.
    """
    half = n // 2
    x = k * k / (2 * sigma_sq)
    if x == 0:
        return 0.0
    if half == 1:
        return -math.expm1(-x)
    if x < half:
        log_first = half * math.log(x) - math.lgamma(half + 1) - x
        term = math.exp(log_first)
        total = 0.0
        d = half
        while term > TERM_FLOOR and term > SERIES_RTOL * total:
            total += term
            d += 1
            term *= x / d
        return total
    head = 0.0
    term = 1.0
    for d in range(half):
        head += term
        term *= x / (d + 1)
    return 1.0 - math.exp(-x) * head


def odd_series(n: int, sigma_sq: float, k: float) -> float:
    """sqrt(2/pi) exp(-k^2/2sigma^2) sum_{j=n,n+2,...} (k/sigma)^j / j!!.

    Past u^2 = n the sum is not small, so the same quantity is taken from the
    finite form erf(u/sqrt2) - sqrt(2/pi) exp(-u^2/2) sum_{j<n} u^j / j!!,
    which avoids the rounding drift of thousands of tail terms.
    """
    u = k / math.sqrt(sigma_sq)
    if u == 0:
        return 0.0
    u2 = u * u
    if u2 >= n:
        head = 0.0
        term = u
        for j in range(1, n, 2):
            head += term
            term *= u2 / (j + 2)
        return math.erf(u / math.sqrt(2)) - math.sqrt(2 / math.pi) * math.exp(-u2 / 2) * head
    log_u2 = math.log(u2)
    # log-space terms: the leading factor exp(-u^2/2) underflows when u is large
    log_term = n * math.log(u) - log_double_factorial(n) - u2 / 2
    total = 0.0
    j = n
    for _ in range(MAX_SERIES_TERMS):
        term = math.exp(log_term)
        total += term
        j += 2
        log_term += log_u2 - math.log(j)
        past_peak = u2 < j
        if past_peak and (log_term < math.log(TERM_FLOOR) or math.exp(log_term) < SERIES_RTOL * total):
            return math.sqrt(2 / math.pi) * total
    raise ConvergenceError(
        f"odd series did not converge after {MAX_SERIES_TERMS} terms (partial {total})"
    )


def cage_prob_even(
    n: int, c: int, k: int, sigma_sq: float | None = None
) -> ProbabilityEstimate:
    if n < 2 or n % 2:
        raise ValueError(f"even series needs an even dimension >= 2, got {n}")
    s2 = _plan_sigma_sq(n, c, k, sigma_sq)
    return ProbabilityEstimate(_clamp(even_series(n, s2, k)), "series-even")


def cage_prob_odd(
    n: int, c: int, k: int, sigma_sq: float | None = None
) -> ProbabilityEstimate:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"odd series needs an odd dimension, got {n}")
    s2 = _plan_sigma_sq(n, c, k, sigma_sq)
    return ProbabilityEstimate(_clamp(odd_series(n, s2, k)), "series-odd")


def cage_prob(n: int, c: int, k: int, sigma_sq: float | None = None) -> ProbabilityEstimate:
    """Series caging probability for any dimension, dispatching on parity."""
    if n % 2:
        return cage_prob_odd(n, c, k, sigma_sq)
    return cage_prob_even(n, c, k, sigma_sq)


def bounds_3d(c: int) -> Bounds3D:
    if c < 1:
        raise ValueError(f"power must be >= 1, got {c}")
    q = c * (c + 1) ** 2
    lower = (
        math.sqrt(2) / math.sqrt(math.pi)
        * math.exp(-3 / (8 * math.pi * q))
        * (1 / (12 * math.pi * q)) ** 1.5
    )
    upper = (
        math.exp(-9 / (8 * math.pi * c * (c + 1) ** 4))
        * math.sqrt(6) / (12 * (c + 1) * math.pi * math.sqrt(c))
        * (3 / (2 * math.pi * q - 3))
    )
    return Bounds3D(lower, upper)


def _radial_density(u: float, n: int) -> float:
    return u ** (n - 1) * math.exp(-u * u / 2)


def radial_quadrature_oracle(
    n: int, sigma_sq: float, k: float, tol: float = 1e-10
) -> ProbabilityEstimate:
    """Mass of Normal(0, sigma^2 I_n) inside radius k by adaptive quadrature.

    Integrates r^(n-1) exp(-r^2/2sigma^2) over [0, k] and divides by the same
    integral over [0, inf); no Gamma function or closed form is involved.
    Works in the scaled variable u = r / sigma.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if sigma_sq <= 0:
        raise ValueError(f"sigma_sq must be > 0, got {sigma_sq}")
    if k < 0:
        raise ValueError(f"radius must be >= 0, got {k}")
    opts = dict(args=(n,), epsabs=tol * 1e-3, epsrel=1e-13, limit=500)
    total, total_err = integrate.quad(_radial_density, 0, np.inf, **opts)
    if math.isinf(k):
        inside, inside_err = total, total_err
    else:
        u = k / math.sqrt(sigma_sq)
        # split at the mode so the peak is never straddled blindly
        mode = math.sqrt(n - 1)
        if u <= mode or mode == 0:
            inside, inside_err = integrate.quad(_radial_density, 0, u, **opts)
        else:
            a, ea = integrate.quad(_radial_density, 0, mode, **opts)
            b, eb = integrate.quad(_radial_density, mode, u, **opts)
            inside, inside_err = a + b, ea + eb
    err = inside_err / total + inside * total_err / total**2
    if err > tol:
        raise ConvergenceError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}")
    return ProbabilityEstimate(_clamp(inside / total), "quadrature-oracle")


def asymptotic_vanish_check(n: int, c: int, k_list) -> list[float]:
    """Series caging probabilities along ``k_list`` for a dimension of at least 4."""
    if n < 4:
        raise ValueError(f"vanishing regime needs n >= 4, got {n}")
    return [cage_prob(n, c, k).value for k in k_list]
