"""Statistical kernels for sequential selection procedures.

Three groups of functionality live here:

* ``SampleStats`` — a single-pass (Welford) accumulator for the mean and
  variance of simulation outcomes, with an exact pairwise merge so batches
  evaluated in parallel can be reduced deterministically.
* Classical distribution functions (standard normal CDF, chi-square PDF,
  Student-t CDF) implemented on top of ``math.erfc`` / ``math.lgamma`` and a
  regularized incomplete beta, so they carry no heavyweight dependencies and
  can be cross-checked against independent references in the test suite.
* The two selection-constant equations used by indifference-zone sampling:
  the classic two-stage double integral and its pairwise sequential variant.
  Both reduce to finding the constant ``h`` such that

      integral over (x, y) of  Phi(h / sqrt(a/x + b/y)) * f_a(x) * f_b(y)

  (the inner integral raised to ``k - 1`` for the two-stage form) equals a
  prescribed confidence level, where ``f_n`` is the chi-square density with
  ``n`` degrees of freedom.  The integrand is smooth, so fixed-order
  Gauss-Legendre quadrature on a truncated domain plus bisection on ``h``
  is deterministic, cacheable and plenty fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.special import ndtr

__all__ = [
    "InsufficientSamples",
    "SolverError",
    "SampleStats",
    "IntegralSolverConfig",
    "normal_cdf",
    "chi2_pdf",
    "student_t_cdf",
    "rinott_h",
    "yoon_h1",
    "clear_h1_cache",
]

_SQRT2 = math.sqrt(2.0)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class InsufficientSamples(ValueError):
    """A variance was requested from fewer than two samples."""


class SolverError(RuntimeError):
    """The integral-equation solver could not meet its tolerance."""


# ---------------------------------------------------------------------------
# Streaming sample statistics
# ---------------------------------------------------------------------------


@dataclass
class SampleStats:
    """Running count, mean and sum of squared deviations of a sample stream.

    ``m2`` is the running sum of squared deviations from the mean, so the
    unbiased sample variance is ``m2 / (n - 1)``.  Updates use Welford's
    recurrence, which stays stable for long streams; bulk updates compute the
    batch moments vectorized and fold them in with the exact two-accumulator
    merge, so ``extend`` is equivalent to repeated ``add`` up to rounding.
    """

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, x: float) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)

    def extend(self, values: Iterable[float]) -> None:
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            return
        batch_mean = float(arr.mean())
        batch_m2 = float(((arr - batch_mean) ** 2).sum())
        self._fold(arr.size, batch_mean, batch_m2)

    def merge(self, other: "SampleStats") -> "SampleStats":
        """Return the accumulator for the concatenation of both streams."""
        out = SampleStats(self.n, self.mean, self.m2)
        out._fold(other.n, other.mean, other.m2)
        return out

    def _fold(self, n: int, mean: float, m2: float) -> None:
        if n == 0:
            return
        if self.n == 0:
            self.n, self.mean, self.m2 = n, mean, m2
            return
        total = self.n + n
        delta = mean - self.mean
        self.mean += delta * n / total
        self.m2 += m2 + delta * delta * (self.n * n / total)
        self.n = total

    def variance(self) -> float:
        if self.n < 2:
            raise InsufficientSamples(
                f"variance undefined for n={self.n}; need at least 2 samples"
            )
        return self.m2 / (self.n - 1)

    def std(self) -> float:
        return math.sqrt(max(self.variance(), 0.0))


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------


def normal_cdf(z: float) -> float:
    """Standard normal CDF, accurate in both tails via ``erfc``."""
    return 0.5 * math.erfc(-z / _SQRT2)


def chi2_pdf(x: float, dof: int) -> float:
    """Chi-square density with ``dof`` degrees of freedom at ``x >= 0``."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if x < 0:
        raise ValueError(f"chi2_pdf domain is x >= 0, got {x}")
    half = 0.5 * dof
    if x == 0.0:
        if dof == 2:
            return 0.5
        return math.inf if dof < 2 else 0.0
    log_pdf = (half - 1.0) * math.log(x) - 0.5 * x - math.lgamma(half) - half * math.log(2.0)
    return math.exp(log_pdf)


def _chi2_pdf_vec(x: np.ndarray, dof: int) -> np.ndarray:
    half = 0.5 * dof
    return np.exp(
        (half - 1.0) * np.log(x) - 0.5 * x - math.lgamma(half) - half * math.log(2.0)
    )


def student_t_cdf(t: float, dof: int) -> float:
    """Student-t CDF with ``dof`` degrees of freedom, via incomplete beta."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    x = dof / (dof + t * t)
    tail = 0.5 * _betainc_reg(0.5 * dof, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def _betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) by Lentz continued fraction."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # Use the symmetry relation on the side where the fraction converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _betacf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 1e-15) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise SolverError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


# Regularized lower incomplete gamma, used for chi-square tail locations.


def _gammainc_lower_reg(a: float, x: float) -> float:
    if x < 0 or a <= 0:
        raise ValueError("gammainc requires a > 0, x >= 0")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        # series representation
        term = 1.0 / a
        total = term
        n = a
        for _ in range(500):
            n += 1.0
            term *= x / n
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    # continued fraction for the upper tail
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    upper = h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    return 1.0 - upper


def _chi2_cdf(x: float, dof: int) -> float:
    return _gammainc_lower_reg(0.5 * dof, 0.5 * x)


@lru_cache(maxsize=None)
def _chi2_upper_quantile(dof: int, tail: float = 1e-12) -> float:
    """The point beyond which the chi-square tail mass is below ``tail``."""
    lo, hi = float(dof), float(dof)
    while 1.0 - _chi2_cdf(hi, dof) > tail:
        hi = hi * 2.0 + 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 1.0 - _chi2_cdf(mid, dof) > tail:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9 * hi:
            break
    return hi


# ---------------------------------------------------------------------------
# Selection-constant integral equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralSolverConfig:
    """Quadrature and root-finding controls for the selection constants.

    ``domain_cap`` of ``None`` truncates each semi-infinite axis at the
    chi-square quantile leaving 1e-12 of tail mass for that axis' degrees of
    freedom; a float forces a common truncation point for both axes.
    """

    quadrature_points: int = 128
    domain_cap: float | None = None
    root_tolerance: float = 1e-6
    max_bisection_steps: int = 100

    def __post_init__(self) -> None:
        if self.quadrature_points < 32:
            raise ValueError("quadrature_points must be >= 32")
        if self.root_tolerance <= 0:
            raise ValueError("root_tolerance must be positive")
        if self.domain_cap is not None and self.domain_cap <= 0:
            raise ValueError("domain_cap must be positive")


DEFAULT_SOLVER_CONFIG = IntegralSolverConfig()


@lru_cache(maxsize=None)
def _chi2_grid(dof: int, points: int, cap: float | None) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0, cap] with chi-square density folded in."""
    upper = cap if cap is not None else _chi2_upper_quantile(dof)
    t, w = np.polynomial.legendre.leggauss(points)
    x = 0.5 * upper * (t + 1.0)
    wx = 0.5 * upper * w * _chi2_pdf_vec(x, dof)
    x.setflags(write=False)
    wx.setflags(write=False)
    return x, wx


def _selection_integral(
    h: float, dof_x: int, dof_y: int, power: int, cfg: IntegralSolverConfig
) -> float:
    """Evaluate the double integral at a candidate constant ``h``.

    ``dof_x`` weights the inner axis, ``dof_y`` the outer one; the inner
    integral is raised to ``power`` before the outer weighting (1 for the
    pairwise sequential form, ``k - 1`` for the two-stage form).
    """
    x, wx = _chi2_grid(dof_x, cfg.quadrature_points, cfg.domain_cap)
    y, wy = _chi2_grid(dof_y, cfg.quadrature_points, cfg.domain_cap)
    scale = np.sqrt(dof_x / x[None, :] + dof_y / y[:, None])
    inner = (wx[None, :] * ndtr(h / scale)).sum(axis=1)
    if power != 1:
        inner = inner**power
    return float((wy * inner).sum())


def _solve_selection_constant(
    target: float, dof_x: int, dof_y: int, power: int, cfg: IntegralSolverConfig
) -> float:
    lo, hi = -20.0, 20.0
    f_lo = _selection_integral(lo, dof_x, dof_y, power, cfg)
    f_hi = _selection_integral(hi, dof_x, dof_y, power, cfg)
    if not (f_lo <= target <= f_hi):
        raise SolverError(
            f"target {target} not bracketed by integral range [{f_lo}, {f_hi}]"
        )
    steps = 0
    while hi - lo > cfg.root_tolerance:
        steps += 1
        if steps > cfg.max_bisection_steps:
            raise SolverError(
                f"no convergence within {cfg.max_bisection_steps} bisection steps"
            )
        mid = 0.5 * (lo + hi)
        if _selection_integral(mid, dof_x, dof_y, power, cfg) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rinott_h(
    k: int,
    n0: int,
    alpha: float,
    cfg: IntegralSolverConfig = DEFAULT_SOLVER_CONFIG,
) -> float:
    """Constant for the two-stage selection rule over ``k`` alternatives.

    Solves for ``h`` such that the two-stage double integral with first-stage
    sample size ``n0`` equals ``1 - alpha``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if n0 < 2:
        raise ValueError("n0 must be >= 2")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return _solve_selection_constant(1.0 - alpha, n0 - 1, n0 - 1, k - 1, cfg)


@lru_cache(maxsize=None)
def _yoon_h1_cached(
    n_i: int, n_b: int, alpha_over: float, cfg: IntegralSolverConfig
) -> float:
    return _solve_selection_constant(1.0 - alpha_over, n_i - 1, n_b - 1, 1, cfg)


def yoon_h1(
    n_i: int,
    n_b: int,
    alpha_over: float,
    cfg: IntegralSolverConfig = DEFAULT_SOLVER_CONFIG,
) -> float:
    """Pairwise sequential selection constant for sample sizes (n_i, n_b).

    Solves the pairwise integral equation at confidence ``1 - alpha_over``.
    Solutions are memoized by ``(n_i, n_b, alpha_over, cfg)`` since the same
    sample-size pairs recur every round of the sequential procedure.
    """
    if n_i < 2 or n_b < 2:
        raise ValueError("sample sizes must be >= 2")
    if not 0.0 < alpha_over < 1.0:
        raise ValueError("alpha_over must lie in (0, 1)")
    return _yoon_h1_cached(n_i, n_b, alpha_over, cfg)


def clear_h1_cache() -> None:
    _yoon_h1_cached.cache_clear()
