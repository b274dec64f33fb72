"""Closed-form model of the separable-RX fidelity kernel on uniform data.

Data ``x_ij`` are iid uniform on ``[-pi, pi]`` and rescaled by the
bandwidth ``c``; the RX encoding with ``L`` layers enters only through the
product ``a = L * c``. With ``q = sinc(pi a)**2`` and ``r = sinc(2 pi a)**2``
(``sinc(z) = sin(z)/z``) the one-qubit moments are

    E[k]   = 1/2 + q/2
    E[k^2] = 3/8 + q/2 + r/8

which expand to the usual cosine forms, e.g.
``E[k] = 1/2 - cos(2 pi a)/(4 pi^2 a^2) + 1/(4 pi^2 a^2)``.
Evaluating through ``1 - sinc**2`` (by series near zero) keeps double
precision when the variance is as small as ``1e-12``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .kernels import sep_rx_gram_analytic
from .metrics import VarianceConvention, expressivity_sq, gram_variance, spectrum

SINC_SERIES_BELOW = 1e-4
_SERIES_BELOW = 0.5
SMALL_C_ALPHA = 7.0 * math.pi**4 / 180.0
LARGE_C_A, LARGE_C_B, LARGE_C_D = 48.0, 32.0, 128.0


@dataclass(frozen=True)
class AnalyticParams:
    n: int
    L: int
    c: float

    def __post_init__(self):
        if self.n < 1 or self.L < 1:
            raise ValidationError(f"need n >= 1 and L >= 1, got n={self.n}, L={self.L}")
        if not self.c > 0:
            raise ValidationError(f"bandwidth must be > 0, got {self.c}")

    @property
    def lc(self) -> float:
        return self.L * self.c


def sinc(z):
    """``sin(z)/z`` with the removable singularity filled by its Taylor series."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < SINC_SERIES_BELOW
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1.0 - z2 / 6.0 + z2 * z2 / 120.0, np.sin(safe) / safe)


def one_minus_sinc_sq(z):
    """``1 - sinc(z)**2`` without cancellation for small ``z``."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SERIES_BELOW
    z2 = z * z
    # 1 - sinc^2 = sum_{k>=2} (-1)^k 2^(2k-1) z^(2k-2) / (2k)!
    series = np.zeros_like(z)
    for k in range(9, 1, -1):
        coef = (-1) ** k * 2.0 ** (2 * k - 1) / math.factorial(2 * k)
        series = series * z2 + coef
    series = series * z2
    direct = 1.0 - sinc(z) ** 2
    return np.where(small, series, direct)


def _moment_deficits(lc):
    u = one_minus_sinc_sq(np.pi * lc)  # 1 - q
    w = one_minus_sinc_sq(2.0 * np.pi * lc)  # 1 - r
    return u, w


def var_uniform(params: AnalyticParams) -> float:
    """``E[k^2]^n - E[k]^(2n)`` for the n-qubit product kernel."""
    u, w = _moment_deficits(params.lc)
    log_sq = np.log1p(-u / 2.0 - w / 8.0)  # log E[k^2]
    log_mean2 = 2.0 * np.log1p(-u / 2.0)  # log E[k]^2
    n = params.n
    return float(np.exp(n * log_mean2) * np.expm1(n * (log_sq - log_mean2)))


def mean_uniform(params: AnalyticParams) -> float:
    u, _ = _moment_deficits(params.lc)
    return float((1.0 - u / 2.0) ** params.n)


def var_limit_small_c(params: AnalyticParams) -> float:
    return SMALL_C_ALPHA * params.n * params.lc**4


def var_limit_large_c(n: int) -> float:
    return (LARGE_C_A**n - LARGE_C_B**n) / LARGE_C_D**n


def operator_eigenvalues(lc: float) -> tuple[float, float, float, float]:
    """Spectrum of the one-qubit kernel integral operator under uniform data."""
    if not lc > 0:
        raise ValidationError(f"L*c must be > 0, got {lc}")
    s2 = float(sinc(2.0 * np.pi * lc))
    s1 = float(sinc(np.pi * lc))
    root = math.sqrt((1.0 - s2) ** 2 + 16.0 * s1 * s1)
    lam1 = 3.0 / 8.0 + s2 / 8.0 + root / 8.0
    lam2 = 0.25 - 0.25 * s2
    lam3 = 3.0 / 8.0 + s2 / 8.0 - root / 8.0
    return lam1, lam2, lam3, 0.0


def eta_max_analytic(params: AnalyticParams) -> float:
    return operator_eigenvalues(params.lc)[0] ** params.n


def eta_max_limits(n: int) -> tuple[float, float]:
    """``(c -> 0, c -> inf)`` limits of the largest eigenvalue."""
    return 1.0, 0.5**n


def expressivity_expectation(params: AnalyticParams) -> float:
    """``E[k^2]`` over independent uniform pairs."""
    u, w = _moment_deficits(params.lc)
    return float(np.exp(params.n * np.log1p(-u / 2.0 - w / 8.0)))


def expressivity_limits(n: int, h: float) -> tuple[float, float]:
    """``(c -> 0, c -> inf)`` limits of ``E[k^2] - h``."""
    return 1.0 - h, 0.375**n - h


def argmax_variance_c(n: int, L: int, c_grid) -> float:
    """Grid bandwidth with the largest analytic variance."""
    c_grid = np.asarray(c_grid, dtype=float)
    vals = [var_uniform(AnalyticParams(n, L, c)) for c in c_grid]
    return float(c_grid[int(np.argmax(vals))])


def peak_lc(n: int) -> float:
    """Continuous maximiser of the variance in ``a = L c``."""
    return variance_peak_c(n, 1)


def _dsinc(z):
    """Derivative of :func:`sinc`."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < SINC_SERIES_BELOW
    safe = np.where(small, 1.0, z)
    return np.where(small, -z / 3.0 + z**3 / 30.0, (np.cos(safe) - np.sin(safe) / safe) / safe)


def variance_derivative(params: AnalyticParams) -> float:
    """``d var_uniform / d c`` in closed form."""
    n, a = params.n, params.lc
    s1, s2 = float(sinc(np.pi * a)), float(sinc(2.0 * np.pi * a))
    dq = 2.0 * np.pi * s1 * float(_dsinc(np.pi * a))
    dr = 4.0 * np.pi * s2 * float(_dsinc(2.0 * np.pi * a))
    e1 = 0.5 + 0.5 * s1 * s1
    e2 = 0.375 + 0.5 * s1 * s1 + 0.125 * s2 * s2
    d_da = n * e2 ** (n - 1) * (0.5 * dq + 0.125 * dr) - n * e1 ** (2 * n - 1) * dq
    return params.L * d_da


def variance_peak_c(n: int, L: int) -> float:
    """Bandwidth maximising the analytic variance, as the root of its derivative.

    The root is bracketed from a coarse scan of ``a = L c`` and polished by
    Brent's method to a relative tolerance of a few ulps.
    """
    from scipy.optimize import brentq

    def f(c):
        return variance_derivative(AnalyticParams(n, L, c))

    grid = np.logspace(-3, 1.5, 400) / L
    vals = np.array([var_uniform(AnalyticParams(n, L, c)) for c in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    return float(brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200))


def uniform_sample(N: int, n: int, rng_seed: int) -> np.ndarray:
    rng = np.random.default_rng(rng_seed)
    return rng.uniform(-np.pi, np.pi, size=(N, n))


def monte_carlo_check(params: AnalyticParams, N: int, rng_seed: int = 0, X=None) -> tuple[float, float, float]:
    """Discrete ``(variance, eta_max, expressivity_sq)`` of a sampled separable-RX Gram.

    ``X`` overrides the uniform sample (raw, before bandwidth scaling).
    """
    if N < 2:
        raise ValidationError(f"need N >= 2, got {N}")
    if X is None:
        X = uniform_sample(N, params.n, rng_seed)
    K = sep_rx_gram_analytic(params.c * np.asarray(X), params.L)
    var = gram_variance(K, VarianceConvention.POPULATION_ALL_ENTRIES)
    eta = float(spectrum(K)[0])
    return var, eta, expressivity_sq(K, params.n)
