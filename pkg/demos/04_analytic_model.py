"""Closed-form moments of the separable-RX kernel next to sampled Gram matrices."""

import numpy as np

from qkbandwidth.analytic import (
    AnalyticParams,
    eta_max_analytic,
    monte_carlo_check,
    uniform_sample,
    var_limit_large_c,
    var_limit_small_c,
    var_uniform,
    variance_peak_c,
)

n, L, N = 2, 2, 720
X = uniform_sample(N, n, 0)
print(f"{'c':>8} {'var':>10} {'var MC':>10} {'small-c law':>11} {'eta':>7} {'eta MC':>7}")
for c in np.logspace(-3, 1.5, 10):
    p = AnalyticParams(n, L, c)
    var, eta, _ = monte_carlo_check(p, N, X=X)
    print(f"{c:8.4f} {var_uniform(p):10.3e} {var:10.3e} {var_limit_small_c(p):11.3e} "
          f"{eta_max_analytic(p):7.4f} {eta:7.4f}")
print(f"large-c variance limit {var_limit_large_c(n):.5f}")
for L in (1, 2, 4, 8):
    c_p = variance_peak_c(n, L)
    print(f"L={L}: variance peaks at c={c_p:.6f}, c*L={c_p * L:.15f}")
