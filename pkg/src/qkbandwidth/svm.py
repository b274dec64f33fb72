"""Binary C-SVM on precomputed kernels, solved by SMO.

The solver minimises the dual ``0.5 a^T Q a - sum(a)`` with
``Q_ij = y_i y_j K_ij`` subject to ``0 <= a_i <= C`` and ``y^T a = 0``,
using second-order working-set selection. Indefinite kernels (truncated
polynomials) are accepted: non-positive pair curvature is replaced by
``TAU``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import ValidationError

TAU = 1e-12
DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 100_000


@dataclass
class SvmModel:
    dual_coef: np.ndarray  # alpha_i * y_i over support vectors
    bias: float
    support: np.ndarray
    C: float
    alpha: np.ndarray
    n_iter: int
    converged: bool
    objective: float
    kkt_gap: float

    @property
    def n_train(self) -> int:
        return self.alpha.shape[0]


def as_labels(y) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValidationError("labels must be -1 or +1")
    if np.unique(y).size != 2:
        raise ValidationError("labels must contain both classes")
    return y


def dual_objective(alpha, K, y) -> float:
    ay = alpha * y
    return float(0.5 * ay @ K @ ay - alpha.sum())


def svm_fit(K, y, C: float, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SvmModel:
    """Fit on a symmetric train Gram matrix ``K`` with labels in ``{-1, +1}``."""
    K = np.asarray(getattr(K, "values", K), dtype=float)
    y = as_labels(y)
    n = y.shape[0]
    if K.shape != (n, n):
        raise ValidationError(f"Gram shape {K.shape} does not match {n} labels")
    if not C > 0:
        raise ValidationError(f"C must be > 0, got {C}")

    Q = np.ascontiguousarray(K * np.outer(y, y))
    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient Q a - 1
    it, gap, converged = _smo(Q, y, float(C), float(tol), int(max_iter), alpha, G)
    gap = float(gap)

    bias = _bias(alpha, G, y, C)
    sv = np.flatnonzero(alpha > 0)
    return SvmModel(
        dual_coef=alpha[sv] * y[sv],
        bias=bias,
        support=sv,
        C=float(C),
        alpha=alpha,
        n_iter=it,
        converged=converged,
        objective=dual_objective(alpha, K, y),
        kkt_gap=float(gap),
    )


def _smo(Q, y, C, tol, max_iter, alpha, G):
    """SMO iterations in place on ``alpha`` and ``G``; returns ``(n_iter, gap, converged)``."""
    n = y.shape[0]
    it = 0
    gap = np.inf
    while it < max_iter:
        # i: most violating index of the "up" set
        i = -1
        m_up = -np.inf
        for t in range(n):
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                v = -y[t] * G[t]
                if v > m_up:
                    m_up = v
                    i = t
        # j: second-order choice among violating "low" indices
        j = -1
        m_low = np.inf
        best = np.inf
        for t in range(n):
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                v = -y[t] * G[t]
                if v < m_low:
                    m_low = v
                if i >= 0:
                    b = m_up - v
                    if b > 0:
                        a = Q[i, i] + Q[t, t] - 2.0 * y[i] * y[t] * Q[i, t]
                        if a <= 0:
                            a = TAU
                        score = -(b * b) / a
                        if score < best:
                            best = score
                            j = t
        if i < 0 or j < 0:
            return it, 0.0, True
        gap = m_up - m_low
        if gap < tol:
            return it, gap, True

        old_i = alpha[i]
        old_j = alpha[j]
        if y[i] != y[j]:
            quad = Q[i, i] + Q[j, j] + 2.0 * Q[i, j]
            if quad <= 0:
                quad = TAU
            delta = (-G[i] - G[j]) / quad
            diff = old_i - old_j
            ai = old_i + delta
            aj = old_j + delta
            if diff > 0:
                if aj < 0:
                    aj = 0.0
                    ai = diff
            elif ai < 0:
                ai = 0.0
                aj = -diff
            if diff > 0:
                if ai > C:
                    ai = C
                    aj = C - diff
            elif aj > C:
                aj = C
                ai = C + diff
        else:
            quad = Q[i, i] + Q[j, j] - 2.0 * Q[i, j]
            if quad <= 0:
                quad = TAU
            delta = (G[i] - G[j]) / quad
            total = old_i + old_j
            ai = old_i - delta
            aj = old_j + delta
            if total > C:
                if ai > C:
                    ai = C
                    aj = total - C
            elif aj < 0:
                aj = 0.0
                ai = total
            if total > C:
                if aj > C:
                    aj = C
                    ai = total - C
            elif ai < 0:
                ai = 0.0
                aj = total
        alpha[i] = ai
        alpha[j] = aj
        di = ai - old_i
        dj = aj - old_j
        for t in range(n):
            G[t] += Q[i, t] * di + Q[j, t] * dj
        it += 1
    return it, gap, False


try:
    import numba

    _smo = numba.njit(cache=True)(_smo)
except ImportError:  # pragma: no cover - numba is optional
    pass


def _bias(alpha, G, y, C):
    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        r = yG[free].mean()
    else:
        at_ub = alpha >= C
        at_lb = alpha <= 0
        # bounds on r from the KKT conditions at the box edges
        ub_mask = (at_ub & (y < 0)) | (at_lb & (y > 0))
        lb_mask = (at_ub & (y > 0)) | (at_lb & (y < 0))
        ub = yG[ub_mask].min() if ub_mask.any() else np.inf
        lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
        r = 0.5 * (ub + lb) if np.isfinite(ub) and np.isfinite(lb) else (ub if np.isfinite(ub) else lb)
    return float(-r)


def decision_values(model: SvmModel, cross_gram) -> np.ndarray:
    """``f(x) = sum_i alpha_i y_i k(x, x_i) + b`` for each row of ``(n_test, n_train)``."""
    Kx = np.asarray(cross_gram, dtype=float)
    if Kx.ndim != 2 or Kx.shape[1] != model.n_train:
        if Kx.size == 0 and Kx.ndim < 2:
            return np.empty(0)
        raise ValidationError(f"cross Gram has shape {Kx.shape}, expected (*, {model.n_train})")
    return Kx[:, model.support] @ model.dual_coef + model.bias


def roc_auc(scores, labels) -> float:
    """Area under the ROC curve from ranks; tied scores count one half."""
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise ValidationError(f"{s.shape[0]} scores for {y.shape[0]} labels")
    pos = y > 0
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("ROC-AUC needs both classes")
    ranks = rankdata(s)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))
