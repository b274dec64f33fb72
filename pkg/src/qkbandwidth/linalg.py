"""Symmetric eigendecomposition and PSD matrix functions.

The in-repo solver is a cyclic Jacobi method with a round-robin pair
ordering: every round rotates ``N/2`` disjoint index pairs at once, so a
round is a handful of vectorised row/column updates instead of ``N/2``
scalar rotations. For matrices larger than ``JACOBI_MAX_DIM`` the default
``method="auto"`` hands over to LAPACK (``numpy.linalg.eigh``); the two
routes are cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

JACOBI_MAX_DIM = 64
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-8


def check_symmetric(A, tol: float = SYMMETRY_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix contains non-finite values")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > tol * scale:
        raise ValidationError(f"matrix is not symmetric (max |A - A^T| = {np.max(np.abs(A - A.T)):.3e})")
    return A


def _round_robin(n):
    """Rounds of disjoint pairs covering every ``(p, q)`` once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(A):
    off = A - np.diag(np.diag(A))
    return np.sqrt(np.sum(off * off))


def jacobi_eigh(A, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Stops once the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F`` or after ``max_sweeps`` sweeps.
    """
    A = check_symmetric(A).copy()
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    if n == 0:
        return np.empty(0), V
    scale = np.linalg.norm(A)
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        if _off_norm(A) <= tol * scale:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            app, aqq = A[P, P], A[Q, Q]
            tau = (aqq - app) / (2.0 * apq)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # columns: A <- A J
            Ap, Aq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = c * Ap - s * Aq
            A[:, Q] = s * Ap + c * Aq
            # rows: A <- J^T A
            Ap, Aq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * Ap - s[:, None] * Aq
            A[Q, :] = s[:, None] * Ap + c[:, None] * Aq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            Vp, Vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = c * Vp - s * Vq
            V[:, Q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def eigh_symmetric(A, method: str = "auto"):
    """Descending eigenpairs of a symmetric matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_DIM``).
    """
    A = check_symmetric(A)
    if method == "auto":
        method = "jacobi" if A.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        return jacobi_eigh(A)
    if method == "lapack":
        w, V = np.linalg.eigh(0.5 * (A + A.T))
        return w[::-1].copy(), V[:, ::-1].copy()
    raise ValidationError(f"unknown eigensolver {method!r}")


def eigvals_symmetric(A, method: str = "auto") -> np.ndarray:
    A = check_symmetric(A)
    if method == "auto" and A.shape[0] > JACOBI_MAX_DIM:
        return np.linalg.eigvalsh(0.5 * (A + A.T))[::-1].copy()
    return eigh_symmetric(A, method)[0]


@dataclass(frozen=True, eq=False)
class PsdFactor:
    """``K = Q diag(eigenvalues) Q^T`` with negative eigenvalues clamped to zero."""

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray
    raw_eigenvalues: np.ndarray

    @classmethod
    def of(cls, K, method: str = "auto") -> "PsdFactor":
        w, V = eigh_symmetric(K, method)
        return cls(V, np.clip(w, 0.0, None), w)

    def apply(self, fn) -> np.ndarray:
        """Matrix function ``Q diag(fn(eigenvalues)) Q^T``."""
        f = fn(self.eigenvalues)
        return (self.eigenvectors * f) @ self.eigenvectors.T

    def sqrt(self) -> np.ndarray:
        return self.apply(np.sqrt)

    def reconstruct(self) -> np.ndarray:
        return self.apply(lambda w: w)
