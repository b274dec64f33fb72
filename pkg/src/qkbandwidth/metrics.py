"""Diagnostics of Gram matrices.

Variance of the entries, the spectrum of ``K/N``, expressivity computed
from a fidelity Gram matrix, the geometric difference between two kernels
and their relative Frobenius distance.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .errors import RegularizationError, ValidationError
from .kernels import GramMatrix
from .linalg import PsdFactor, check_symmetric, eigvals_symmetric

SINGULAR_RTOL = 1e-12


class VarianceConvention(str, Enum):
    OFF_DIAGONAL = "OffDiagonal"
    POPULATION_ALL_ENTRIES = "PopulationAllEntries"


def _values(K) -> np.ndarray:
    return np.asarray(K.values if isinstance(K, GramMatrix) else K, dtype=float)


def gram_variance(K, convention=VarianceConvention.POPULATION_ALL_ENTRIES) -> float:
    """Spread of the Gram entries around their overall mean ``mu``.

    ``PopulationAllEntries`` is ``mean((k_ij - mu)**2)`` over all ``N**2``
    entries. ``OffDiagonal`` is ``(1/N) * sum_{i != j} (k_ij - mu)**2``
    with the same ``mu``; note its ``1/N`` prefactor grows with ``N``.
    """
    K = _values(K)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] < 2:
        raise ValidationError(f"need a square Gram matrix with N >= 2, got shape {K.shape}")
    convention = VarianceConvention(convention)
    n = K.shape[0]
    dev = K - K.mean()
    if convention is VarianceConvention.POPULATION_ALL_ENTRIES:
        return float(np.mean(dev * dev))
    sq = dev * dev
    return float((sq.sum() - np.trace(sq)) / n)


def spectrum(K, method: str = "auto") -> np.ndarray:
    """Eigenvalues of ``K / N`` in descending order."""
    K = check_symmetric(_values(K))
    return eigvals_symmetric(K / K.shape[0], method)


def h_constant(n_qubits: int) -> float:
    """Haar second moment ``2! (D-1)! / (D+1)!`` with ``D = 2**n``."""
    if n_qubits < 1:
        raise ValidationError(f"n_qubits must be >= 1, got {n_qubits}")
    D = 2.0**n_qubits
    return 2.0 / (D * (D + 1.0))


def mean_sq(K) -> float:
    K = _values(K)
    return float(np.mean(K * K))


def expressivity_sq(K_fqk, n_qubits: int) -> float:
    """Squared expressivity: mean of the squared fidelities minus the Haar term."""
    return mean_sq(K_fqk) - h_constant(n_qubits)


def trace_normalize(K) -> np.ndarray:
    K = _values(K)
    tr = np.trace(K)
    if not tr > 0:
        raise ValidationError(f"cannot trace-normalize a matrix with trace {tr}")
    return K * (K.shape[0] / tr)


def geometric_difference(K_c, K_q, lam: float = 0.0, method: str = "auto") -> float:
    """``g(K_c, K_q)`` after rescaling both matrices to trace ``N``.

    Square roots and the regularised inverse square use the eigenvalues of
    each matrix clamped at zero.
    """
    return geometric_differences(K_c, K_q, [lam], method)[0]


def geometric_differences(K_c, K_q, lams, method: str = "auto") -> list[float]:
    """:func:`geometric_difference` for several regularisations, factoring once."""
    Kc = check_symmetric(trace_normalize(K_c))
    Kq = check_symmetric(trace_normalize(K_q))
    if Kc.shape != Kq.shape:
        raise ValidationError(f"shape mismatch: {Kc.shape} vs {Kq.shape}")
    fq = PsdFactor.of(Kq, method)
    eta = fq.eigenvalues
    # sqrt(Kc) sqrt(Kq) (Kq + lam)^-2 sqrt(Kq) sqrt(Kc) = B diag(f) B^T, B = sqrt(Kc) Q
    B = PsdFactor.of(Kc, method).sqrt() @ fq.eigenvectors
    out = []
    for lam in lams:
        lam = float(lam)
        if lam < 0:
            raise ValidationError(f"lambda must be >= 0, got {lam}")
        if lam == 0.0 and np.min(eta) <= SINGULAR_RTOL * max(np.max(eta), 1.0):
            raise RegularizationError("K_q is singular; pass a positive lambda")
        f = eta / (eta + lam) ** 2
        Bs = B * np.sqrt(f)
        M = Bs @ Bs.T
        top = float(eigvals_symmetric(0.5 * (M + M.T), method)[0])
        out.append(float(np.sqrt(max(top, 0.0))))
    return out


def frobenius_distance(K_c, K_q) -> float:
    Kc, Kq = _values(K_c), _values(K_q)
    if Kc.shape != Kq.shape:
        raise ValidationError(f"shape mismatch: {Kc.shape} vs {Kq.shape}")
    denom = np.linalg.norm(Kq)
    if denom == 0:
        raise ValidationError("reference Gram matrix is all zeros")
    return float(np.linalg.norm(Kc - Kq) / denom)


@dataclass
class MetricReport:
    variance: float
    variance_offdiag: float
    mean: float
    eigenvalues: np.ndarray = field(repr=False)
    eta_max: float
    mean_sq: float
    expressivity_sq: float | None
    n_samples: int

    def to_row(self, top_k: int = 0) -> dict:
        """Flat dict for CSV/JSON output; optionally keeps the ``top_k`` eigenvalues."""
        row = asdict(self)
        eig = row.pop("eigenvalues")
        for i in range(min(top_k, len(eig))):
            row[f"eig_{i}"] = float(eig[i])
        return row


def metric_report(K, n_qubits: int | None = None, fidelity_kernel: bool = False, method: str = "auto") -> MetricReport:
    """All single-matrix diagnostics; expressivity only for fidelity kernels."""
    K = _values(K)
    eig = spectrum(K, method)
    return MetricReport(
        variance=gram_variance(K, VarianceConvention.POPULATION_ALL_ENTRIES),
        variance_offdiag=gram_variance(K, VarianceConvention.OFF_DIAGONAL),
        mean=float(K.mean()),
        eigenvalues=eig,
        eta_max=float(eig[0]),
        mean_sq=mean_sq(K),
        expressivity_sq=expressivity_sq(K, n_qubits) if fidelity_kernel and n_qubits else None,
        n_samples=K.shape[0],
    )
