"""Quantum and classical kernels on bandwidth-scaled data.

All pointwise ``k_*`` functions take inputs that are already scaled,
``x_tilde = c * x``. :func:`gram` and :func:`cross_gram` take raw data and
apply the bandwidth of the :class:`KernelSpec` themselves.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .circuits import CircuitSpec, build_program, encode_states
from .errors import ValidationError
from .statevector import fidelity, pauli_expectations_1rdm, pauli_expectations_batch, run_program


class KernelKind(str, Enum):
    FQK = "FQK"
    PQK = "PQK"
    RBF = "RBF"
    POLY = "Poly"


QUANTUM_KINDS = frozenset({KernelKind.FQK, KernelKind.PQK})


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    circuit: CircuitSpec | None = None
    gamma: float = 1.0
    bandwidth: float = 1.0
    poly_order: int = 2

    def __post_init__(self):
        kind = KernelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in QUANTUM_KINDS and self.circuit is None:
            raise ValidationError(f"{kind.value} kernel needs a circuit")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValidationError(f"bandwidth must be > 0, got {self.bandwidth}")
        if not self.gamma > 0:
            raise ValidationError(f"gamma must be > 0, got {self.gamma}")
        if kind is KernelKind.POLY and int(self.poly_order) < 1:
            raise ValidationError(f"poly_order must be >= 1, got {self.poly_order}")

    def with_bandwidth(self, c: float) -> "KernelSpec":
        return replace(self, bandwidth=float(c))

    @property
    def label(self) -> str:
        """Short name used in result tables, e.g. ``FQK``, ``Poly2``."""
        if self.kind is KernelKind.POLY:
            return f"Poly{self.poly_order}"
        return self.kind.value

    @property
    def circuit_name(self) -> str:
        return self.circuit.name if self.circuit is not None else ""


@dataclass(frozen=True, eq=False)
class GramMatrix:
    values: np.ndarray
    spec: KernelSpec
    data_hash: str = ""

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def to_csv(self, path) -> None:
        """Write row-major values with the provenance in ``#`` comment lines."""
        s = self.spec
        header = [
            "qkbandwidth gram v1",
            f"kind={s.label}",
            f"circuit={s.circuit_name}",
            f"layers={s.circuit.layers if s.circuit is not None else ''}",
            f"bandwidth={s.bandwidth!r}",
            f"gamma={s.gamma!r}",
            f"data_hash={self.data_hash}",
            f"shape={self.values.shape[0]}x{self.values.shape[1]}",
        ]
        with open(path, "w") as fh:
            for line in header:
                fh.write(f"# {line}\n")
            np.savetxt(fh, self.values, delimiter=",", fmt="%.17g")


def read_gram_csv(path) -> tuple[np.ndarray, dict]:
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key] = value
    values = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return values, meta


def data_digest(X) -> str:
    arr = np.ascontiguousarray(np.asarray(X, dtype=float))
    h = hashlib.sha256()
    h.update(str(arr.shape).encode())
    h.update(arr.tobytes())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------- pointwise


def _pair(x, x_prime):
    x = np.asarray(x, dtype=float).ravel()
    xp = np.asarray(x_prime, dtype=float).ravel()
    if x.shape != xp.shape:
        raise ValidationError(f"dimension mismatch: {x.shape[0]} vs {xp.shape[0]}")
    return x, xp


def _check_circuit_dim(spec, x):
    if x.shape[0] != spec.circuit.n_qubits:
        raise ValidationError(f"data point has {x.shape[0]} features, circuit has {spec.circuit.n_qubits} qubits")


def k_fqk(spec: KernelSpec, x, x_prime) -> float:
    x, xp = _pair(x, x_prime)
    _check_circuit_dim(spec, x)
    n = spec.circuit.n_qubits
    a = run_program(build_program(spec.circuit, x), n)
    b = run_program(build_program(spec.circuit, xp), n)
    return fidelity(a, b)


def k_pqk(spec: KernelSpec, x, x_prime) -> float:
    x, xp = _pair(x, x_prime)
    _check_circuit_dim(spec, x)
    n = spec.circuit.n_qubits
    ea = pauli_expectations_1rdm(run_program(build_program(spec.circuit, x), n))
    eb = pauli_expectations_1rdm(run_program(build_program(spec.circuit, xp), n))
    return float(np.exp(-spec.gamma * np.sum((ea - eb) ** 2)))


def k_rbf(x, x_prime, gamma: float = 1.0) -> float:
    x, xp = _pair(x, x_prime)
    return float(np.exp(-gamma * np.sum((x - xp) ** 2)))


def poly_from_sqdist(t: int, sqdist):
    """Taylor series of ``exp(-d)`` truncated after the ``d**t`` term."""
    d = np.asarray(sqdist, dtype=float)
    total = np.zeros_like(d)
    term = np.ones_like(d)
    for s in range(t + 1):
        if s > 0:
            term = term * (-d) / s
        total = total + term
    return total


def k_poly(t: int, x, x_prime) -> float:
    if int(t) < 1:
        raise ValidationError(f"poly order must be >= 1, got {t}")
    x, xp = _pair(x, x_prime)
    return float(poly_from_sqdist(int(t), np.sum((x - xp) ** 2)))


def k_sep_rx_analytic(n: int, L: int, x, x_prime) -> float:
    """Closed-form fidelity kernel of the separable RX encoding."""
    x, xp = _pair(x, x_prime)
    if x.shape[0] != n:
        raise ValidationError(f"expected {n} features, got {x.shape[0]}")
    return float(np.prod(np.cos(L * (x - xp) / 2.0) ** 2))


def k_sep_rx_pqk_analytic(n: int, L: int, x, x_prime, gamma: float = 1.0) -> float:
    """Closed-form projected kernel of the separable RX encoding."""
    x, xp = _pair(x, x_prime)
    if x.shape[0] != n:
        raise ValidationError(f"expected {n} features, got {x.shape[0]}")
    return float(np.exp(-2.0 * gamma * (n - np.sum(np.cos(L * (x - xp))))))


def sep_rx_gram_analytic(X_scaled, L: int, Y_scaled=None) -> np.ndarray:
    """Vectorised closed-form separable-RX fidelity Gram (or cross) matrix."""
    X = np.asarray(X_scaled, dtype=float)
    Y = X if Y_scaled is None else np.asarray(Y_scaled, dtype=float)
    diff = X[:, None, :] - Y[None, :, :]
    K = np.prod(np.cos(0.5 * L * diff) ** 2, axis=-1)
    if Y_scaled is None:
        np.fill_diagonal(K, 1.0)
    return K


# ---------------------------------------------------------------- Gram assembly


def _sqdist(A, B):
    # exact differences; N <= a few hundred so the (N, M, d) temporary is fine
    diff = A[:, None, :] - B[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def feature_map(spec: KernelSpec, X_scaled) -> np.ndarray:
    """Per-point representation the kernel is computed from.

    FQK: statevectors ``(N, 2**n)``; PQK: flattened Pauli expectations
    ``(N, 3n)``; classical kernels: the scaled data itself.
    """
    if spec.kind is KernelKind.FQK:
        return encode_states(spec.circuit, X_scaled)
    if spec.kind is KernelKind.PQK:
        ex = pauli_expectations_batch(encode_states(spec.circuit, X_scaled))
        return ex.reshape(ex.shape[0], -1)
    return np.asarray(X_scaled, dtype=float)


def kernel_from_features(spec: KernelSpec, A, B) -> np.ndarray:
    if spec.kind is KernelKind.FQK:
        ov = A.conj() @ B.T
        return np.clip(ov.real**2 + ov.imag**2, 0.0, 1.0)
    if spec.kind is KernelKind.PQK:
        return np.exp(-spec.gamma * _sqdist(A, B))
    if spec.kind is KernelKind.RBF:
        return np.exp(-spec.gamma * _sqdist(A, B))
    return poly_from_sqdist(int(spec.poly_order), _sqdist(A, B))


def _validate_data(data, spec, name="data"):
    X = np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise ValidationError(f"{name} must be a 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValidationError(f"{name} contains non-finite values")
    if spec.circuit is not None and X.shape[1] != spec.circuit.n_qubits:
        raise ValidationError(f"{name} has {X.shape[1]} features, circuit has {spec.circuit.n_qubits} qubits")
    return X


def gram(spec: KernelSpec, data) -> GramMatrix:
    """Symmetric train Gram matrix of ``data`` (raw, unscaled rows)."""
    X = _validate_data(data, spec)
    if X.shape[0] < 2:
        raise ValidationError(f"need at least 2 data points, got {X.shape[0]}")
    F = feature_map(spec, spec.bandwidth * X)
    K = kernel_from_features(spec, F, F)
    K = 0.5 * (K + K.T)
    # zero distance: exactly 1 for every kind, including the truncated series
    np.fill_diagonal(K, 1.0)
    return GramMatrix(K, spec, data_digest(X))


def cross_gram(spec: KernelSpec, test, train) -> np.ndarray:
    """``(n_test, n_train)`` matrix ``k(test_i, train_j)``."""
    A = _validate_data(test, spec, "test data")
    B = _validate_data(train, spec, "train data")
    if A.shape[1] != B.shape[1]:
        raise ValidationError(f"feature counts differ: {A.shape[1]} vs {B.shape[1]}")
    if A.shape[0] == 0:
        return np.zeros((0, B.shape[0]))
    c = spec.bandwidth
    return kernel_from_features(spec, feature_map(spec, c * A), feature_map(spec, c * B))


def gram_pair(spec: KernelSpec, train, test) -> tuple[GramMatrix, np.ndarray]:
    """Train Gram and test-train cross Gram sharing one feature evaluation of ``train``."""
    X = _validate_data(train, spec, "train data")
    T = _validate_data(test, spec, "test data")
    c = spec.bandwidth
    F = feature_map(spec, c * X)
    K = kernel_from_features(spec, F, F)
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 1.0)
    cross = kernel_from_features(spec, feature_map(spec, c * T), F) if T.shape[0] else np.zeros((0, X.shape[0]))
    return GramMatrix(K, spec, data_digest(X)), cross


def kernel_value(spec: KernelSpec, x, x_prime) -> float:
    """Dispatch a pointwise kernel evaluation on pre-scaled inputs."""
    if spec.kind is KernelKind.FQK:
        return k_fqk(spec, x, x_prime)
    if spec.kind is KernelKind.PQK:
        return k_pqk(spec, x, x_prime)
    if spec.kind is KernelKind.RBF:
        return k_rbf(x, x_prime, spec.gamma)
    return k_poly(spec.poly_order, x, x_prime)


__all__ = [
    "KernelKind",
    "KernelSpec",
    "GramMatrix",
    "k_fqk",
    "k_pqk",
    "k_rbf",
    "k_poly",
    "k_sep_rx_analytic",
    "k_sep_rx_pqk_analytic",
    "sep_rx_gram_analytic",
    "gram",
    "cross_gram",
    "gram_pair",
    "feature_map",
    "kernel_value",
    "read_gram_csv",
    "data_digest",
]
