"""Dense statevector simulation of pure n-qubit states.

Qubit 0 is the least significant bit of the amplitude index, so the basis
state ``|q_{n-1} ... q_1 q_0>`` sits at index ``sum(q_k * 2**k)``.

Every gate routine works on a batch of states stored as a ``(B, 2**n)``
complex array; the single-state API below is a thin wrapper around it.
Batched application is what the Gram assembly uses to encode all data
points of a dataset in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CapacityError, ValidationError

MAX_QUBITS = 24
_NORM_TOL = 1e-8


class Gate(str, Enum):
    H = "H"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    PHASE = "Phase"
    CNOT = "CNOT"
    CZ = "CZ"


PARAMETRIC = frozenset({Gate.RX, Gate.RY, Gate.RZ, Gate.PHASE})
TWO_QUBIT = frozenset({Gate.CNOT, Gate.CZ})


@dataclass(frozen=True)
class GateOp:
    """One gate of a program.

    For ``CNOT`` the qubit order is ``(control, target)``.
    """

    kind: Gate
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        kind = Gate(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if kind in TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise ValidationError(f"{kind.value} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != arity:
            raise ValidationError(f"repeated qubit index in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValidationError(f"negative qubit index in {self.qubits}")
        if kind in PARAMETRIC:
            if self.angle is None:
                raise ValidationError(f"{kind.value} needs an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValidationError(f"{kind.value} takes no angle")


@dataclass(frozen=True, eq=False)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise ValidationError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amps.shape}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __len__(self):
        return self.amplitudes.shape[0]


def _check_n_qubits(n_qubits):
    if not 1 <= int(n_qubits) <= MAX_QUBITS:
        raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    return int(n_qubits)


def init_zero(n_qubits: int) -> Statevector:
    n = _check_n_qubits(n_qubits)
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return Statevector(n, amps)


def zero_batch(batch: int, n_qubits: int) -> np.ndarray:
    n = _check_n_qubits(n_qubits)
    amps = np.zeros((batch, 1 << n), dtype=complex)
    amps[:, 0] = 1.0
    return amps


# ---------------------------------------------------------------- matrices

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def single_qubit_matrix(kind: Gate, angle=None) -> np.ndarray:
    """Gate matrix; a vector ``angle`` of length B gives a ``(B, 2, 2)`` stack."""
    kind = Gate(kind)
    if kind is Gate.H:
        return _H
    t = np.asarray(angle, dtype=float)
    c = np.cos(t / 2)
    s = np.sin(t / 2)
    zero = np.zeros_like(c)
    if kind is Gate.RX:
        m = [[c, -1j * s], [-1j * s, c]]
    elif kind is Gate.RY:
        m = [[c, -s], [s, c]]
    elif kind is Gate.RZ:
        m = [[np.exp(-0.5j * t), zero], [zero, np.exp(0.5j * t)]]
    elif kind is Gate.PHASE:
        m = [[np.ones_like(c), zero], [zero, np.exp(1j * t)]]
    else:
        raise ValidationError(f"{kind.value} is not a single-qubit gate")
    m = np.array(m, dtype=complex)
    # (2, 2, B) -> (B, 2, 2) for batched angles
    return np.moveaxis(m, -1, 0) if m.ndim == 3 else m


# ---------------------------------------------------------------- batched ops


def _n_of(amps):
    dim = amps.shape[-1]
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise ValidationError(f"state dimension {dim} is not a power of two")
    return n


def _check_qubits(qubits, n):
    for q in qubits:
        if not 0 <= q < n:
            raise ValidationError(f"qubit index {q} out of range for {n} qubits")


def apply_gate_batch(amps: np.ndarray, kind: Gate, qubits, angle=None) -> np.ndarray:
    """Apply one gate to every row of ``amps`` and return a new array.

    ``angle`` is a scalar or a length-B vector (one angle per state).
    """
    kind = Gate(kind)
    amps = np.asarray(amps, dtype=complex)
    batch = amps.shape[0]
    n = _n_of(amps)
    qubits = tuple(int(q) for q in qubits)
    _check_qubits(qubits, n)

    if kind in TWO_QUBIT:
        a, b = qubits
        if a == b:
            raise ValidationError("two-qubit gate needs distinct qubits")
        view = amps.reshape((batch,) + (2,) * n).copy()
        ax_a, ax_b = n - a, n - b

        def idx(va, vb):
            i = [slice(None)] * (n + 1)
            i[ax_a], i[ax_b] = va, vb
            return tuple(i)

        if kind is Gate.CNOT:
            lo, hi = idx(1, 0), idx(1, 1)
            view[lo], view[hi] = view[hi].copy(), view[lo].copy()
        else:
            view[idx(1, 1)] *= -1
        return view.reshape(batch, -1)

    (q,) = qubits
    if kind in PARAMETRIC and angle is None:
        raise ValidationError(f"{kind.value} needs an angle")
    mat = single_qubit_matrix(kind, angle)
    view = amps.reshape(batch, -1, 2, 1 << q)
    if mat.ndim == 3:
        if mat.shape[0] != batch:
            raise ValidationError(f"got {mat.shape[0]} angles for a batch of {batch}")
        out = np.einsum("bij,bhjl->bhil", mat, view)
    else:
        out = np.einsum("ij,bhjl->bhil", mat, view)
    return out.reshape(batch, -1)


def pauli_expectations_batch(amps: np.ndarray) -> np.ndarray:
    """``<X_k>, <Y_k>, <Z_k>`` of every qubit for each row; shape ``(B, n, 3)``."""
    amps = np.asarray(amps, dtype=complex)
    batch = amps.shape[0]
    n = _n_of(amps)
    out = np.empty((batch, n, 3))
    for k in range(n):
        view = amps.reshape(batch, -1, 2, 1 << k)
        a0 = view[:, :, 0, :].reshape(batch, -1)
        a1 = view[:, :, 1, :].reshape(batch, -1)
        rho01 = np.einsum("bi,bi->b", a0, a1.conj())
        out[:, k, 0] = 2.0 * rho01.real
        out[:, k, 1] = -2.0 * rho01.imag
        out[:, k, 2] = np.einsum("bi,bi->b", a0, a0.conj()).real - np.einsum("bi,bi->b", a1, a1.conj()).real
    return out


# ---------------------------------------------------------------- single-state API


def apply_gate(state: Statevector, gate: GateOp) -> Statevector:
    _check_qubits(gate.qubits, state.n_qubits)
    amps = apply_gate_batch(state.amplitudes[None, :], gate.kind, gate.qubits, gate.angle)
    return Statevector(state.n_qubits, amps[0])


def run_program(gates, n_qubits: int) -> Statevector:
    state = init_zero(n_qubits)
    for g in gates:
        state = apply_gate(state, g)
    return state


def _check_normalized(state):
    if abs(state.norm_sq - 1.0) > _NORM_TOL:
        raise ValidationError(f"state is not normalized (norm^2 = {state.norm_sq})")


def pauli_expectations_1rdm(state: Statevector) -> np.ndarray:
    """Row k holds ``(<X_k>, <Y_k>, <Z_k>)`` of the one-qubit reduced state of qubit k."""
    _check_normalized(state)
    return pauli_expectations_batch(state.amplitudes[None, :])[0]


def fidelity(state_a: Statevector, state_b: Statevector) -> float:
    if state_a.n_qubits != state_b.n_qubits:
        raise ValidationError(f"qubit counts differ: {state_a.n_qubits} vs {state_b.n_qubits}")
    _check_normalized(state_a)
    _check_normalized(state_b)
    overlap = np.vdot(state_a.amplitudes, state_b.amplitudes)
    return float(min(1.0, overlap.real**2 + overlap.imag**2))
