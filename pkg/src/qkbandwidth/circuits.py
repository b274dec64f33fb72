"""The five data-encoding circuit families.

Each family is written once as a generator of ``(gate, qubits, angle)``
triples. The generator only does arithmetic on the entries of ``x``, so it
works unchanged whether ``x`` holds floats (one data point, used by
:func:`build_program`) or arrays (one array per feature over a whole batch,
used by :func:`encode_states`). That keeps the per-point program and the
batched simulation structurally identical by construction.

Layouts per layer, for ``n`` qubits:

* ``SeparableRX``: ``RX(x_i)`` on every qubit.
* ``IQP``: ``H`` row, ``Phase(2 x_i)`` row, then for each pair ``j < k`` in
  lexicographic order ``CNOT(j, k) Phase(2 x_j x_k)_k CNOT(j, k)``.
* ``HZY_CZ``: ``H`` row, ``RZ(x_i)`` row, ``RY(p)`` row, then a ring of
  controlled ``RZ(p)`` from qubit ``i`` onto ``i + 1 mod n``.  The
  controlled rotation is expanded into ``RZ(p/2)_t CNOT RZ(-p/2)_t CNOT``.
* ``YZ_CX``: ``RY(p_{2i} + x_i)`` and ``RZ(p_{2i+1} + x_i)`` on every qubit,
  then a brick of CNOTs ``(i, i + 1 mod n)`` for ``i = l % 2, l % 2 + 2, ...``
  on layer ``l``. The same ``2n`` parameters are reused on every layer.
* ``ZEmbedding``: ``H`` row, ``Phase(x_i)`` row, then the descending CNOT
  chain ``(n-2, n-1), (n-3, n-2), ..., (0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .statevector import Gate, GateOp, apply_gate_batch, zero_batch


class Family(str, Enum):
    SEPARABLE_RX = "SeparableRX"
    IQP = "IQP"
    HZY_CZ = "HZY_CZ"
    YZ_CX = "YZ_CX"
    Z_EMBEDDING = "ZEmbedding"


def n_params(family, n_qubits: int, layers: int) -> int:
    family = Family(family)
    if family is Family.HZY_CZ:
        return 2 * n_qubits * layers
    if family is Family.YZ_CX:
        return 2 * n_qubits
    return 0


def init_params(family, n_qubits: int, layers: int, param_seed: int = 1) -> np.ndarray:
    """Fixed random angles, uniform on ``[0, 2 pi)``; empty for parameter-free families."""
    size = n_params(family, n_qubits, layers)
    if size == 0:
        return np.empty(0)
    rng = np.random.default_rng(param_seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=size)


@dataclass(frozen=True, eq=False)
class CircuitSpec:
    family: Family
    n_qubits: int
    layers: int = 2
    params: np.ndarray = field(default=None)
    param_seed: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n_qubits < 1:
            raise ValidationError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.layers < 1:
            raise ValidationError(f"layers must be >= 1, got {self.layers}")
        if self.params is None:
            params = init_params(self.family, self.n_qubits, self.layers, self.param_seed)
        else:
            params = np.asarray(self.params, dtype=float).ravel()
        expected = n_params(self.family, self.n_qubits, self.layers)
        if params.shape[0] != expected:
            raise ValidationError(
                f"{self.family.value} with n={self.n_qubits}, L={self.layers} needs {expected} params, got {params.shape[0]}"
            )
        params = params.copy()
        params.flags.writeable = False
        object.__setattr__(self, "params", params)

    @property
    def name(self) -> str:
        return self.family.value

    def key(self) -> tuple:
        return (self.family.value, self.n_qubits, self.layers, self.param_seed, tuple(self.params.tolist()))


@dataclass(frozen=True)
class EncodedProgram:
    gates: tuple[GateOp, ...]

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


# ---------------------------------------------------------------- layouts


def _separable_rx(x, n, layers, p):
    for _ in range(layers):
        for i in range(n):
            yield Gate.RX, (i,), x[i]


def _iqp(x, n, layers, p):
    for _ in range(layers):
        for i in range(n):
            yield Gate.H, (i,), None
        for i in range(n):
            yield Gate.PHASE, (i,), 2.0 * x[i]
        for j, k in combinations(range(n), 2):
            yield Gate.CNOT, (j, k), None
            yield Gate.PHASE, (k,), 2.0 * x[j] * x[k]
            yield Gate.CNOT, (j, k), None


def _ring(n):
    return [(i, (i + 1) % n) for i in range(n)] if n > 1 else []


def _hzy_cz(x, n, layers, p):
    for layer in range(layers):
        off = 2 * n * layer
        for i in range(n):
            yield Gate.H, (i,), None
        for i in range(n):
            yield Gate.RZ, (i,), x[i]
        for i in range(n):
            yield Gate.RY, (i,), p[off + i]
        for r, (ctrl, tgt) in enumerate(_ring(n)):
            theta = p[off + n + r]
            yield Gate.RZ, (tgt,), 0.5 * theta
            yield Gate.CNOT, (ctrl, tgt), None
            yield Gate.RZ, (tgt,), -0.5 * theta
            yield Gate.CNOT, (ctrl, tgt), None


def yz_cx_pairs(n: int, layer: int) -> list[tuple[int, int]]:
    if n < 2:
        return []
    return [(i, (i + 1) % n) for i in range(layer % 2, n, 2)]


def _yz_cx(x, n, layers, p):
    for layer in range(layers):
        for i in range(n):
            yield Gate.RY, (i,), p[2 * i] + x[i]
            yield Gate.RZ, (i,), p[2 * i + 1] + x[i]
        for ctrl, tgt in yz_cx_pairs(n, layer):
            yield Gate.CNOT, (ctrl, tgt), None


def _z_embedding(x, n, layers, p):
    for _ in range(layers):
        for i in range(n):
            yield Gate.H, (i,), None
        for i in range(n):
            yield Gate.PHASE, (i,), x[i]
        for i in range(n - 2, -1, -1):
            yield Gate.CNOT, (i, i + 1), None


_LAYOUTS = {
    Family.SEPARABLE_RX: _separable_rx,
    Family.IQP: _iqp,
    Family.HZY_CZ: _hzy_cz,
    Family.YZ_CX: _yz_cx,
    Family.Z_EMBEDDING: _z_embedding,
}


def gate_count(family, n_qubits: int, layers: int) -> int:
    """Closed-form number of gates in one encoded program."""
    n, L = n_qubits, layers
    family = Family(family)
    if family is Family.SEPARABLE_RX:
        return n * L
    if family is Family.IQP:
        return L * (2 * n + 3 * n * (n - 1) // 2)
    if family is Family.HZY_CZ:
        ring = n if n > 1 else 0
        return L * (3 * n + 4 * ring)
    if family is Family.YZ_CX:
        return 2 * n * L + sum(len(yz_cx_pairs(n, layer)) for layer in range(L))
    return L * (2 * n + max(n - 1, 0))


def _ops(spec: CircuitSpec, x):
    return _LAYOUTS[spec.family](x, spec.n_qubits, spec.layers, spec.params)


def build_program(spec: CircuitSpec, x_scaled) -> EncodedProgram:
    """Gate list encoding one (already bandwidth-scaled) data point."""
    x = np.asarray(x_scaled, dtype=float).ravel()
    if x.shape[0] != spec.n_qubits:
        raise ValidationError(f"data point has {x.shape[0]} features, circuit has {spec.n_qubits} qubits")
    x = [float(v) for v in x]
    return EncodedProgram(tuple(GateOp(kind, qubits, angle) for kind, qubits, angle in _ops(spec, x)))


def encode_states(spec: CircuitSpec, X_scaled) -> np.ndarray:
    """Statevectors of all rows of ``X_scaled``; returns an ``(N, 2**n)`` array."""
    X = np.asarray(X_scaled, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.n_qubits:
        raise ValidationError(f"expected data of shape (N, {spec.n_qubits}), got {X.shape}")
    amps = zero_batch(X.shape[0], spec.n_qubits)
    columns = [X[:, i] for i in range(spec.n_qubits)]
    for kind, qubits, angle in _ops(spec, columns):
        amps = apply_gate_batch(amps, kind, qubits, angle)
    return amps
