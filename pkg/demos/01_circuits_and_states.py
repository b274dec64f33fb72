"""Build each encoding circuit, run it on the statevector simulator and inspect the result."""

import numpy as np

from qkbandwidth.circuits import CircuitSpec, Family, build_program
from qkbandwidth.statevector import pauli_expectations_1rdm, run_program

x = np.array([0.3, -1.2, 2.0])
for fam in Family:
    spec = CircuitSpec(fam, n_qubits=3, layers=2, param_seed=1)
    prog = build_program(spec, x)
    state = run_program(prog, 3)
    paulis = pauli_expectations_1rdm(state)
    print(f"{fam.value:12s} gates={len(prog):3d} norm^2={state.norm_sq:.15f}")
    print("   <X>,<Y>,<Z> per qubit:", np.round(paulis, 4).tolist())
