from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkbandwidth.circuits import (
    CircuitSpec,
    Family,
    build_program,
    encode_states,
    gate_count,
    init_params,
    n_params,
    yz_cx_pairs,
)
from qkbandwidth.errors import ValidationError
from qkbandwidth.kernels import k_sep_rx_analytic
from qkbandwidth.statevector import Gate, fidelity, init_zero, run_program

from oracles import dense_circuit_state

FAMILIES = [f.value for f in Family]


def as_tuples(program):
    return [(g.kind.value, g.qubits, g.angle) for g in program]


class TestBuildProgram:
    def test_separable_rx_n3_l2(self):
        x = (0.1, 0.2, 0.3)
        got = as_tuples(build_program(CircuitSpec("SeparableRX", 3, 2), x))
        row = [("RX", (i,), x[i]) for i in range(3)]
        assert got == row + row

    def test_iqp_n2_l1(self):
        x = (0.4, -0.7)
        got = as_tuples(build_program(CircuitSpec("IQP", 2, 1), x))
        assert got == [
            ("H", (0,), None),
            ("H", (1,), None),
            ("Phase", (0,), 0.8),
            ("Phase", (1,), -1.4),
            ("CNOT", (0, 1), None),
            ("Phase", (1,), 2 * 0.4 * -0.7),
            ("CNOT", (0, 1), None),
        ]

    def test_separable_identity_at_zero(self):
        s = run_program(build_program(CircuitSpec("SeparableRX", 1, 1), [0.0]), 1)
        np.testing.assert_allclose(s.amplitudes, init_zero(1).amplitudes, atol=1e-15)

    def test_iqp_pair_order(self):
        prog = build_program(CircuitSpec("IQP", 4, 1), np.arange(4) + 1.0)
        cnots = [g.qubits for g in prog if g.kind is Gate.CNOT][::2]
        assert cnots == list(combinations(range(4), 2))

    def test_yz_cx_ring_matches_drawn_layers(self):
        assert yz_cx_pairs(3, 0) == [(0, 1), (2, 0)]
        assert yz_cx_pairs(3, 1) == [(1, 2)]
        assert yz_cx_pairs(1, 0) == []

    def test_z_embedding_chain_descends(self):
        prog = build_program(CircuitSpec("ZEmbedding", 3, 1), [0.1, 0.2, 0.3])
        assert [g.qubits for g in prog if g.kind is Gate.CNOT] == [(1, 2), (0, 1)]

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            build_program(CircuitSpec("IQP", 3, 1), [0.1, 0.2])

    @pytest.mark.parametrize("family", FAMILIES)
    def test_deterministic(self, family):
        spec = CircuitSpec(family, 3, 2)
        x = [0.3, -1.2, 2.0]
        assert as_tuples(build_program(spec, x)) == as_tuples(build_program(CircuitSpec(family, 3, 2), x))


class TestParams:
    def test_parameter_free(self):
        assert init_params("SeparableRX", 3, 2).size == 0

    def test_hzy_seeded(self):
        a = init_params("HZY_CZ", 3, 1, 1)
        assert a.shape == (6,)
        np.testing.assert_array_equal(a, init_params("HZY_CZ", 3, 1, 1))
        assert np.all((a >= 0) & (a < 2 * np.pi))

    @pytest.mark.parametrize("L", [1, 2, 5])
    def test_yz_cx_shared_across_layers(self, L):
        assert n_params("YZ_CX", 3, L) == 6
        spec = CircuitSpec("YZ_CX", 3, L)
        angles = [g.angle for g in build_program(spec, np.zeros(3)) if g.kind in (Gate.RY, Gate.RZ)]
        np.testing.assert_array_equal(angles, np.tile(spec.params, L))

    def test_wrong_param_length(self):
        with pytest.raises(ValidationError):
            CircuitSpec("HZY_CZ", 2, 1, params=np.zeros(3))

    @pytest.mark.parametrize("kw", [dict(n_qubits=0), dict(layers=0)])
    def test_bad_shape(self, kw):
        args = dict(family="IQP", n_qubits=2, layers=1) | kw
        with pytest.raises(ValidationError):
            CircuitSpec(**args)


class TestGateCounts:
    @given(st.sampled_from(FAMILIES), st.integers(1, 8), st.integers(1, 4))
    @settings(max_examples=80, deadline=None)
    def test_closed_form(self, family, n, L):
        prog = build_program(CircuitSpec(family, n, L), np.linspace(-1, 1, n))
        assert len(prog) == gate_count(family, n, L)

    @given(st.integers(1, 8))
    def test_iqp_pair_terms(self, n):
        prog = build_program(CircuitSpec("IQP", n, 1), np.ones(n))
        assert sum(g.kind is Gate.CNOT for g in prog) == n * (n - 1)


class TestStates:
    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("L", [1, 2])
    def test_matches_dense_construction(self, family, n, L):
        spec = CircuitSpec(family, n, L)
        x = np.random.default_rng(n * 10 + L).uniform(-np.pi, np.pi, n)
        psi = run_program(build_program(spec, x), n).amplitudes
        np.testing.assert_allclose(psi, dense_circuit_state(family, x, L, spec.params), atol=1e-12)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_batch_equals_single(self, family):
        spec = CircuitSpec(family, 3, 2)
        X = np.random.default_rng(0).normal(size=(5, 3))
        batch = encode_states(spec, X)
        for i in range(5):
            np.testing.assert_allclose(batch[i], run_program(build_program(spec, X[i]), 3).amplitudes, atol=1e-13)

    @given(st.integers(1, 6), st.sampled_from([1, 2, 4]), st.floats(1e-3, 10), st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_bandwidth_composition(self, n, L, c, seed):
        rng = np.random.default_rng(seed)
        x, xp = rng.uniform(-np.pi, np.pi, (2, n))
        spec = CircuitSpec("SeparableRX", n, L)
        a = run_program(build_program(spec, c * x), n)
        b = run_program(build_program(spec, c * xp), n)
        assert abs(fidelity(a, b) - k_sep_rx_analytic(n, L, c * x, c * xp)) < 1e-10
