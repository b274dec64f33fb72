import cvxpy as cp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkbandwidth.errors import ValidationError
from qkbandwidth.kernels import KernelSpec, cross_gram, gram
from qkbandwidth.svm import decision_values, dual_objective, roc_auc, svm_fit


def qp_oracle(K, y, C):
    """Dual optimum from a generic conic solver."""
    n = len(y)
    a = cp.Variable(n)
    Q = K * np.outer(y, y)
    L = np.linalg.cholesky(Q + 1e-10 * np.eye(n))
    objective = 0.5 * cp.sum_squares(L.T @ a) - cp.sum(a)
    prob = cp.Problem(cp.Minimize(objective), [a >= 0, a <= C, y @ a == 0])
    prob.solve(solver=cp.CLARABEL)
    return float(dual_objective(np.clip(a.value, 0, C), K, y))


def random_problem(N, seed, gamma=1.0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(N, 2))
    y = np.where(rng.uniform(size=N) < 0.5, -1.0, 1.0)
    y[0], y[1] = 1.0, -1.0
    return X, y, gram(KernelSpec("RBF", bandwidth=gamma), X).values


class TestFit:
    def test_two_points_identity(self):
        m = svm_fit(np.eye(2), [1, -1], C=1.0)
        np.testing.assert_allclose(m.alpha, [1, 1], atol=1e-12)
        assert m.bias == pytest.approx(0.0, abs=1e-12)
        f = decision_values(m, np.eye(2))
        assert np.all(np.sign(f) == [1, -1])

    def test_xor(self):
        X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
        y = np.array([1, 1, -1, -1.0])
        K = gram(KernelSpec("RBF", bandwidth=1.5), X).values
        m = svm_fit(K, y, C=100.0)
        assert np.all(np.sign(decision_values(m, K)) == y)

    @given(st.integers(2, 12), st.integers(0, 2**31), st.sampled_from([0.5, 4.0, 64.0]))
    @settings(max_examples=30, deadline=None)
    def test_dual_matches_qp_oracle(self, N, seed, C):
        X, y, K = random_problem(N, seed)
        m = svm_fit(K, y, C, tol=1e-6)
        ref = qp_oracle(K, y, C)
        assert m.objective == pytest.approx(ref, rel=1e-3, abs=1e-9)

    @given(st.integers(4, 30), st.integers(0, 2**31))
    @settings(max_examples=30, deadline=None)
    def test_feasible(self, N, seed):
        _, y, K = random_problem(N, seed)
        C = 10.0
        m = svm_fit(K, y, C)
        assert m.converged
        assert np.all(m.alpha >= 0) and np.all(m.alpha <= C)
        assert abs(m.alpha @ y) < 1e-8
        assert m.kkt_gap < 1e-3

    def test_margin_on_free_vectors(self):
        _, y, K = random_problem(30, 3, gamma=0.7)
        m = svm_fit(K, y, 10.0)
        f = decision_values(m, K)
        free = (m.alpha > 1e-8) & (m.alpha < m.C - 1e-8)
        assert free.any()
        assert np.max(np.abs(y[free] * f[free] - 1)) < 1e-3

    def test_duplicate_row(self):
        X, y, _ = random_problem(12, 5)
        spec = KernelSpec("RBF", bandwidth=0.8)
        T = np.random.default_rng(1).normal(size=(7, 2))
        m1 = svm_fit(gram(spec, X).values, y, 5.0, tol=1e-8)
        X2, y2 = np.vstack([X, X[:1]]), np.r_[y, y[:1]]
        m2 = svm_fit(gram(spec, X2).values, y2, 5.0, tol=1e-8)
        f1 = decision_values(m1, cross_gram(spec, T, X))
        f2 = decision_values(m2, cross_gram(spec, T, X2))
        # the weight vector is unique, so splitting alpha over the copies leaves f unchanged
        np.testing.assert_allclose(f1, f2, atol=1e-6)

    @given(st.integers(0, 2**31), st.floats(0.1, 10))
    @settings(max_examples=20, deadline=None)
    def test_scaling_keeps_signs(self, seed, s):
        X, y, K = random_problem(15, seed)
        T = np.random.default_rng(seed + 1).normal(size=(9, 2))
        Kx = cross_gram(KernelSpec("RBF"), T, X)
        m1 = svm_fit(K, y, 8.0, tol=1e-8)
        m2 = svm_fit(s * K, y, 8.0 / s, tol=1e-8)
        f1, f2 = decision_values(m1, Kx), decision_values(m2, s * Kx)
        keep = np.abs(f1) > 1e-4
        assert np.all(np.sign(f1[keep]) == np.sign(f2[keep]))

    def test_indefinite_kernel(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(40, 2)) * 2
        y = np.where(X[:, 0] > 0, 1.0, -1.0)
        K = gram(KernelSpec("Poly", poly_order=1), X).values
        assert np.linalg.eigvalsh(K).min() < 0
        m = svm_fit(K, y, 10.0)
        assert np.all(np.isfinite(m.alpha)) and np.all((m.alpha >= 0) & (m.alpha <= 10.0))

    def test_iteration_cap(self):
        _, y, K = random_problem(30, 1, gamma=0.3)
        m = svm_fit(K, y, 1e4, max_iter=3)
        assert not m.converged and m.n_iter == 3

    def test_deterministic(self):
        _, y, K = random_problem(25, 2)
        a, b = svm_fit(K, y, 3.0), svm_fit(K, y, 3.0)
        assert np.array_equal(a.alpha, b.alpha) and a.bias == b.bias

    @pytest.mark.parametrize("y", [[1, 1, 1], [0, 1, -1]])
    def test_bad_labels(self, y):
        with pytest.raises(ValidationError):
            svm_fit(np.eye(3), y, 1.0)

    def test_bad_c(self):
        with pytest.raises(ValidationError):
            svm_fit(np.eye(2), [1, -1], 0.0)


class TestDecision:
    def test_empty(self):
        m = svm_fit(np.eye(2), [1, -1], 1.0)
        assert decision_values(m, np.empty(0)).shape == (0,)
        assert decision_values(m, np.zeros((0, 2))).shape == (0,)

    def test_zero_cross_gives_bias(self):
        _, y, K = random_problem(10, 4)
        m = svm_fit(K, y, 2.0)
        np.testing.assert_array_equal(decision_values(m, np.zeros((3, 10))), np.full(3, m.bias))

    def test_shape_mismatch(self):
        m = svm_fit(np.eye(2), [1, -1], 1.0)
        with pytest.raises(ValidationError):
            decision_values(m, np.zeros((3, 5)))


class TestRocAuc:
    def test_perfect(self):
        assert roc_auc([0.1, 0.2, 0.8, 0.9], [-1, -1, 1, 1]) == 1.0

    def test_inverted(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [-1, -1, 1, 1]) == 0.0

    def test_ties(self):
        assert roc_auc(np.zeros(6), [1, -1, 1, -1, 1, -1]) == 0.5

    def test_pairwise_definition(self):
        rng = np.random.default_rng(0)
        s = np.round(rng.normal(size=40), 1)
        y = np.where(rng.uniform(size=40) < 0.4, 1, -1)
        pos, neg = s[y > 0], s[y < 0]
        ref = np.mean((pos[:, None] > neg[None, :]) + 0.5 * (pos[:, None] == neg[None, :]))
        assert roc_auc(s, y) == pytest.approx(ref, abs=1e-14)

    @given(st.integers(0, 2**31))
    def test_monotone_invariance(self, seed):
        rng = np.random.default_rng(seed)
        s = rng.normal(size=30)
        y = np.r_[1, -1, np.where(rng.uniform(size=28) < 0.5, 1, -1)]
        assert roc_auc(s, y) == roc_auc(np.exp(3 * s) + 7, y)

    def test_single_class(self):
        with pytest.raises(ValidationError):
            roc_auc([0.1, 0.2], [1, 1])
