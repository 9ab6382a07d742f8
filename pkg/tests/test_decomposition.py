import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import matrix_strategy
from fsvd import (DegenerateInputError, EdgeList, FsvdParams, InputError,
                  NumericError, SvdResult, WysConfig, csr_from_edges,
                  dense_op, fsvd, operator_pair, orthonormalize,
                  pseudoinverse_apply, reconstruction_error, small_svd,
                  transition_matrix, wys_operator)


def assert_valid_result(res, r, c):
    k = res.k
    assert res.U.shape == (r, k) and res.V.shape == (c, k)
    assert np.abs(res.U.T @ res.U - np.eye(k)).max() <= 1e-6
    assert np.abs(res.V.T @ res.V - np.eye(k)).max() <= 1e-6
    assert np.all(np.diff(res.s) <= 0) and np.all(res.s >= 0)


class TestParams:
    def test_validation(self):
        with pytest.raises(InputError):
            FsvdParams(k=0)
        with pytest.raises(InputError):
            FsvdParams(k=2, iterations=0)


class TestFsvd:
    def test_identity_spectrum(self):
        res = fsvd(dense_op(np.eye(4)), FsvdParams(k=2, seed=0))
        assert np.abs(res.s - 1.0).max() <= 1e-10
        assert_valid_result(res, 4, 4)

    def test_diagonal(self):
        res = fsvd(dense_op(np.diag([3.0, 2.0, 1.0])), FsvdParams(k=2, seed=1))
        assert np.abs(res.s - [3.0, 2.0]).max() <= 1e-10

    def test_wys_path2(self):
        A = csr_from_edges(EdgeList(np.array([[0, 1]]), 2))
        op = wys_operator(transition_matrix(A), A, WysConfig(window=1))
        res = fsvd(op, FsvdParams(k=1, seed=0))
        assert abs(res.s[0] - 2.0) <= 1e-10

    def test_exact_low_rank_recovery(self):
        rng = np.random.default_rng(5)
        M = rng.standard_normal((60, 8)) @ rng.standard_normal((8, 40))
        res = fsvd(dense_op(M), FsvdParams(k=8, iterations=8, seed=2))
        err = np.linalg.norm(M - (res.U * res.s) @ res.V.T)
        assert err / np.linalg.norm(M) <= 1e-8

    def test_deterministic_for_seed(self):
        M = np.random.default_rng(9).standard_normal((30, 20))
        a = fsvd(dense_op(M), FsvdParams(k=5, seed=42))
        b = fsvd(dense_op(M), FsvdParams(k=5, seed=42))
        assert np.array_equal(a.U, b.U)
        assert np.array_equal(a.s, b.s)
        assert np.array_equal(a.V, b.V)
        c = fsvd(dense_op(M), FsvdParams(k=5, seed=43))
        assert not np.array_equal(a.U, c.U)

    def test_rank_too_large(self):
        with pytest.raises(InputError):
            fsvd(dense_op(np.eye(3)), FsvdParams(k=4))

    def test_full_rank_allowed(self):
        # k equal to min(shape) narrows the sketch instead of failing
        M = np.random.default_rng(3).standard_normal((5, 12))
        res = fsvd(dense_op(M), FsvdParams(k=5, seed=0))
        s_true = np.linalg.svd(M, compute_uv=False)
        assert np.abs(res.s - s_true).max() <= 1e-8

    def test_nonfinite_operator_rejected(self):
        bad = np.ones((4, 4))
        bad[2, 2] = np.nan
        with pytest.raises(NumericError):
            fsvd(operator_pair((4, 4), lambda x: bad @ x, lambda x: bad.T @ x),
                 FsvdParams(k=2, seed=0))

    def test_iterations_recorded(self):
        res = fsvd(dense_op(np.eye(4)), FsvdParams(k=2, iterations=3, seed=0))
        assert res.iterations_used == 3

    @given(matrix_strategy(max_rows=30, max_cols=30),
           st.integers(1, 6), st.integers(0, 2**31 - 1))
    def test_result_invariants(self, M, k, seed):
        k = min(k, min(M.shape))
        res = fsvd(dense_op(M), FsvdParams(k=k, seed=seed))
        assert_valid_result(res, *M.shape)
        s_true = np.linalg.svd(M, compute_uv=False)
        # estimated values can undershoot on hard spectra, never overshoot
        assert np.all(res.s <= s_true[0] * (1 + 1e-8) + 1e-8)

    def test_error_non_increasing_in_iterations_on_average(self):
        def powerlaw(rng, n=80):
            U, _ = np.linalg.qr(rng.standard_normal((n, n)))
            V, _ = np.linalg.qr(rng.standard_normal((n, n)))
            return (U * (1.0 / np.arange(1, n + 1))) @ V.T

        means = []
        for iterations in (1, 3, 10):
            errors = []
            for seed in range(10):
                M = powerlaw(np.random.default_rng(100 + seed))
                res = fsvd(dense_op(M),
                           FsvdParams(k=8, iterations=iterations, seed=seed))
                errors.append(np.linalg.norm(M - (res.U * res.s) @ res.V.T))
            means.append(np.mean(errors))
        assert means[2] <= means[1] + 1e-9 <= means[0] + 2e-9


class TestOrthonormalize:
    def test_orthonormal_input_preserved(self):
        Q0, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((12, 4)))
        Q = orthonormalize(Q0)
        assert np.abs(Q.T @ Q - np.eye(4)).max() <= 1e-12
        # same span: projector reproduces the input
        assert np.abs(Q @ (Q.T @ Q0) - Q0).max() <= 1e-10

    def test_scaled_identity_directions(self):
        Q = orthonormalize(np.diag([2.0, 3.0]))
        assert np.allclose(np.abs(Q), np.eye(2), atol=1e-12)

    def test_projector_fixes_columns(self):
        M = np.random.default_rng(1).standard_normal((100, 10))
        Q = orthonormalize(M)
        assert np.abs(Q.T @ Q - np.eye(10)).max() <= 1e-12
        assert np.abs(Q @ (Q.T @ M) - M).max() <= 1e-10

    def test_rank_deficient_repaired(self):
        col = np.arange(6.0).reshape(-1, 1)
        M = np.hstack([col, col, 2 * col])
        Q = orthonormalize(M, rng=np.random.default_rng(0))
        assert Q.shape == (6, 3)
        assert np.abs(Q.T @ Q - np.eye(3)).max() <= 1e-12

    def test_zero_matrix_repaired(self):
        Q = orthonormalize(np.zeros((5, 2)), rng=np.random.default_rng(0))
        assert np.abs(Q.T @ Q - np.eye(2)).max() <= 1e-12

    def test_too_many_columns(self):
        with pytest.raises(InputError):
            orthonormalize(np.ones((2, 3)))


class TestSmallSvd:
    def test_diagonal_wide(self):
        U, s, V = small_svd(np.array([[2.0, 0, 0], [0, 1.0, 0]]))
        assert np.allclose(s, [2, 1], atol=1e-12)
        B = (U * s) @ V.T
        assert np.abs(B - [[2, 0, 0], [0, 1, 0]]).max() <= 1e-12

    def test_zero_matrix(self):
        U, s, V = small_svd(np.zeros((3, 5)))
        assert np.array_equal(s, np.zeros(3))
        assert np.abs(U.T @ U - np.eye(3)).max() <= 1e-12
        assert np.abs(V.T @ V - np.eye(3)).max() <= 1e-12

    def test_reconstruction_random_wide(self):
        B = np.random.default_rng(4).standard_normal((20, 200))
        U, s, V = small_svd(B)
        rel = np.linalg.norm(B - (U * s) @ V.T) / np.linalg.norm(B)
        assert rel <= 1e-10
        assert np.abs(V.T @ V - np.eye(20)).max() <= 1e-10

    def test_tall_rejected(self):
        with pytest.raises(InputError):
            small_svd(np.ones((5, 3)))

    def test_nonfinite_rejected(self):
        B = np.ones((2, 4))
        B[0, 0] = np.inf
        with pytest.raises(NumericError):
            small_svd(B)


class TestPseudoinverseApply:
    def test_diagonal(self):
        res = fsvd(dense_op(np.diag([2.0, 4.0])), FsvdParams(k=2, seed=0))
        out = pseudoinverse_apply(res, np.array([1.0, 1.0]))
        assert np.abs(out - [0.5, 0.25]).max() <= 1e-10

    def test_min_norm_single_row(self):
        res = fsvd(dense_op(np.array([[1.0, 1.0]])), FsvdParams(k=1, seed=0))
        out = pseudoinverse_apply(res, np.array([2.0]))
        assert np.abs(out - [1.0, 1.0]).max() <= 1e-10

    def test_matches_dense_pinv(self):
        rng = np.random.default_rng(8)
        M = rng.standard_normal((20, 100))
        Y = rng.standard_normal((20, 3))
        res = fsvd(dense_op(M), FsvdParams(k=20, seed=1))
        W = pseudoinverse_apply(res, Y)
        assert np.abs(W - np.linalg.pinv(M) @ Y).max() <= 1e-6
        assert np.linalg.norm(M @ W - Y) <= 1e-8

    def test_degenerate_rejected(self):
        zero = SvdResult(U=np.eye(2), s=np.zeros(2), V=np.eye(2), k=2,
                         iterations_used=1)
        with pytest.raises(DegenerateInputError):
            pseudoinverse_apply(zero, np.ones(2))

    def test_shape_mismatch(self):
        res = fsvd(dense_op(np.eye(3)), FsvdParams(k=2, seed=0))
        with pytest.raises(InputError):
            pseudoinverse_apply(res, np.ones(4))


class TestReconstructionError:
    def test_exact_rank_k(self):
        rng = np.random.default_rng(11)
        M = rng.standard_normal((30, 4)) @ rng.standard_normal((4, 25))
        res = fsvd(dense_op(M), FsvdParams(k=4, seed=0))
        est = reconstruction_error(dense_op(M), res)
        assert est.method == "exact"
        assert float(est) <= 1e-8

    def test_discarded_singular_value(self):
        U, _ = np.linalg.qr(np.random.default_rng(12).standard_normal((20, 2)))
        V, _ = np.linalg.qr(np.random.default_rng(13).standard_normal((15, 2)))
        M = (U * [5.0, 3.0]) @ V.T
        res = fsvd(dense_op(M), FsvdParams(k=1, seed=0))
        est = reconstruction_error(dense_op(M), res)
        assert abs(float(est) - 3.0) <= 1e-8

    def test_probe_within_twenty_percent(self):
        rng = np.random.default_rng(14)
        M = rng.standard_normal((100, 100))
        op = operator_pair((100, 100), lambda x: M @ x, lambda x: M.T @ x)
        res = fsvd(dense_op(M), FsvdParams(k=10, seed=3))
        exact = reconstruction_error(dense_op(M), res)
        probe = reconstruction_error(op, res, probes=64, seed=0)
        assert probe.method == "probe"
        assert abs(float(probe) - float(exact)) <= 0.2 * float(exact)

    def test_method_validation(self):
        res = fsvd(dense_op(np.eye(3)), FsvdParams(k=1, seed=0))
        with pytest.raises(InputError):
            reconstruction_error(dense_op(np.eye(3)), res, method="guess")
