"""Shared oracles and strategies. Oracles here are intentionally naive:
dense loops and brute-force counts that the fast paths are measured against."""

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fsvd import CsrMatrix, EdgeList, csr_from_edges

settings.register_profile(
    "suite", deadline=None, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


def densify(A: CsrMatrix) -> np.ndarray:
    """Entry-by-entry dense copy, no vectorized shortcuts."""
    out = np.zeros((A.n_rows, A.n_cols))
    for row in range(A.n_rows):
        for idx in range(A.row_offsets[row], A.row_offsets[row + 1]):
            out[row, A.col_indices[idx]] += A.values[idx]
    return out


def dense_transition(A_dense: np.ndarray) -> np.ndarray:
    deg = A_dense.sum(axis=1)
    out = np.zeros_like(A_dense)
    for i in range(len(A_dense)):
        if deg[i] > 0:
            out[i] = A_dense[i] / deg[i]
    return out


def dense_wys_matrix(A_dense: np.ndarray, coeffs, neg_coef: float) -> np.ndarray:
    """Explicit walk-context matrix: sum_i c_i T^i - lam (J - A)."""
    n = len(A_dense)
    T = dense_transition(A_dense)
    M = np.zeros((n, n))
    P = np.eye(n)
    for c in coeffs:
        P = P @ T
        M += c * P
    return M - neg_coef * (np.ones((n, n)) - A_dense)


def auc_bruteforce(scores, labels) -> float:
    """O(n^2) pairwise count: wins + half-ties over all pos/neg pairs."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = 0
    ties = 0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1
            elif p == q:
                ties += 1
    return (wins + 0.5 * ties) / (len(pos) * len(neg))


def assert_operator_probes(op, rng, tol=1e-10):
    """Linearity and transpose-consistency checks from the operator contract."""
    r, c = op.shape
    x = rng.standard_normal(c)
    y = rng.standard_normal(c)
    a, b = rng.standard_normal(2)
    lhs = op.product(a * x + b * y)
    rhs = a * op.product(x) + b * op.product(y)
    scale = max(1.0, float(np.abs(rhs).max()) if rhs.size else 1.0)
    assert np.abs(lhs - rhs).max() <= tol * scale

    adj = op.transpose()
    assert adj.shape == (c, r)
    u = rng.standard_normal(r)
    left = float(u @ op.product(x))
    right = float(x @ adj.product(u))
    assert abs(left - right) <= tol * max(1.0, abs(left), abs(right))
    assert adj.transpose().shape == op.shape


def random_graph(rng: np.random.Generator, n: int, p: float) -> CsrMatrix:
    mask = np.triu(rng.random((n, n)) < p, 1)
    iu, ju = np.nonzero(mask)
    return csr_from_edges(EdgeList(np.stack([iu, ju], axis=1), n),
                          symmetrize=True)


@st.composite
def graph_strategy(draw, min_n=1, max_n=30):
    n = draw(st.integers(min_n, max_n))
    p = draw(st.floats(0.0, 0.6))
    seed = draw(st.integers(0, 2**31 - 1))
    return random_graph(np.random.default_rng(seed), n, p)


@st.composite
def matrix_strategy(draw, max_rows=40, max_cols=40):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    seed = draw(st.integers(0, 2**31 - 1))
    return np.random.default_rng(seed).standard_normal((r, c))
