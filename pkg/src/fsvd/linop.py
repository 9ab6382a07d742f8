"""Implicit linear operators: the matrices the decomposition touches only via products."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError
from .sparse import CsrMatrix, spmm


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A matrix known only through its action.

    ``product`` maps a vector of length shape[1], or a (shape[1], b) block, to
    the image under the matrix. ``transpose`` returns the adjoint operator;
    the pair is built together so transposing twice gives back the original.
    ``matrix`` is set when the operator wraps an explicit dense array, which
    lets downstream code choose exact paths.
    """

    shape: tuple[int, int]
    product: Callable[[np.ndarray], np.ndarray]
    transpose: Callable[[], "LinearOperator"]
    matrix: np.ndarray | None = None


def operator_pair(shape: tuple[int, int],
                  forward: Callable[[np.ndarray], np.ndarray],
                  backward: Callable[[np.ndarray], np.ndarray],
                  matrix: np.ndarray | None = None) -> LinearOperator:
    """Wire a product and its adjoint into mutually transposed operators."""
    r, c = shape
    if r < 0 or c < 0:
        raise InputError("operator shape must be non-negative")
    pair: dict[str, LinearOperator] = {}
    fwd = LinearOperator(shape=(r, c), product=forward,
                         transpose=lambda: pair["t"], matrix=matrix)
    bwd = LinearOperator(shape=(c, r), product=backward,
                         transpose=lambda: pair["f"],
                         matrix=None if matrix is None else matrix.T)
    pair["f"] = fwd
    pair["t"] = bwd
    return fwd


def _checked(x: np.ndarray, length: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2) or x.shape[0] != length:
        raise InputError(f"operand of shape {x.shape} does not match operator width {length}")
    return x


def dense_op(M: np.ndarray) -> LinearOperator:
    """Wrap an explicit dense matrix."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise InputError("dense_op expects a 2-d array")
    r, c = M.shape
    return operator_pair((r, c),
                         lambda x: M @ _checked(x, c),
                         lambda x: M.T @ _checked(x, r),
                         matrix=M)


def csr_op(A: CsrMatrix) -> LinearOperator:
    """Wrap a sparse matrix; the adjoint multiplies by the transpose built once."""
    At = A._scipy.T.tocsr()
    return operator_pair(A.shape,
                         lambda x: spmm(A, x),
                         lambda x: At @ _checked(x, A.n_rows))


def centered_op(X: np.ndarray) -> LinearOperator:
    """Operator for X minus its column means, without materializing the shift.

    Forward: Xv - mu (1^T v). Adjoint: X^T u - mu^T (1^T u) broadcast over columns.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InputError("centered_op expects a 2-d array")
    n, d = X.shape
    mu = X.mean(axis=0) if n else np.zeros(d)

    def forward(v):
        v = _checked(v, d)
        return X @ v - np.outer(np.ones(n), mu @ v) if v.ndim == 2 else X @ v - np.ones(n) * (mu @ v)

    def backward(u):
        u = _checked(u, n)
        colsum = u.sum(axis=0)
        return X.T @ u - np.outer(mu, colsum) if u.ndim == 2 else X.T @ u - mu * colsum

    return operator_pair((n, d), forward, backward)


@dataclass(frozen=True)
class WysConfig:
    """Walk-context factorization settings.

    ``window`` is the walk length C; ``coeffs`` weight each power of the
    transition matrix and default to the descending staircase C, C-1, ..., 1.
    ``neg_coef`` scales the penalty on non-adjacent pairs.
    """

    window: int
    neg_coef: float = 1.0
    coeffs: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.window < 1:
            raise InputError("window must be at least 1")
        if not np.isfinite(self.neg_coef) or self.neg_coef < 0:
            raise InputError("neg_coef must be finite and non-negative")
        if self.coeffs is None:
            staircase = tuple(float(self.window - i) for i in range(self.window))
            object.__setattr__(self, "coeffs", staircase)
        else:
            coeffs = tuple(float(c) for c in self.coeffs)
            if len(coeffs) != self.window:
                raise InputError("coeffs must have one weight per window step")
            if not all(np.isfinite(c) for c in coeffs):
                raise InputError("coeffs must be finite")
            object.__setattr__(self, "coeffs", coeffs)


def wys_operator(T: CsrMatrix, A: CsrMatrix, config: WysConfig) -> LinearOperator:
    """Implicit walk-context matrix: sum_i c_i T^i - neg_coef * (ones - A).

    A product costs ``window`` sparse multiplies plus one, O(C * nnz + n) per
    vector, and never materializes the dense all-ones term.
    """
    n = T.n_rows
    if T.n_rows != T.n_cols or A.n_rows != A.n_cols:
        raise InputError("wys_operator expects square matrices")
    if A.n_rows != n:
        raise InputError("transition and adjacency sizes differ")
    Tt = T._scipy.T.tocsr()
    At = A._scipy.T.tocsr()
    lam = config.neg_coef
    coeffs = config.coeffs

    def _apply(walk, adj, v):
        v = _checked(v, n)
        acc = np.zeros_like(v)
        w = v
        for c in coeffs:
            w = walk @ w
            acc += c * w
        ones_term = np.ones(n)[:, None] * v.sum(axis=0) if v.ndim == 2 else np.ones(n) * v.sum()
        return acc - lam * ones_term + lam * (adj @ v)

    return operator_pair((n, n),
                         lambda v: _apply(T._scipy, A._scipy, v),
                         lambda v: _apply(Tt, At, v))


def jkn_materialize(g: CsrMatrix, X: np.ndarray, layers: int) -> np.ndarray:
    """Concatenate X with its first ``layers`` propagations: [X | gX | ... | g^L X]."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InputError("features must be a 2-d array")
    if g.n_rows != g.n_cols or g.n_rows != X.shape[0]:
        raise InputError("propagation matrix and features disagree on node count")
    if layers < 0:
        raise InputError("layers must be non-negative")
    blocks = [X]
    H = X
    for _ in range(layers):
        H = spmm(g, H)
        blocks.append(H)
    return np.hstack(blocks)
