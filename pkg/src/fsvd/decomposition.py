"""Randomized truncated SVD driven entirely through operator products."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InputError, NumericError
from .linop import LinearOperator

# Singular values below DROP_TOLERANCE times the largest are treated as zero
# when applying the pseudoinverse.
DROP_TOLERANCE = 1e-10

# |R_jj| at or below this fraction of the largest marks a dependent column.
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class FsvdParams:
    """Decomposition settings: target rank, subspace iterations, RNG seed.

    The sketch is drawn with a fixed oversampling factor of two, so the
    working width is min(2k, rows, cols).
    """

    k: int
    iterations: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise InputError("rank k must be at least 1")
        if self.iterations < 1:
            raise InputError("iterations must be at least 1")


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Rank-k factorization M ~ U diag(s) V^T with orthonormal U (r x k), V (c x k)."""

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray
    k: int
    iterations_used: int


def orthonormalize(M: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """Orthonormal basis with as many columns as M, spanning at least span(M).

    Rank-deficient input is repaired: columns whose QR pivot collapses are
    replaced by fresh Gaussian draws and the factorization is retried, so the
    result always has orthonormal columns. Requires columns <= rows.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise InputError("expected a 2-d array")
    r, b = M.shape
    if b > r:
        raise InputError(f"cannot orthonormalize {b} columns in dimension {r}")
    if not np.all(np.isfinite(M)):
        raise NumericError("non-finite values in orthonormalize input")

    work = M
    for _ in range(4):
        Q, R = np.linalg.qr(work)
        diag = np.abs(np.diag(R))
        scale = diag.max() if diag.size else 0.0
        bad = diag <= scale * _RANK_TOL if scale > 0 else np.ones(b, dtype=bool)
        if not bad.any():
            return Q
        if rng is None:
            rng = np.random.default_rng(0)
        if work is M:
            work = M.copy()
        work[:, bad] = rng.standard_normal((r, int(bad.sum())))
    raise NumericError("orthonormalization failed to repair rank deficiency")


def _complete_basis(V: np.ndarray, missing: np.ndarray) -> None:
    """Fill ``missing`` columns of V with unit vectors orthogonal to the rest.

    Deterministic: walks the canonical basis and keeps the first vector whose
    residual after two projection sweeps is comfortably nonzero.
    """
    c = V.shape[0]
    have = np.ones(V.shape[1], dtype=bool)
    have[missing] = False
    for j in missing:
        for t in range(c):
            v = np.zeros(c)
            v[(j + t) % c] = 1.0
            basis = V[:, have]
            v -= basis @ (basis.T @ v)
            v -= basis @ (basis.T @ v)
            norm = np.linalg.norm(v)
            if norm > 1e-3:
                V[:, j] = v / norm
                have[j] = True
                break
        else:
            raise NumericError("could not complete an orthonormal basis")


def small_svd(B: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD of a short wide matrix (p x c, p <= c) via the p x p Gram matrix.

    Returns (U, s, V) with U p x p, s descending, V c x p. Eigenvectors of
    B B^T give U and s; right vectors come from B^T U / s, with columns at
    negligible singular values completed deterministically and the whole V
    re-orthonormalized so downstream orthogonality checks hold even when
    trailing values sit at noise level.
    """
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2:
        raise InputError("expected a 2-d array")
    p, c = B.shape
    if p > c:
        raise InputError(f"expected a wide matrix, got {p} x {c}")
    if not np.all(np.isfinite(B)):
        raise NumericError("non-finite values in small_svd input")

    w, U = np.linalg.eigh(B @ B.T)
    order = np.argsort(w)[::-1]
    s = np.sqrt(np.maximum(w[order], 0.0))
    U = np.ascontiguousarray(U[:, order])

    cutoff = c * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    good = s > cutoff
    V = np.zeros((c, p))
    if good.any():
        V[:, good] = (B.T @ U[:, good]) / s[good]
    if not good.all():
        _complete_basis(V, np.flatnonzero(~good))
    # one QR pass absorbs the O(s[0]/s[i] * eps) drift in marginal columns
    Q, R = np.linalg.qr(V)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return U, s, Q * signs


def _fix_signs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # convention: the largest-magnitude entry of each left vector is positive
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs, V * signs


def fsvd(op: LinearOperator, params: FsvdParams) -> SvdResult:
    """Truncated randomized SVD of an operator seen only through products.

    Subspace iteration on a Gaussian sketch of width min(2k, rows, cols):
    alternate products with the operator and its transpose, re-orthonormalizing
    after each, then decompose the small projected matrix and truncate to k.
    Deterministic for a fixed seed.
    """
    r, c = op.shape
    if r < 1 or c < 1:
        raise InputError("operator must have positive dimensions")
    if params.k > min(r, c):
        raise InputError(f"rank {params.k} exceeds min(shape) = {min(r, c)}")

    rng = np.random.default_rng(params.seed)
    width = min(2 * params.k, r, c)
    op_t = op.transpose()

    Q = rng.standard_normal((c, width))
    for _ in range(params.iterations):
        Q = orthonormalize(_product(op, Q), rng)
        Q = orthonormalize(_product(op_t, Q), rng)
    Q = orthonormalize(_product(op, Q), rng)

    B = _product(op_t, Q).T  # width x c projection of the operator
    U_b, s, V = small_svd(B)
    U = Q @ U_b

    k = params.k
    U, V = _fix_signs(U[:, :k], V[:, :k])
    return SvdResult(U=U, s=s[:k].copy(), V=V, k=k,
                     iterations_used=params.iterations)


def _product(op: LinearOperator, X: np.ndarray) -> np.ndarray:
    Y = np.asarray(op.product(X), dtype=np.float64)
    if Y.shape != (op.shape[0],) + X.shape[1:]:
        raise NumericError(f"operator returned shape {Y.shape}, expected "
                           f"{(op.shape[0],) + X.shape[1:]}")
    if not np.all(np.isfinite(Y)):
        raise NumericError("operator product produced non-finite values")
    return Y


def pseudoinverse_apply(svd: SvdResult, Y: np.ndarray) -> np.ndarray:
    """Least-norm solve V diag(1/s) U^T Y, dropping directions with tiny s.

    Components with s_i below DROP_TOLERANCE times s_1 are zeroed; if nothing
    survives the factorization carries no usable signal and the input is
    rejected.
    """
    Y = np.asarray(Y, dtype=np.float64)
    single = Y.ndim == 1
    Y2 = Y[:, None] if single else Y
    if Y2.ndim != 2 or Y2.shape[0] != svd.U.shape[0]:
        raise InputError(f"right-hand side rows {Y2.shape[0]} do not match U rows {svd.U.shape[0]}")

    top = svd.s[0] if svd.s.size else 0.0
    keep = svd.s > DROP_TOLERANCE * top if top > 0 else np.zeros(svd.s.shape, dtype=bool)
    if not keep.any():
        raise DegenerateInputError("all singular values fall below the drop tolerance")

    Z = svd.U[:, keep].T @ Y2
    Z /= svd.s[keep, None]
    W = svd.V[:, keep] @ Z
    return W[:, 0] if single else W


@dataclass(frozen=True)
class ErrorEstimate:
    """Frobenius-norm residual together with how it was obtained."""

    value: float
    method: str

    def __float__(self) -> float:
        return self.value


def reconstruction_error(op: LinearOperator, svd: SvdResult,
                         method: str = "auto", probes: int = 32,
                         seed: int = 0) -> ErrorEstimate:
    """Frobenius norm of M - U diag(s) V^T.

    Dense-backed operators are measured exactly by streaming identity blocks
    through the product. Implicit operators get a Hutchinson estimate from
    Rademacher probes: E ||(M - approx) z||^2 = ||M - approx||_F^2.
    """
    if method not in ("auto", "exact", "probe"):
        raise InputError(f"unknown method {method!r}")
    if method == "auto":
        method = "exact" if op.matrix is not None else "probe"

    r, c = op.shape
    US = svd.U * svd.s

    if method == "exact":
        total = 0.0
        block = 512
        for start in range(0, c, block):
            stop = min(start + block, c)
            eye = np.zeros((c, stop - start))
            eye[np.arange(start, stop), np.arange(stop - start)] = 1.0
            resid = _product(op, eye) - US @ svd.V[start:stop].T
            total += float(np.sum(resid * resid))
        return ErrorEstimate(value=float(np.sqrt(total)), method="exact")

    if probes < 1:
        raise InputError("probes must be at least 1")
    rng = np.random.default_rng(seed)
    Z = rng.integers(0, 2, size=(c, probes)).astype(np.float64) * 2.0 - 1.0
    resid = _product(op, Z) - US @ (svd.V.T @ Z)
    mean_sq = float(np.mean(np.sum(resid * resid, axis=0)))
    return ErrorEstimate(value=float(np.sqrt(mean_sq)), method="probe")
