"""CSR sparse matrices and the graph matrices the implicit operators are built from."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import InputError


@dataclass(frozen=True, eq=False)
class EdgeList:
    """Edge pairs over ``n_nodes`` nodes, stored as an (m, 2) integer array.

    Duplicate pairs are permitted here; matrix construction collapses them.
    """

    edges: np.ndarray
    n_nodes: int

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", e)
        if self.n_nodes < 0:
            raise InputError("n_nodes must be non-negative")
        if e.size and (e.min() < 0 or e.max() >= self.n_nodes):
            raise InputError(f"edge endpoint outside [0, {self.n_nodes})")

    def __len__(self) -> int:
        return self.edges.shape[0]


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """Immutable row-compressed sparse matrix with float64 values.

    Invariants are checked on construction: monotone ``row_offsets`` framing
    ``values``, column indices in range and strictly increasing within each
    row (no duplicates).
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        offsets = np.asarray(self.row_offsets, dtype=np.int64)
        cols = np.asarray(self.col_indices, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "row_offsets", offsets)
        object.__setattr__(self, "col_indices", cols)
        object.__setattr__(self, "values", vals)

        if self.n_rows < 0 or self.n_cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        if offsets.shape != (self.n_rows + 1,):
            raise InputError("row_offsets must have length n_rows + 1")
        if offsets[0] != 0 or offsets[-1] != len(vals):
            raise InputError("row_offsets must start at 0 and end at nnz")
        if np.any(np.diff(offsets) < 0):
            raise InputError("row_offsets must be non-decreasing")
        if len(cols) != len(vals):
            raise InputError("col_indices and values must have equal length")
        if cols.size:
            if cols.min() < 0 or cols.max() >= self.n_cols:
                raise InputError(f"column index outside [0, {self.n_cols})")
            # strictly increasing within each row (duplicates forbidden)
            row_starts = offsets[:-1][np.diff(offsets) > 0]
            is_start = np.zeros(len(cols), dtype=bool)
            is_start[row_starts] = True
            interior = ~is_start[1:]
            if np.any(np.diff(cols)[interior] <= 0):
                raise InputError("column indices must be strictly increasing within rows")

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @cached_property
    def _scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.values, self.col_indices, self.row_offsets),
            shape=(self.n_rows, self.n_cols),
        )


def _from_scipy(m: sp.csr_matrix) -> CsrMatrix:
    m = m.tocsr()
    m.sort_indices()
    return CsrMatrix(
        n_rows=m.shape[0],
        n_cols=m.shape[1],
        row_offsets=m.indptr.astype(np.int64),
        col_indices=m.indices.astype(np.int64),
        values=m.data.astype(np.float64),
    )


def csr_from_edges(edges: EdgeList, symmetrize: bool = True) -> CsrMatrix:
    """Binary adjacency matrix from an edge list.

    Each (u, v) contributes a 1.0 entry; with ``symmetrize`` the reverse pair
    is added too. Duplicates collapse to a single 1.0; self-loops are kept.
    """
    n = edges.n_nodes
    uv = edges.edges
    if symmetrize and len(uv):
        uv = np.concatenate([uv, uv[:, ::-1]])
    if len(uv) == 0:
        return CsrMatrix(n, n, np.zeros(n + 1, dtype=np.int64),
                         np.zeros(0, dtype=np.int64), np.zeros(0))
    keys = np.unique(uv[:, 0] * np.int64(n) + uv[:, 1])
    rows = keys // n
    cols = keys % n
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
    return CsrMatrix(n, n, offsets, cols, np.ones(len(keys)))


def degree_vector(A: CsrMatrix) -> np.ndarray:
    """Row sums of a square matrix."""
    if A.n_rows != A.n_cols:
        raise InputError("degree_vector expects a square matrix")
    counts = np.diff(A.row_offsets)
    rows = np.repeat(np.arange(A.n_rows), counts)
    return np.bincount(rows, weights=A.values,
                       minlength=A.n_rows).astype(np.float64)


def transition_matrix(A: CsrMatrix) -> CsrMatrix:
    """Row-normalized walk matrix; zero-degree rows stay all-zero."""
    deg = degree_vector(A)
    inv = np.zeros_like(deg)
    np.divide(1.0, deg, out=inv, where=deg > 0)
    scale = np.repeat(inv, np.diff(A.row_offsets))
    return CsrMatrix(A.n_rows, A.n_cols, A.row_offsets, A.col_indices,
                     A.values * scale)


def renormalized_adjacency(A: CsrMatrix) -> CsrMatrix:
    """Self-loop-augmented adjacency scaled symmetrically by inverse sqrt degrees.

    Entry (u, v) becomes (A + I)_{uv} / sqrt((d_u + 1)(d_v + 1)), the standard
    propagation matrix for linear message passing.
    """
    if A.n_rows != A.n_cols:
        raise InputError("renormalized_adjacency expects a square matrix")
    S = (A._scipy + sp.identity(A.n_rows, format="csr")).tocsr()
    S.sort_indices()
    inv_sqrt = 1.0 / np.sqrt(degree_vector(A) + 1.0)
    rows = np.repeat(np.arange(A.n_rows), np.diff(S.indptr))
    vals = S.data * inv_sqrt[rows] * inv_sqrt[S.indices]
    return CsrMatrix(A.n_rows, A.n_cols, S.indptr.astype(np.int64),
                     S.indices.astype(np.int64), vals)


def spmm(A: CsrMatrix, B: np.ndarray) -> np.ndarray:
    """Sparse-times-dense product A @ B in O(nnz * width)."""
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != A.n_cols:
        raise InputError(f"cannot multiply {A.shape} by {B.shape}")
    return A._scipy @ B
