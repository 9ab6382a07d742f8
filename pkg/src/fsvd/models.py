"""Closed-form graph models on top of the decomposition: embeddings and a classifier."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .decomposition import DROP_TOLERANCE, FsvdParams, SvdResult, fsvd, pseudoinverse_apply
from .errors import DegenerateInputError, InputError
from .linop import WysConfig, centered_op, dense_op, jkn_materialize, wys_operator
from .sparse import CsrMatrix, transition_matrix


@dataclass(frozen=True, eq=False)
class EmbeddingModel:
    """Per-node source and destination embeddings; edge score is their inner product."""

    left: np.ndarray
    right: np.ndarray
    k: int

    def __post_init__(self):
        if self.left.shape != self.right.shape or self.left.ndim != 2:
            raise InputError("left and right embeddings must share an (n, k) shape")
        if self.left.shape[1] != self.k:
            raise InputError("embedding width disagrees with k")

    @property
    def n_nodes(self) -> int:
        return self.left.shape[0]


@dataclass(frozen=True, eq=False)
class LabelMatrix:
    """One-hot labels with the subset of rows that are actually supervised."""

    onehot: np.ndarray
    labeled_ids: np.ndarray

    def __post_init__(self):
        Y = np.asarray(self.onehot, dtype=np.float64)
        ids = np.asarray(self.labeled_ids, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "onehot", Y)
        object.__setattr__(self, "labeled_ids", ids)
        if Y.ndim != 2 or Y.shape[1] < 2:
            raise InputError("label matrix must be n x y with at least two classes")
        if not np.all((Y == 0.0) | (Y == 1.0)):
            raise InputError("label matrix entries must be 0 or 1")
        if ids.size == 0:
            raise InputError("at least one labeled node is required")
        if np.unique(ids).size != ids.size:
            raise InputError("labeled ids contain duplicates")
        if ids.min() < 0 or ids.max() >= Y.shape[0]:
            raise InputError("labeled id outside the label matrix")
        if not np.all(Y[ids].sum(axis=1) == 1.0):
            raise InputError("each labeled row must have exactly one active class")

    @property
    def n_classes(self) -> int:
        return self.onehot.shape[1]


def one_hot_labels(node_ids: np.ndarray, class_ids: np.ndarray, n_nodes: int,
                   labeled_ids: np.ndarray | None = None,
                   n_classes: int | None = None) -> LabelMatrix:
    """Build a LabelMatrix from (node, class) pairs.

    ``labeled_ids`` restricts supervision to a subset of the annotated nodes;
    by default every annotated node counts as labeled.
    """
    node_ids = np.asarray(node_ids, dtype=np.int64).reshape(-1)
    class_ids = np.asarray(class_ids, dtype=np.int64).reshape(-1)
    if node_ids.shape != class_ids.shape:
        raise InputError("node and class arrays must have equal length")
    if node_ids.size and (node_ids.min() < 0 or node_ids.max() >= n_nodes):
        raise InputError("node id outside the graph")
    if class_ids.size and class_ids.min() < 0:
        raise InputError("class ids must be non-negative")
    y = int(class_ids.max()) + 1 if class_ids.size else 0
    if n_classes is not None:
        if n_classes < y:
            raise InputError("n_classes smaller than the largest class id")
        y = n_classes
    Y = np.zeros((n_nodes, max(y, 2)))
    Y[node_ids, class_ids] = 1.0
    if labeled_ids is None:
        labeled_ids = np.unique(node_ids)
    else:
        labeled_ids = np.asarray(labeled_ids, dtype=np.int64).reshape(-1)
        annotated = np.zeros(n_nodes, dtype=bool)
        annotated[node_ids] = True
        if labeled_ids.size and not annotated[labeled_ids].all():
            raise InputError("labeled id has no annotation")
    return LabelMatrix(onehot=Y, labeled_ids=labeled_ids)


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    """Linear weights over concatenated propagation blocks, plus the settings
    needed to rebuild that design matrix at prediction time."""

    weights: np.ndarray
    layers: int
    pca_dim: int | None = None


def train_wys_embedding(A: CsrMatrix, config: WysConfig,
                        params: FsvdParams) -> EmbeddingModel:
    """Factor the implicit walk-context matrix and split the spectrum evenly.

    Both factors absorb sqrt(s), so the score matrix L R^T reproduces the
    rank-k approximation of the context matrix.
    """
    if A.n_rows != A.n_cols:
        raise InputError("adjacency must be square")
    T = transition_matrix(A)
    result = fsvd(wys_operator(T, A, config), params)
    root = np.sqrt(result.s)
    return EmbeddingModel(left=result.U * root, right=result.V * root, k=result.k)


def score_edges(model: EmbeddingModel, pairs: np.ndarray) -> np.ndarray:
    """Inner-product scores for an (m, 2) array of node pairs."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= model.n_nodes):
        raise InputError("query node outside the embedding")
    return np.einsum("ij,ij->i", model.left[pairs[:, 0]], model.right[pairs[:, 1]])


def _solve_rows(svd: SvdResult, rows: np.ndarray, Y: np.ndarray) -> np.ndarray:
    # least-norm solve against a row subset of U, same drop rule as
    # pseudoinverse_apply
    top = svd.s[0] if svd.s.size else 0.0
    keep = svd.s > DROP_TOLERANCE * top if top > 0 else np.zeros(svd.s.shape, dtype=bool)
    if not keep.any():
        raise DegenerateInputError("all singular values fall below the drop tolerance")
    Z = svd.U[rows][:, keep].T @ Y
    Z /= svd.s[keep, None]
    return svd.V[:, keep] @ Z


def train_jkn_classifier(g: CsrMatrix, X: np.ndarray, labels: LabelMatrix,
                         layers: int, params: FsvdParams,
                         decompose_full: bool = False) -> ClassifierModel:
    """Minimum-norm least-squares weights for the linearized propagation model.

    The design matrix [X | gX | ... | g^L X] is restricted to labeled rows and
    pseudo-inverted through the randomized decomposition. ``decompose_full``
    instead factors all rows and gathers the labeled ones afterwards, which
    trades accuracy of the solve for reuse of the full-graph factorization.

    A requested rank beyond min(shape) of the decomposed matrix is quietly
    capped there; past that point the solve is already exact.
    """
    X = np.asarray(X, dtype=np.float64)
    M = jkn_materialize(g, X, layers)
    if labels.onehot.shape[0] != M.shape[0]:
        raise InputError("labels and features disagree on node count")
    ids = labels.labeled_ids
    Y = labels.onehot[ids]
    target = M if decompose_full else M[ids]
    k = min(params.k, *target.shape)
    if k != params.k:
        params = replace(params, k=k)
    svd = fsvd(dense_op(target), params)
    W = _solve_rows(svd, ids, Y) if decompose_full else pseudoinverse_apply(svd, Y)
    return ClassifierModel(weights=W, layers=layers)


def predict_labels(model: ClassifierModel, g: CsrMatrix, X: np.ndarray) -> np.ndarray:
    """Argmax class per node; ties resolve to the lowest class id."""
    M = jkn_materialize(g, X, model.layers)
    if M.shape[1] != model.weights.shape[0]:
        raise InputError(f"design width {M.shape[1]} does not match weights "
                         f"{model.weights.shape[0]}; was the model trained with "
                         f"different layers or feature width?")
    return np.argmax(M @ model.weights, axis=1)


def pca_reduce(X: np.ndarray, target_dim: int, params: FsvdParams) -> np.ndarray:
    """Project rows of X onto the top principal directions of the centered data."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InputError("expected a 2-d array")
    result = fsvd(centered_op(X), replace(params, k=target_dim))
    return result.U * result.s


def augment_features(X: np.ndarray, embedding: EmbeddingModel, target_dim: int,
                     params: FsvdParams) -> np.ndarray:
    """Concatenate features with both embedding factors, then compress by PCA.

    Output width is min(target_dim, d + 2k, n); the PCA rank can never exceed
    either side of the concatenated matrix.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != embedding.n_nodes:
        raise InputError("features and embedding disagree on node count")
    Z = np.hstack([X, embedding.left, embedding.right])
    dim = min(target_dim, Z.shape[1], Z.shape[0])
    if dim < 1:
        raise InputError("input too small to reduce")
    return pca_reduce(Z, dim, params)
