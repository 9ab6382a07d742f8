"""Evaluation: ranking and classification metrics, and edge splits for link prediction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, MetricUndefinedError
from .sparse import CsrMatrix, EdgeList


def roc_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Area under the ROC curve via the rank-sum identity.

    Ties get the midrank. Midranks of float scores are half-integers, so the
    accumulated rank sum is exact in float64 and the result matches the
    quadratic count of (wins + 0.5 * ties) / (pos * neg) bit for bit.
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if scores.shape != labels.shape:
        raise InputError("scores and labels must have equal length")
    if not np.all(np.isfinite(scores)):
        raise InputError("scores must be finite")
    pos = labels == 1
    neg = labels == 0
    if not np.all(pos | neg):
        raise InputError("labels must be 0 or 1")
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    if n_pos == 0 or n_neg == 0:
        raise MetricUndefinedError("ROC AUC needs both a positive and a negative")

    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    # midrank for each tie group: average of first and last 1-based rank
    boundaries = np.flatnonzero(np.diff(sorted_scores) != 0) + 1
    starts = np.concatenate(([0], boundaries))
    stops = np.concatenate((boundaries, [len(scores)]))
    for a, b in zip(starts, stops):
        ranks[order[a:b]] = 0.5 * ((a + 1) + b)
    rank_sum = ranks[pos].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def accuracy(predicted: np.ndarray, actual: np.ndarray,
             eval_ids: np.ndarray | None = None) -> float:
    """Fraction of matching labels, optionally restricted to eval_ids."""
    predicted = np.asarray(predicted).reshape(-1)
    actual = np.asarray(actual).reshape(-1)
    if predicted.shape != actual.shape:
        raise InputError("prediction and truth must have equal length")
    if eval_ids is not None:
        ids = np.asarray(eval_ids, dtype=np.int64).reshape(-1)
        if ids.size == 0:
            raise MetricUndefinedError("empty evaluation set")
        if ids.min() < 0 or ids.max() >= len(predicted):
            raise InputError("evaluation id out of range")
        predicted = predicted[ids]
        actual = actual[ids]
    if len(predicted) == 0:
        raise MetricUndefinedError("empty evaluation set")
    return float(np.mean(predicted == actual))


@dataclass(frozen=True, eq=False)
class EdgeSplit:
    """Train edges plus held-out positives and sampled negatives.

    Pairs are canonical (u < v). Constructed by split_edges the three sets are
    mutually disjoint; splits read back from disk are only format-checked.
    """

    train_edges: EdgeList
    test_pos: EdgeList
    test_neg: EdgeList
    seed: int


def _canonical_pairs(A: CsrMatrix) -> np.ndarray:
    """Unique undirected non-loop pairs (u, v), u < v, from the stored entries."""
    rows = np.repeat(np.arange(A.n_rows), np.diff(A.row_offsets))
    cols = A.col_indices
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    off_diag = lo != hi
    keys = np.unique(lo[off_diag] * np.int64(A.n_cols) + hi[off_diag])
    return np.stack([keys // A.n_cols, keys % A.n_cols], axis=1)


def split_edges(A: CsrMatrix, test_fraction: float, seed: int) -> EdgeSplit:
    """Hold out a fraction of undirected edges plus an equal count of non-edges.

    Negatives are rejection-sampled uniformly from the canonical non-edges;
    sampling is deterministic for a fixed seed and aborts if the graph is too
    dense to supply enough of them.
    """
    if A.n_rows != A.n_cols:
        raise InputError("split_edges expects a square adjacency")
    if not 0.0 < test_fraction < 1.0:
        raise InputError("test_fraction must lie strictly between 0 and 1")
    n = A.n_rows
    pairs = _canonical_pairs(A)
    m = len(pairs)
    if m < 2:
        raise InputError("need at least two undirected edges to split")

    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    n_test = int(round(test_fraction * m))
    n_test = max(1, min(n_test, m - 1))
    test_pos = pairs[order[:n_test]]
    train = pairs[order[n_test:]]

    capacity = n * (n - 1) // 2 - m
    if capacity < n_test:
        raise InputError(f"graph too dense: only {capacity} non-edges for "
                         f"{n_test} requested negatives")

    edge_keys = np.sort(pairs[:, 0] * np.int64(n) + pairs[:, 1])
    taken: set[int] = set()
    chosen: list[int] = []
    budget = 200 * n_test + 1000
    while len(chosen) < n_test and budget > 0:
        batch = min(budget, max(4 * (n_test - len(chosen)), 64))
        budget -= batch
        u = rng.integers(0, n, size=batch)
        v = rng.integers(0, n, size=batch)
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = lo * np.int64(n) + hi
        ok = lo != hi
        pos = np.searchsorted(edge_keys, keys)
        pos = np.minimum(pos, len(edge_keys) - 1)
        ok &= edge_keys[pos] != keys
        for key in keys[ok]:
            k = int(key)
            if k not in taken:
                taken.add(k)
                chosen.append(k)
                if len(chosen) == n_test:
                    break
    if len(chosen) < n_test:
        raise InputError("negative sampling exhausted its budget; graph too dense")

    neg_keys = np.asarray(chosen, dtype=np.int64)
    test_neg = np.stack([neg_keys // n, neg_keys % n], axis=1)
    return EdgeSplit(train_edges=EdgeList(train, n),
                     test_pos=EdgeList(test_pos, n),
                     test_neg=EdgeList(test_neg, n),
                     seed=seed)
