"""Deterministic random-graph generators for benchmarks, scripts, and tests."""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .sparse import EdgeList


def _sample_distinct_pairs(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m distinct canonical pairs (u < v) drawn uniformly, by batched rejection."""
    capacity = n * (n - 1) // 2
    if m > capacity:
        raise InputError(f"requested {m} edges but only {capacity} pairs exist")
    taken: set[int] = set()
    chosen: list[int] = []
    while len(chosen) < m:
        batch = max(4 * (m - len(chosen)), 64)
        u = rng.integers(0, n, size=batch)
        v = rng.integers(0, n, size=batch)
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = (lo * np.int64(n) + hi)[lo != hi]
        for key in keys:
            k = int(key)
            if k not in taken:
                taken.add(k)
                chosen.append(k)
                if len(chosen) == m:
                    break
    keys = np.asarray(chosen, dtype=np.int64)
    return np.stack([keys // n, keys % n], axis=1)


def random_regularish_graph(n: int, avg_degree: float, seed: int) -> EdgeList:
    """Uniform random graph with the requested average degree (n * d / 2 edges)."""
    if n < 2:
        raise InputError("need at least two nodes")
    if avg_degree <= 0 or avg_degree >= n:
        raise InputError("average degree must lie in (0, n)")
    m = max(1, int(round(n * avg_degree / 2)))
    rng = np.random.default_rng(seed)
    return EdgeList(_sample_distinct_pairs(n, m, rng), n)


def planted_partition_graph(n: int, n_blocks: int, p_in: float, p_out: float,
                            seed: int) -> tuple[EdgeList, np.ndarray]:
    """Blocky random graph: dense inside each of ``n_blocks`` groups, sparse across.

    Returns the edge list and the per-node block assignment. With p_in well
    above p_out the adjacency has ``n_blocks`` dominant singular values, which
    makes the family useful for spectral accuracy checks.
    """
    if n_blocks < 1 or n < n_blocks:
        raise InputError("need at least one node per block")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise InputError("expected 0 <= p_out <= p_in <= 1")
    rng = np.random.default_rng(seed)
    # balanced assignment: block sizes differ by at most one
    blocks = np.sort(np.arange(n) % n_blocks)

    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(blocks[iu] == blocks[ju], p_in, p_out)
    mask = rng.random(len(iu)) < prob
    edges = np.stack([iu[mask], ju[mask]], axis=1)
    return EdgeList(edges, n), blocks
