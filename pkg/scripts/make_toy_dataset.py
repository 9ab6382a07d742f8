"""Generate a synthetic node-classification dataset on disk.

Writes the directory layout the `classify` command and the dataset-backed
acceptance tests consume: edges.tsv, features.tsv, labels.tsv plus
train/val/test id files. Graphs are planted partitions, features are noisy
one-hot block indicators, labels are the block ids.

    python3 scripts/make_toy_dataset.py --out data/toy --nodes 400 --blocks 4
"""

import argparse
from pathlib import Path

import numpy as np

from fsvd.io import write_dense_tsv, write_edge_list
from fsvd.synthetic import planted_partition_graph


def write_ids(path, ids):
    with open(path, "w", encoding="utf-8") as fh:
        for i in ids:
            fh.write(f"{int(i)}\n")


def make_dataset(out, n, blocks, p_in, p_out, feature_dim, noise,
                 train_per_class, val_fraction, seed):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    edges, labels = planted_partition_graph(n, blocks, p_in, p_out, seed=seed)
    rng = np.random.default_rng(seed + 1)

    dim = max(feature_dim, blocks)
    X = noise * rng.standard_normal((n, dim))
    X[np.arange(n), labels] += 1.0

    perm = rng.permutation(n)
    train = []
    seen = {c: 0 for c in range(blocks)}
    for i in perm:
        if seen[labels[i]] < train_per_class:
            seen[labels[i]] += 1
            train.append(i)
    rest = np.array([i for i in perm if i not in set(train)])
    n_val = max(1, int(round(val_fraction * n)))
    val, test = rest[:n_val], rest[n_val:]

    write_edge_list(out / "edges.tsv", edges)
    write_dense_tsv(out / "features.tsv", X)
    with open(out / "labels.tsv", "w", encoding="utf-8") as fh:
        for i, c in enumerate(labels):
            fh.write(f"{i}\t{int(c)}\n")
    write_ids(out / "train_ids.txt", sorted(train))
    write_ids(out / "val_ids.txt", np.sort(val))
    write_ids(out / "test_ids.txt", np.sort(test))
    print(f"wrote {n} nodes, {edges.edges.shape[0]} edges, {blocks} classes -> {out}")
    print(f"splits: {len(train)} train / {len(val)} val / {len(test)} test")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/toy")
    ap.add_argument("--nodes", type=int, default=400)
    ap.add_argument("--blocks", type=int, default=4)
    ap.add_argument("--p-in", type=float, default=0.1)
    ap.add_argument("--p-out", type=float, default=0.01)
    ap.add_argument("--feature-dim", type=int, default=16)
    ap.add_argument("--noise", type=float, default=0.5)
    ap.add_argument("--train-per-class", type=int, default=5)
    ap.add_argument("--val-fraction", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    make_dataset(args.out, args.nodes, args.blocks, args.p_in, args.p_out,
                 args.feature_dim, args.noise, args.train_per_class,
                 args.val_fraction, args.seed)


if __name__ == "__main__":
    main()
