"""Batch command line: decompose, embed, predict links, classify, sweep, bench.

Exit codes: 0 success, 2 usage, 3 unparseable file, 4 bad input, 5 numerical
failure.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as fio
from .decomposition import FsvdParams, fsvd
from .errors import InputError, NumericError, ParseError
from .linop import WysConfig, csr_op
from .metrics import accuracy, roc_auc, split_edges
from .models import (augment_features, one_hot_labels, predict_labels,
                     score_edges, train_jkn_classifier, train_wys_embedding)
from .sparse import CsrMatrix, csr_from_edges, renormalized_adjacency
from .synthetic import random_regularish_graph

DEFAULT_LINK_WINDOW = 5
DEFAULT_AUGMENT_WINDOW = 1
DEFAULT_LAYERS = 2
LAYER_SEARCH = tuple(range(7))


@dataclass
class RunConfig:
    """Everything a single batch invocation needs; one instance per command."""

    command: str
    matrix: Path | None = None
    edges: Path | None = None
    features: Path | None = None
    labels: Path | None = None
    train_ids: Path | None = None
    val_ids: Path | None = None
    test_ids: Path | None = None
    split_dir: Path | None = None
    out: Path | None = None
    rank: int = 32
    iterations: int = 10
    seed: int = 0
    window: int | None = None
    neg_coef: float = 1.0
    layers: int | None = None
    pca_dim: int = 1000
    augment: bool = True
    aug_rank: int = 32
    decompose_full: bool = False
    symmetrize: bool = True
    num_nodes: int | None = None
    test_fraction: float = 0.2
    save_split: Path | None = None
    param: str | None = None
    values: tuple[int, ...] | None = None
    sizes: tuple[int, ...] = (10000, 20000, 40000)
    avg_degree: float = 20.0
    repeats: int = 3


def _required(value: Path | None, flag: str) -> Path:
    if value is None:
        raise InputError(f"{flag} is required for this command")
    path = Path(value)
    if not path.exists():
        raise InputError(f"{flag}: no such file: {path}")
    return path


def _params(config: RunConfig) -> FsvdParams:
    return FsvdParams(k=config.rank, iterations=config.iterations, seed=config.seed)


def _wys_config(config: RunConfig, default_window: int) -> WysConfig:
    window = config.window if config.window is not None else default_window
    return WysConfig(window=window, neg_coef=config.neg_coef)


def _load_graph(config: RunConfig) -> CsrMatrix:
    edges = fio.read_edge_list(_required(config.edges, "--edges"),
                               n_nodes=config.num_nodes)
    if config.num_nodes is not None and len(edges) and \
            int(edges.edges.max()) >= config.num_nodes:
        raise InputError("--num-nodes smaller than the largest node id")
    return csr_from_edges(edges, symmetrize=config.symmetrize)


def _emit(metrics: dict) -> None:
    for key, value in metrics.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{key}={value}")


def _cmd_svd(config: RunConfig) -> dict:
    A = fio.load_matrix_market(_required(config.matrix, "--matrix"))
    start = time.perf_counter()
    result = fsvd(csr_op(A), _params(config))
    elapsed = time.perf_counter() - start
    if config.out is not None:
        base = str(config.out)
        fio.write_dense_tsv(base + ".U.tsv", result.U)
        fio.write_dense_tsv(base + ".s.tsv", result.s.reshape(1, -1))
        fio.write_dense_tsv(base + ".V.tsv", result.V)
    return {"rows": A.n_rows, "cols": A.n_cols, "rank": result.k,
            "train_seconds": elapsed}


def _cmd_embed(config: RunConfig) -> dict:
    A = _load_graph(config)
    start = time.perf_counter()
    model = train_wys_embedding(A, _wys_config(config, DEFAULT_LINK_WINDOW),
                                _params(config))
    elapsed = time.perf_counter() - start
    if config.out is not None:
        fio.write_embedding(config.out, model)
    return {"n_nodes": model.n_nodes, "rank": model.k, "train_seconds": elapsed}


def _cmd_linkpred(config: RunConfig) -> dict:
    if config.split_dir is not None:
        split = fio.read_split(config.split_dir)
    else:
        A = _load_graph(config)
        split = split_edges(A, config.test_fraction, config.seed)
    if config.save_split is not None:
        fio.write_split(config.save_split, split)

    train_graph = csr_from_edges(split.train_edges, symmetrize=config.symmetrize)
    start = time.perf_counter()
    model = train_wys_embedding(train_graph,
                                _wys_config(config, DEFAULT_LINK_WINDOW),
                                _params(config))
    elapsed = time.perf_counter() - start

    pairs = np.concatenate([split.test_pos.edges, split.test_neg.edges])
    truth = np.concatenate([np.ones(len(split.test_pos), dtype=np.int64),
                            np.zeros(len(split.test_neg), dtype=np.int64)])
    auc = roc_auc(score_edges(model, pairs), truth)
    if config.out is not None:
        fio.write_embedding(config.out, model)
    return {"n_nodes": model.n_nodes, "n_train_edges": len(split.train_edges),
            "n_test_pos": len(split.test_pos), "roc_auc": auc,
            "train_seconds": elapsed}


def _prepare_classify(config: RunConfig):
    A = _load_graph(config)
    n = A.n_rows
    X = fio.load_dense_tsv(_required(config.features, "--features"))
    if X.shape[0] != n:
        raise InputError(f"features have {X.shape[0]} rows for {n} nodes")
    node_ids, classes = fio.load_labels(_required(config.labels, "--labels"))
    train_ids = fio.load_ids(_required(config.train_ids, "--train-ids"))
    val_ids = fio.load_ids(_required(config.val_ids, "--val-ids")) \
        if config.val_ids is not None else None
    test_ids = fio.load_ids(_required(config.test_ids, "--test-ids")) \
        if config.test_ids is not None else None

    labels = one_hot_labels(node_ids, classes, n, labeled_ids=train_ids)
    truth = np.full(n, -1, dtype=np.int64)
    truth[node_ids] = classes
    g = renormalized_adjacency(A)

    augment_seconds = 0.0
    if config.augment:
        start = time.perf_counter()
        wys = _wys_config(config, DEFAULT_AUGMENT_WINDOW)
        emb_params = FsvdParams(k=config.aug_rank, iterations=config.iterations,
                                seed=config.seed)
        embedding = train_wys_embedding(A, wys, emb_params)
        X = augment_features(X, embedding, config.pca_dim, _params(config))
        augment_seconds = time.perf_counter() - start
    return g, X, labels, truth, val_ids, test_ids, augment_seconds


def _train_eval(g, X, labels, layers, params, decompose_full):
    start = time.perf_counter()
    model = train_jkn_classifier(g, X, labels, layers, params,
                                 decompose_full=decompose_full)
    elapsed = time.perf_counter() - start
    predicted = predict_labels(model, g, X)
    return model, predicted, elapsed


def _cmd_classify(config: RunConfig) -> dict:
    g, X, labels, truth, val_ids, test_ids, augment_seconds = \
        _prepare_classify(config)
    params = _params(config)

    if config.layers is not None:
        candidates = [config.layers]
    elif val_ids is not None and val_ids.size:
        candidates = list(LAYER_SEARCH)
    else:
        candidates = [DEFAULT_LAYERS]

    best = None
    for layers in candidates:
        model, predicted, seconds = _train_eval(
            g, X, labels, layers, params, config.decompose_full)
        val_acc = accuracy(predicted, truth, val_ids) \
            if val_ids is not None and val_ids.size else None
        key = val_acc if val_acc is not None else 0.0
        if best is None or key > best[3]:
            best = (model, predicted, seconds, key, val_acc)

    model, predicted, train_seconds, _, val_acc = best
    metrics: dict = {"layers": model.layers}
    if config.augment:
        metrics["pca_dim"] = X.shape[1]
    if val_acc is not None:
        metrics["val_accuracy"] = val_acc
    if test_ids is not None and test_ids.size:
        metrics["accuracy"] = accuracy(predicted, truth, test_ids)
    metrics["train_seconds"] = augment_seconds + train_seconds
    if config.out is not None:
        fio.write_predictions(config.out, predicted)
    return metrics


def _cmd_sweep(config: RunConfig) -> dict:
    aliases = {"L": "layers", "k": "rank"}
    param = aliases.get(config.param, config.param)
    if param not in ("layers", "rank"):
        raise InputError("sweep --param must be 'layers' or 'rank'")
    if not config.values:
        raise InputError("sweep requires --range")

    rows = []
    if param == "layers":
        g, X, labels, truth, val_ids, test_ids, _ = _prepare_classify(config)
        eval_ids = test_ids if test_ids is not None and test_ids.size else val_ids
        if eval_ids is None or not eval_ids.size:
            raise InputError("sweep over layers needs --test-ids or --val-ids")
        header = "layers,accuracy,train_seconds"
        for layers in config.values:
            _, predicted, seconds = _train_eval(
                g, X, labels, layers, _params(config), config.decompose_full)
            rows.append((layers, accuracy(predicted, truth, eval_ids), seconds))
    else:
        if config.split_dir is not None:
            split = fio.read_split(config.split_dir)
        else:
            A = _load_graph(config)
            split = split_edges(A, config.test_fraction, config.seed)
        train_graph = csr_from_edges(split.train_edges,
                                     symmetrize=config.symmetrize)
        pairs = np.concatenate([split.test_pos.edges, split.test_neg.edges])
        truth = np.concatenate([np.ones(len(split.test_pos), dtype=np.int64),
                                np.zeros(len(split.test_neg), dtype=np.int64)])
        header = "rank,roc_auc,train_seconds"
        for rank in config.values:
            params = FsvdParams(k=rank, iterations=config.iterations,
                                seed=config.seed)
            start = time.perf_counter()
            model = train_wys_embedding(
                train_graph, _wys_config(config, DEFAULT_LINK_WINDOW), params)
            seconds = time.perf_counter() - start
            rows.append((rank, roc_auc(score_edges(model, pairs), truth), seconds))

    lines = [header] + [f"{v},{metric:.6g},{seconds:.6g}"
                        for v, metric, seconds in rows]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if config.out is not None:
        Path(config.out).write_text(text, encoding="utf-8")
    return {"rows": rows}


def _cmd_bench(config: RunConfig) -> dict:
    if config.repeats < 1:
        raise InputError("--repeats must be at least 1")
    rows = []
    for index, n in enumerate(config.sizes):
        edges = random_regularish_graph(n, config.avg_degree, config.seed + index)
        A = csr_from_edges(edges, symmetrize=True)
        wys = _wys_config(config, DEFAULT_LINK_WINDOW)
        times = []
        for repeat in range(config.repeats):
            params = FsvdParams(k=config.rank, iterations=config.iterations,
                                seed=config.seed + repeat)
            start = time.perf_counter()
            train_wys_embedding(A, wys, params)
            times.append(time.perf_counter() - start)
        rows.append((n, statistics.median(times)))

    lines = ["n,seconds"] + [f"{n},{seconds:.6g}" for n, seconds in rows]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if config.out is not None:
        Path(config.out).write_text(text, encoding="utf-8")
    return {"rows": rows}


_COMMANDS = {
    "svd": _cmd_svd,
    "embed": _cmd_embed,
    "linkpred": _cmd_linkpred,
    "classify": _cmd_classify,
    "sweep": _cmd_sweep,
    "bench": _cmd_bench,
}


def run(config: RunConfig) -> dict:
    """Execute one batch command, print its metrics, and return them."""
    if config.command not in _COMMANDS:
        raise InputError(f"unknown command {config.command!r}")
    metrics = _COMMANDS[config.command](config)
    if config.command not in ("sweep", "bench"):
        _emit(metrics)
    return metrics


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Either 'a..b' (inclusive) or a comma list like '1,2,4'."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse integer list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsvd",
        description="Matrix-free truncated SVD and closed-form graph models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--rank", type=int, default=32,
                       help="target decomposition rank (default 32)")
        p.add_argument("--iterations", type=int, default=10,
                       help="subspace iterations (default 10)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, help="output path or prefix")

    def graph(p):
        p.add_argument("--edges", type=Path, help="edge list file, 'u v' per line")
        p.add_argument("--num-nodes", type=int,
                       help="override the node count (default 1 + max id)")
        p.add_argument("--no-symmetrize", action="store_true",
                       help="keep edges directed as given")

    def wys(p):
        p.add_argument("--window", type=int,
                       help="walk window C (default 5 for link tasks, 1 for "
                            "classification augmentation)")
        p.add_argument("--neg-coef", type=float, default=1.0,
                       help="penalty weight on non-adjacent pairs (default 1)")

    p = sub.add_parser("svd", help="decompose a Matrix Market file")
    common(p)
    p.add_argument("--matrix", type=Path, required=True)

    p = sub.add_parser("embed", help="train node embeddings on a whole graph")
    common(p)
    graph(p)
    wys(p)

    p = sub.add_parser("linkpred", help="hold out edges, embed, report ROC AUC")
    common(p)
    graph(p)
    wys(p)
    p.add_argument("--split-dir", type=Path, help="read a pre-made split")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--save-split", type=Path,
                   help="write the generated split to this directory")

    p = sub.add_parser("classify", help="semi-supervised node classification")
    common(p)
    graph(p)
    wys(p)
    p.add_argument("--features", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--train-ids", type=Path)
    p.add_argument("--val-ids", type=Path)
    p.add_argument("--test-ids", type=Path)
    p.add_argument("--layers", type=int,
                   help="propagation depth L; tuned on --val-ids when omitted")
    p.add_argument("--pca-dim", type=int, default=1000)
    p.add_argument("--no-augment", action="store_true",
                   help="use raw features without embedding augmentation")
    p.add_argument("--aug-rank", type=int, default=32,
                   help="embedding rank used for augmentation (default 32)")
    p.add_argument("--decompose-full", action="store_true",
                   help="factor all rows and gather labeled ones afterwards")

    p = sub.add_parser("sweep", help="repeat a command over a parameter range")
    common(p)
    graph(p)
    wys(p)
    p.add_argument("--param", choices=("layers", "rank", "L", "k"),
                   required=True)
    p.add_argument("--range", "--values", dest="values", type=str,
                   required=True,
                   help="inclusive range '0..6' or comma list '0,2,4'")
    p.add_argument("--features", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--train-ids", type=Path)
    p.add_argument("--val-ids", type=Path)
    p.add_argument("--test-ids", type=Path)
    p.add_argument("--pca-dim", type=int, default=1000)
    p.add_argument("--no-augment", action="store_true")
    p.add_argument("--aug-rank", type=int, default=32)
    p.add_argument("--decompose-full", action="store_true")
    p.add_argument("--split-dir", type=Path)
    p.add_argument("--test-fraction", type=float, default=0.2)

    p = sub.add_parser("bench", help="time embedding training on synthetic graphs")
    common(p)
    wys(p)
    p.add_argument("--sizes", type=str, default="10000,20000,40000",
                   help="comma list of node counts")
    p.add_argument("--avg-degree", type=float, default=20.0)
    p.add_argument("--repeats", type=int, default=3)

    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=ns.command)
    for name in ("matrix", "edges", "features", "labels", "train_ids",
                 "val_ids", "test_ids", "split_dir", "out", "rank",
                 "iterations", "seed", "window", "neg_coef", "layers",
                 "pca_dim", "aug_rank", "decompose_full", "num_nodes",
                 "test_fraction", "save_split", "param", "avg_degree",
                 "repeats"):
        if hasattr(ns, name):
            setattr(config, name, getattr(ns, name))
    if getattr(ns, "no_symmetrize", False):
        config.symmetrize = False
    if getattr(ns, "no_augment", False):
        config.augment = False
    if getattr(ns, "values", None) is not None:
        config.values = _parse_int_list(ns.values)
    if getattr(ns, "sizes", None) is not None:
        config.sizes = _parse_int_list(ns.sizes)
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        run(config)
    except ParseError as exc:
        print(f"fsvd: parse error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"fsvd: input error: {exc}", file=sys.stderr)
        return 4
    except NumericError as exc:
        print(f"fsvd: numeric error: {exc}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
