"""Readers and writers for the on-disk formats the CLI speaks.

All text, all line-oriented. Parse failures raise ParseError with a 1-based
line number; structural problems (missing files, inconsistent sizes) raise
InputError.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputError, ParseError
from .metrics import EdgeSplit
from .models import EmbeddingModel
from .sparse import CsrMatrix, EdgeList


def _data_lines(path: Path, comment: str = "#"):
    with open(path, "r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, 1):
            stripped = raw.strip()
            if not stripped or stripped.startswith(comment):
                continue
            yield number, stripped


def read_edge_list(path: str | Path, n_nodes: int | None = None) -> EdgeList:
    """Whitespace-separated ``u v`` pairs; ``#`` starts a comment line.

    Node count defaults to one past the largest id seen.
    """
    path = Path(path)
    pairs = []
    for number, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node ids, got {len(parts)} fields", number)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {parts!r}", number) from None
        if u < 0 or v < 0:
            raise ParseError("node ids must be non-negative", number)
        pairs.append((u, v))
    edges = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if n_nodes is None:
        n_nodes = int(edges.max()) + 1 if len(edges) else 0
    return EdgeList(edges, n_nodes)


def write_edge_list(path: str | Path, edges: EdgeList) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in edges.edges:
            fh.write(f"{u}\t{v}\n")


def load_matrix_market(path: str | Path) -> CsrMatrix:
    """Coordinate-format Matrix Market, real or integer, general or symmetric."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = lines[0].strip().lower().split()
    if len(header) != 5 or header[0] != "%%matrixmarket" or header[1] != "matrix":
        raise ParseError("expected '%%MatrixMarket matrix coordinate real general' header", 1)
    _, _, layout, field, symmetry = header
    if layout != "coordinate":
        raise ParseError(f"unsupported layout {layout!r}, only coordinate", 1)
    if field not in ("real", "integer"):
        raise ParseError(f"unsupported field {field!r}, only real or integer", 1)
    if symmetry not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1)

    size = None
    entries = []
    for number in range(2, len(lines) + 1):
        stripped = lines[number - 1].strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if size is None:
            if len(parts) != 3:
                raise ParseError("size line must be 'rows cols nnz'", number)
            try:
                size = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError("non-integer size line", number) from None
            if min(size) < 0:
                raise ParseError("negative dimension", number)
            continue
        if len(parts) != 3:
            raise ParseError("entry must be 'row col value'", number)
        try:
            i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"malformed entry {stripped!r}", number) from None
        if not (1 <= i <= size[0] and 1 <= j <= size[1]):
            raise ParseError(f"index ({i}, {j}) outside {size[0]} x {size[1]}", number)
        entries.append((i - 1, j - 1, v))

    if size is None:
        raise ParseError("missing size line", len(lines))
    rows_n, cols_n, nnz = size
    if len(entries) != nnz:
        raise ParseError(f"declared {nnz} entries but found {len(entries)}", len(lines))

    if symmetry == "symmetric":
        if rows_n != cols_n:
            raise ParseError("symmetric matrix must be square", 1)
        entries.extend((j, i, v) for i, j, v in list(entries) if i != j)

    data = np.asarray(entries, dtype=np.float64).reshape(-1, 3)
    rows = data[:, 0].astype(np.int64)
    cols = data[:, 1].astype(np.int64)
    vals = data[:, 2]
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if len(rows) > 1:
        dup = (np.diff(rows) == 0) & (np.diff(cols) == 0)
        if dup.any():
            at = int(np.flatnonzero(dup)[0])
            raise ParseError(f"duplicate entry at ({rows[at] + 1}, {cols[at] + 1})")
    offsets = np.zeros(rows_n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=rows_n), out=offsets[1:])
    return CsrMatrix(rows_n, cols_n, offsets, cols, vals)


def write_matrix_market(path: str | Path, A: CsrMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write(f"{A.n_rows} {A.n_cols} {A.nnz}\n")
        rows = np.repeat(np.arange(A.n_rows), np.diff(A.row_offsets))
        for i, j, v in zip(rows, A.col_indices, A.values):
            fh.write(f"{i + 1} {j + 1} {v:.17g}\n")


def load_dense_tsv(path: str | Path) -> np.ndarray:
    """Whitespace-separated numeric matrix; every row must have the same width."""
    path = Path(path)
    rows = []
    width = None
    for number, line in _data_lines(path):
        parts = line.split()
        if width is None:
            width = len(parts)
        elif len(parts) != width:
            raise ParseError(f"row has {len(parts)} fields, expected {width}", number)
        try:
            rows.append(np.asarray(parts, dtype=np.float64))
        except ValueError:
            raise ParseError("non-numeric field", number) from None
    if not rows:
        raise ParseError("no data rows", 1)
    return np.vstack(rows)


def write_dense_tsv(path: str | Path, M: np.ndarray) -> None:
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    np.savetxt(path, M, fmt="%.17g", delimiter="\t")


def load_labels(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """``node_id class_id`` rows. Returns (node_ids, class_ids)."""
    table = load_dense_tsv(path)
    if table.shape[1] != 2:
        raise ParseError(f"label rows must be 'node_id class_id', got {table.shape[1]} fields")
    if not np.all(table == np.floor(table)):
        raise ParseError("labels must be integers")
    ids = table[:, 0].astype(np.int64)
    classes = table[:, 1].astype(np.int64)
    if ids.size and (ids.min() < 0 or classes.min() < 0):
        raise ParseError("node and class ids must be non-negative")
    if np.unique(ids).size != ids.size:
        raise ParseError("duplicate node id in labels")
    return ids, classes


def load_ids(path: str | Path) -> np.ndarray:
    """Whitespace-separated node ids, any number per line."""
    ids = []
    for number, line in _data_lines(path):
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise ParseError(f"non-integer id {token!r}", number) from None
            if value < 0:
                raise ParseError("ids must be non-negative", number)
            ids.append(value)
    return np.asarray(ids, dtype=np.int64)


def write_embedding(path: str | Path, model: EmbeddingModel) -> None:
    """One row per node: id, k left coordinates, then k right coordinates."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(model.n_nodes):
            coords = np.concatenate([model.left[i], model.right[i]])
            fh.write(str(i) + "\t" + "\t".join(f"{x:.17g}" for x in coords) + "\n")


def read_embedding(path: str | Path) -> EmbeddingModel:
    table = load_dense_tsv(path)
    if table.shape[1] < 3 or (table.shape[1] - 1) % 2 != 0:
        raise ParseError("embedding rows must be 'id' plus an even number of coordinates")
    ids = table[:, 0].astype(np.int64)
    if not np.array_equal(ids, np.arange(len(ids))):
        raise ParseError("embedding rows must cover node ids 0..n-1 in order")
    k = (table.shape[1] - 1) // 2
    return EmbeddingModel(left=table[:, 1:1 + k].copy(),
                          right=table[:, 1 + k:].copy(), k=k)


def write_predictions(path: str | Path, predicted: np.ndarray) -> None:
    """One ``node_id predicted_class`` row per node."""
    predicted = np.asarray(predicted, dtype=np.int64).reshape(-1)
    with open(path, "w", encoding="utf-8") as fh:
        for i, c in enumerate(predicted):
            fh.write(f"{i}\t{c}\n")


_SPLIT_FILES = {"train_edges": "train_edges.tsv",
                "test_pos": "test_pos.tsv",
                "test_neg": "test_neg.tsv"}


def write_split(directory: str | Path, split: EdgeSplit) -> None:
    """Three edge files plus an index naming them and recording the seed."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for attr, name in _SPLIT_FILES.items():
        write_edge_list(directory / name, getattr(split, attr))
    index = {"seed": split.seed, "n_nodes": split.train_edges.n_nodes}
    index.update(_SPLIT_FILES)
    with open(directory / "index.json", "w", encoding="utf-8") as fh:
        json.dump(index, fh, indent=2)
        fh.write("\n")


def read_split(directory: str | Path) -> EdgeSplit:
    """Load a split directory. Formats and id bounds are checked; the set
    relationships between the three files are taken on trust."""
    directory = Path(directory)
    index_path = directory / "index.json"
    if not index_path.exists():
        raise InputError(f"no index.json in {directory}")
    try:
        with open(index_path, "r", encoding="utf-8") as fh:
            index = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad index.json: {exc}") from None
    for key in (*_SPLIT_FILES, "seed"):
        if key not in index:
            raise ParseError(f"index.json missing {key!r}")
    n_nodes = index.get("n_nodes")
    parts = {}
    for attr in _SPLIT_FILES:
        file_path = directory / str(index[attr])
        if not file_path.exists():
            raise InputError(f"split file {file_path} does not exist")
        parts[attr] = read_edge_list(file_path, n_nodes=n_nodes)
    if n_nodes is None:
        n_nodes = max(e.n_nodes for e in parts.values())
        parts = {attr: EdgeList(e.edges, n_nodes) for attr, e in parts.items()}
    return EdgeSplit(seed=int(index["seed"]), **parts)
