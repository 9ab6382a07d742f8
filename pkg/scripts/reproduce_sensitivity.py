"""Sweep classifier depth L and report accuracy at each setting.

Runs the `sweep` command over propagation depths on a dataset directory
(layout as written by make_toy_dataset.py). Without --data a toy dataset is
generated in a temporary directory first, so the script runs standalone.

    python3 scripts/reproduce_sensitivity.py --data data/cora --range 0..6
"""

import argparse
import sys
import tempfile
from pathlib import Path

from fsvd.cli import main as cli_main

sys.path.insert(0, str(Path(__file__).parent))
from make_toy_dataset import make_dataset  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", default=None, help="dataset directory")
    ap.add_argument("--range", default="0..6", dest="values")
    ap.add_argument("--rank", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-augment", action="store_true")
    args = ap.parse_args()

    tmp = None
    data = args.data
    if data is None:
        tmp = tempfile.TemporaryDirectory()
        data = tmp.name
        make_dataset(data, n=400, blocks=4, p_in=0.1, p_out=0.01,
                     feature_dim=16, noise=0.5, train_per_class=5,
                     val_fraction=0.2, seed=args.seed)

    root = Path(data)
    argv = ["sweep", "--param", "L", "--range", args.values,
            "--edges", str(root / "edges.tsv"),
            "--features", str(root / "features.tsv"),
            "--labels", str(root / "labels.tsv"),
            "--train-ids", str(root / "train_ids.txt"),
            "--val-ids", str(root / "val_ids.txt"),
            "--test-ids", str(root / "test_ids.txt"),
            "--rank", str(args.rank), "--seed", str(args.seed)]
    if args.no_augment:
        argv.append("--no-augment")
    code = cli_main(argv)
    if tmp is not None:
        tmp.cleanup()
    raise SystemExit(code)


if __name__ == "__main__":
    main()
