"""Time embedding training across graph sizes and report scaling ratios.

Runs the `bench` command over a doubling ladder of node counts, then prints
the measured per-size medians and the ratio between consecutive sizes. Near-
linear scaling shows up as ratios close to 2.

    python3 scripts/bench_scaling.py --sizes 10000,20000,40000 --repeats 5
"""

import argparse
import csv
import io
from contextlib import redirect_stdout

from fsvd.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10000,20000,40000")
    ap.add_argument("--avg-degree", type=float, default=20.0)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--rank", type=int, default=32)
    ap.add_argument("--window", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = cli_main(["bench", "--sizes", args.sizes,
                         "--avg-degree", str(args.avg_degree),
                         "--repeats", str(args.repeats),
                         "--rank", str(args.rank),
                         "--window", str(args.window),
                         "--seed", str(args.seed)])
    if code != 0:
        raise SystemExit(code)

    rows = list(csv.DictReader(io.StringIO(buffer.getvalue())))
    print(f"{'n':>10} {'seconds':>10} {'ratio':>8}")
    previous = None
    for row in rows:
        n, seconds = int(row["n"]), float(row["seconds"])
        ratio = "" if previous is None else f"{seconds / previous:8.2f}"
        print(f"{n:>10} {seconds:>10.3f} {ratio:>8}")
        previous = seconds


if __name__ == "__main__":
    main()
