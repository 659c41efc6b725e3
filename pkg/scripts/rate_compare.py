"""Write the rate-comparison CSV (p, scheme, metric, depth, value) for a p-grid.

    python3 scripts/rate_compare.py --out rates.csv --depth 6
"""
import argparse
import sys

from peres.analysis import compare_csv, default_grid
from peres.extractors import builtin

DEFAULT = "peres2,peres3bit,peres4bit_e4,dijkstra3"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--schemes", default=DEFAULT)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()
    text = compare_csv([builtin(n) for n in args.schemes.split(",")],
                       default_grid(args.step), args.depth)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
