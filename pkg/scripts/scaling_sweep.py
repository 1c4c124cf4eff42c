#!/usr/bin/env python3
"""Size sweep for the 2-means CSP solver against brute force.

Writes one CSV row per (n, kernel) with domain sizes, query counts, MM
operation counts of the solver and of a full-domain product probe, and wall
times.  Example:

    python3 scripts/scaling_sweep.py --sizes 6,9,12,15 --kernels naive,strassen --out sweep.csv
"""
from __future__ import annotations

import argparse
import csv
import sys

from clustercut.cli import BENCH_FIELDS, run_bench


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="6,9,12,15")
    ap.add_argument("--kernels", default="naive,strassen,bitpacked")
    ap.add_argument("--crossover", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--coord-max", type=int, default=3)
    ap.add_argument("--out")
    args = ap.parse_args()

    sizes = [int(x) for x in args.sizes.split(",")]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    for kernel in args.kernels.split(","):
        rows = run_bench(sizes, kernel, args.crossover, args.seed, args.d, args.coord_max)
        writer.writerows(rows)
        print(f"{kernel}: fitted probe exponent {rows[0]['fitted_exponent']}", file=sys.stderr)
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
