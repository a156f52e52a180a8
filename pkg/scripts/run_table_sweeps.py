#!/usr/bin/env python3
"""Reproduce the three headline tables at desk scale.

Writes results/table_minmax.csv, results/table_lebesgue.csv and
results/table_apweight.csv for n = 2^4 .. 2^12.  Expect a few minutes;
pass --kmax to stop earlier.
"""

import argparse
import os
import sys

from lshapearc.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=int, default=4)
    ap.add_argument("--kmax", type=int, default=12)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)

    os.makedirs(args.outdir, exist_ok=True)
    sweep = f"{args.kmin}..{args.kmax}"
    common = ["--sweep", sweep, "--jobs", str(args.jobs)]
    if args.cache_dir:
        common += ["--cache-dir", args.cache_dir]

    cli_main(["minmax"] + common + ["--out", os.path.join(args.outdir, "table_minmax.csv")])
    print("wrote table_minmax.csv")
    cli_main(["sweep", "--family", "adjusted"] + common
             + ["--out", os.path.join(args.outdir, "table_lebesgue.csv")])
    print("wrote table_lebesgue.csv")
    cli_main(["apweight", "--p", "2,4,8"] + common
             + ["--out", os.path.join(args.outdir, "table_apweight.csv")])
    print("wrote table_apweight.csv")
    return 0


if __name__ == "__main__":
    sys.exit(run())
