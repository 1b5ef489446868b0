#!/usr/bin/env python3
"""Regenerate every plot-ready dataset in one go.

Writes, per model size, the eigenvalue sweeps, eigenvector overlaps,
analytic+numeric transition probabilities over a log grid of drive rates,
the adiabatic-limit cross-check, and the lift property report.  Output lands
in per-case subdirectories of --out (default ./datasets).

The numeric transition sweeps dominate the runtime (a few minutes for the
full set); --quick trims the grids for a fast smoke run.
"""

import argparse
import os
import sys

from eplz.cli import main as eplz_main


def run(argv):
    code = eplz_main(argv)
    if code != 0:
        sys.exit(f"command failed ({code}): {' '.join(argv)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="datasets")
    ap.add_argument("--quick", action="store_true", help="coarser, faster grids")
    args = ap.parse_args()

    t_grid = "-3:3:121" if args.quick else "-3:3:601"
    alpha_grid = "log:0.1:5:6" if args.quick else "log:0.05:5:15"

    for n in (3, 4):
        out = os.path.join(args.out, f"pt_n{n}")
        run(["spectrum", "--model", "pt", "--n", str(n), "--alpha", "1",
             "--gamma", "1", "--t", t_grid, "--out", out])
        run(["overlaps", "--model", "pt", "--n", str(n), "--alpha", "1",
             "--gamma", "1", "--t", t_grid, "--out", out])
        run(["transitions", "--model", "pt", "--n", str(n), "--gamma", "1",
             "--alpha", alpha_grid, "--both", "--out", out])
        run(["adiabatic", "--n", str(n), "--alpha", "1", "--gamma", "1", "--out", out])

    for n in (2, 3, 4):
        out = os.path.join(args.out, f"hermitian_n{n}")
        run(["spectrum", "--model", "hermitian", "--n", str(n), "--alpha", "1",
             "--v", "1", "--t", t_grid, "--out", out])
        run(["transitions", "--model", "hermitian", "--n", str(n), "--v", "1",
             "--alpha", alpha_grid, "--both", "--out", out])

    out = os.path.join(args.out, "pt_n2")
    run(["transitions", "--model", "pt", "--n", "2", "--gamma", "1",
         "--alpha", "log:0.1:10:20" if not args.quick else "log:0.1:10:5",
         "--both", "--out", out])

    run(["lift-check", "--out", os.path.join(args.out, "lift")])
    print(f"datasets written under {args.out}/")


if __name__ == "__main__":
    main()
