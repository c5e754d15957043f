#!/usr/bin/env python3
"""Emit the 2(x)N entanglement curves E_r(p) as CSV.

Reproduces the one-parameter family plots: one curve per second spin j,
each zero up to the separability threshold p = 2j/(2j+1) and strictly
increasing above it.

Usage:
    python scripts/entanglement_curves.py --j-list 1/2,1,3/2 --points 201 \
        --out curves.csv
"""

import argparse
import sys

from ri_entropy.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--j-list", default="1/2,1,3/2")
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--out", default="curves.csv")
    args = parser.parse_args()
    return cli_main(["curve", "--family", "2xN", "--j-list", args.j_list,
                     "--points", str(args.points), "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
