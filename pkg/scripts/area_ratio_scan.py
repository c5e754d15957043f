#!/usr/bin/env python3
"""Scan the PPT-polygon / simplex area ratio as N grows.

The ratio area(ADA'E) / area(ABC) quantifies how much of the 3(x)N state
simplex is PPT (for odd N: separable); it increases toward 1, which is
the geometric face of the vanishing-entanglement limit for large N.

Usage:
    python scripts/area_ratio_scan.py --max-n 201
"""

import argparse

from ri_entropy.geometry import polygon_area_ratio


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=41)
    parser.add_argument("--step", type=int, default=2)
    args = parser.parse_args()
    print("N,area_ratio")
    for N in range(3, args.max_n + 1, args.step):
        print(f"{N},{polygon_area_ratio(N):.12f}")


if __name__ == "__main__":
    main()
