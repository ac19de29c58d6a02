#!/usr/bin/env python3
"""Convergence of the erf approximation to the exact sphere significand CDF.

Tabulates sup_s |exact_n(s) - erf_n(s)| over a significand grid for a
sweep of dimensions, together with the observed decay rate between
consecutive rows. The gap should shrink roughly like 1/n.

Usage:
    python scripts/erf_gap_table.py --dims 100,300,1000,3000,10000,30000
"""

import argparse
import math
import sys

import numpy as np

from haar_digits.sphere import SphereErf, SphereExact


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="100,300,1000,3000,10000,30000")
    parser.add_argument("--base", type=int, default=10)
    parser.add_argument("--points", type=int, default=99, help="grid points")
    args = parser.parse_args(argv)

    base = args.base
    dims = [int(d) for d in args.dims.split(",") if d]
    grid = np.array(
        [1.0 + (j * (base - 1)) / args.points for j in range(1, args.points + 1)]
    )

    print(f"# sup-gap between exact and erf CDF on {args.points} grid points, base {base}")
    print(f"{'n':>8}  {'sup gap':>12}  {'n * gap':>10}  {'rate vs prev':>12}")
    prev = None
    for n in dims:
        exact = np.asarray(SphereExact(base=base, n=n).cdf(grid), dtype=float)
        approx = np.asarray(SphereErf(base=base, n=n).cdf(grid), dtype=float)
        gap = float(np.max(np.abs(exact - approx)))
        if prev is None:
            rate = ""
        else:
            n0, g0 = prev
            rate = f"{math.log(g0 / gap) / math.log(n / n0):11.3f}"
        print(f"{n:8d}  {gap:12.3e}  {n * gap:10.4f}  {rate:>12}")
        prev = (n, gap)
    return 0


if __name__ == "__main__":
    sys.exit(main())
