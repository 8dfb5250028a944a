#!/usr/bin/env python3
"""Desk sweep of k-subset families: exact maxima and (strong) EKR verdicts.

Prints one row per (n, k) with the computed maximum intersecting-subfamily
size, the star bound C(n-1, k-1), and the verdict, for every 2 <= k and
2k <= n <= n_max.
"""

import argparse
import time
from math import comb

from ekrcheck import check_strong_ekr, k_subsets, max_intersecting


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--k-max", type=int, default=5)
    args = ap.parse_args()

    print(f"{'n':>3} {'k':>3} {'members':>8} {'max':>6} {'C(n-1,k-1)':>11} "
          f"{'verdict':>14} {'secs':>7}")
    for k in range(2, args.k_max + 1):
        for n in range(2 * k, args.n_max + 1):
            fam = k_subsets(n, k)
            t0 = time.perf_counter()
            top = max_intersecting(fam)
            verdict = check_strong_ekr(fam)
            dt = time.perf_counter() - t0
            marker = "" if top.size == comb(n - 1, k - 1) else "  <-- MISMATCH"
            print(f"{n:>3} {k:>3} {len(fam.members):>8} {top.size:>6} "
                  f"{comb(n - 1, k - 1):>11} {verdict.status:>14} {dt:>7.2f}"
                  f"{marker}")


if __name__ == "__main__":
    main()
