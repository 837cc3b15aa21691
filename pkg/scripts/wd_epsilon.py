#!/usr/bin/env python3
"""Measure the well-distribution constant of the Hammersley construction.

The interesting finding: the binding rectangle is always a point pair
straddling a binary carry boundary (indices 2^m - g, 2^m + g'), so the exact
epsilon decays roughly like 9/(2n) instead of staying constant.

    python3 scripts/wd_epsilon.py --exps 4 5 6 7 8
"""

import argparse
import sys

import idemrange as ir


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exps", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    ap.add_argument("--d", type=int, default=2)
    args = ap.parse_args()
    print("n epsilon_exact worst_rectangle")
    for exp in args.exps:
        n = 2**exp
        rep = ir.check_well_distributed(
            ir.hammersley_wd(n, args.d), eps=1e-12, mode="exact", max_candidates=10**11
        )
        print(n, rep.epsilon_observed, rep.worst_rectangle)
    return 0


if __name__ == "__main__":
    sys.exit(main())
