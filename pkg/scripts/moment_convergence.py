#!/usr/bin/env python3
"""Print exact scaled moments of S_n against their asymptotic limits.

Shows, for a superdiffusive parameter set, how E[(S_n/n^(2p+r-1))^m]
approaches E[L^m] as n grows: the drift the loose verification budgets
have to absorb.

Usage:
    python scripts/moment_convergence.py [--p 0.6 --q 0.1 --r 0.3 --s 1.0]
"""

import argparse
import sys

from erws.exact_moments import l_moments, mean_S_power
from erws.params import WalkParams, validate_params


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.6)
    ap.add_argument("--q", type=float, default=0.1)
    ap.add_argument("--r", type=float, default=0.3)
    ap.add_argument("--s", type=float, default=1.0)
    args = ap.parse_args()

    params = WalkParams(args.p, args.q, args.r, args.s)
    c = validate_params(params)
    targets = l_moments(params)
    print(f"a={c.a:.4f} b={c.b:.4f} scaling exponent={c.sd_exponent:.4f}")
    print(f"{'n':>9} " + " ".join(f"{'m=' + str(m):>12}" for m in range(1, 5)))
    for n in (10**2, 10**3, 10**4, 10**5, 10**6):
        row = [mean_S_power(params, n, m) / float(n) ** (m * c.sd_exponent)
               for m in range(1, 5)]
        print(f"{n:>9} " + " ".join(f"{v:>12.6f}" for v in row))
    print(f"{'limit':>9} " + " ".join(f"{t:>12.6f}" for t in targets))
    rel = [mean_S_power(params, 10**6, m) / float(10**6) ** (m * c.sd_exponent)
           / targets[m - 1] - 1.0 for m in range(1, 5)]
    print(f"{'drift@1e6':>9} " + " ".join(f"{d:>+12.3%}" for d in rel))
    return 0


if __name__ == "__main__":
    sys.exit(main())
