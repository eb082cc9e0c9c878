#!/usr/bin/env python3
"""Run all five theorem verifications at their published defaults and write
one JSON report each to --outdir (default ./reports). Pass --scale to shrink
n and R by that factor for a quick desk check.

Usage:
    python scripts/verify_all.py [--outdir reports] [--scale 100] [--threads N]
"""

import argparse
import json
import pathlib
import sys
import time

from erws.verify import VERIFY_DEFAULTS, run_verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="reports")
    ap.add_argument("--scale", type=int, default=1,
                    help="divide n and R by this factor (quick look)")
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    overall_ok = True
    for test, d in VERIFY_DEFAULTS.items():
        n = max(64, d.n // args.scale)
        reps = max(64, d.R // args.scale)
        m_far = None if d.m_far is None else max(100 * n, d.m_far // args.scale)
        t0 = time.monotonic()
        report = run_verify(test, d.params, n, reps, d.seed,
                            m_far=m_far, threads=args.threads)
        elapsed = time.monotonic() - t0
        path = outdir / f"{test}.json"
        path.write_text(json.dumps(report.as_dict(), indent=2) + "\n")
        print(f"[{report.verdict}] {test:16s} n={n} R={reps} ({elapsed:.1f}s) -> {path}")
        overall_ok &= report.verdict == "PASS"
    return 0 if overall_ok else 1


if __name__ == "__main__":
    sys.exit(main())
