#!/usr/bin/env python3
"""Run the full property suite and print a compact margin table.

Usage: python scripts/run_verification.py [--seed N] [--json OUT]
"""

import argparse
import json

from klts.verification import run_suite


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--json", default=None)
    args = parser.parse_args()

    result = run_suite(seed=args.seed)
    for rec in result.records:
        margin = rec.max_error / rec.tolerance
        flag = "PASS" if rec.passed else "FAIL"
        print(f"{flag} {rec.group:>18s}.{rec.name:<34s} "
              f"err={rec.max_error:9.3e} tol={rec.tolerance:7.1e} margin={margin:8.3f}")
    print(f"\noverall: {'PASS' if result.overall_pass else 'FAIL'} "
          f"({len(result.records)} records, seed {args.seed})")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.as_dict() for r in result.records], fh, indent=2, sort_keys=True)
    return 0 if result.overall_pass else 1


if __name__ == "__main__":
    raise SystemExit(main())
