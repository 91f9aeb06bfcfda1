#!/usr/bin/env python3
"""Run the acceptance criteria and write a JSON summary.

    python3 scripts/run_acceptance.py --out results/acceptance.json
    python3 scripts/run_acceptance.py --only 5 6 --scale 0.2
"""

import argparse
import sys
from pathlib import Path

from crpoint.acceptance import run_all
from crpoint.jsonio import dumps


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0, help="fraction of the full sample counts")
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    ap.add_argument("--out", type=Path)
    args = ap.parse_args(argv)

    results = run_all(args.seed, args.scale, only=args.only, report=lambda r: print(r.line(), flush=True))
    ok = all(r.passed and r.within_time for r in results)
    print(f"{sum(r.passed and r.within_time for r in results)}/{len(results)} criteria pass")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(dumps({"seed": args.seed, "scale": args.scale, "pass": ok,
                                   "criteria": [r.to_json() for r in results]}))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
