#!/usr/bin/env python3
"""Levi-form eigenvalue margins against distance from the origin.

Bins the scan points by |q| and reports, per bin, the smallest eigenvalue
(elliptic model) or the second eigenvalue (hyperbolic model).  This shows how
fast positivity degenerates towards the complex point, which the plain
pass/fail scan hides.
"""

import argparse
import sys

import numpy as np

from crpoint import kernel
from crpoint.levi import halton_ball, levi_closed_form


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=float, default=0.05)
    ap.add_argument("--points", type=int, default=7**6)
    ap.add_argument("--bins", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    pts = halton_ball(args.points, args.radius, args.seed)
    r = np.linalg.norm(pts, axis=1)
    edges = np.linspace(0.0, args.radius, args.bins + 1)
    for kind, col in (("elliptic", 2), ("hyperbolic", 1)):
        ev = kernel.herm_eigs_batch(levi_closed_form(kind, pts))
        print(f"{kind}: {'|q| bin':>22} {'points':>7} {'min lambda_' + str(3 - col):>14}")
        for lo, hi in zip(edges, edges[1:]):
            m = (r >= lo) & (r < hi)
            if m.any():
                print(f"  [{lo:.4f}, {hi:.4f})      {int(m.sum()):7d} {ev[m, col].min():14.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
