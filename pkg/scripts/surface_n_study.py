#!/usr/bin/env python3
"""How the minimum of the complex-point inequality depends on the root index n.

For a few certified paths, prints delta, m, n_required and the grid minimum
of |V(s, z')| for n = 1, 2, 4, ... up to a few multiples of n_required.  The
bound n > m / (2 delta) is sufficient, not necessary, so many paths already
pass at small n; the shrinking-B path below does not.
"""

import argparse
import sys

import numpy as np

from crpoint.homotopy import HomotopyPath, connect_to_model
from crpoint.pairs import MatrixPair, random_pair
from crpoint.segments import Linear
from crpoint.surface import SurfaceGrid, SurfaceSpec, bounds, flatten, verify_no_new_complex_points


def paths(count: int, seed: int):
    Z = np.zeros((2, 2))
    yield "shrink-B", flatten(HomotopyPath([Linear(MatrixPair(Z, np.eye(2)), MatrixPair(Z, 0.01 * np.eye(2)), "shrink")]))
    for i in range(count):
        p = random_pair((seed, 77, i))
        yield f"random-{i}", SurfaceSpec.from_connect_path(connect_to_model(p)).path


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", type=int, nargs=3, default=(32, 16, 16), metavar=("NS", "NU", "NTHETA"))
    args = ap.parse_args(argv)
    grid = SurfaceGrid(*args.grid)

    for name, flat in paths(args.paths, args.seed):
        spec = SurfaceSpec(flat, 1.0, 1)
        b = bounds(spec, grid)
        print(f"{name}: delta={b.delta:.4f} m={b.m:.3g} n_required={b.n_required}")
        n = 1
        while n <= 4 * b.n_required:
            spec.n = n
            rep = verify_no_new_complex_points(spec, grid, fd_points=0)
            print(f"  n={n:<6d} min|V|={rep.min_inequality:.3e} {'pass' if rep.passed else 'FAIL'}")
            n *= 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
