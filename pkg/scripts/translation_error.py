"""Error of the first-order translation 1 - i p delta against exact translation.

The log-log slope should be close to 2.
"""

import argparse

import numpy as np

from oscket.position import PositionGrid, band_limited_vector, first_order_error, loglog_slope


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grid-L", type=int, default=256)
    p.add_argument("--grid-h", type=float, default=1.0)
    p.add_argument("--modes", type=int, default=4)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    grid = PositionGrid(args.grid_L, args.grid_h)
    v = band_limited_vector(grid, args.modes, seed=args.seed)
    deltas = np.geomspace(1e-3, 1.0, args.points)
    errors = [first_order_error(v, d, grid) for d in deltas]
    print("delta,error_norm")
    for d, e in zip(deltas.tolist(), errors):
        print(f"{d!r},{e!r}")
    print(f"# log-log slope {loglog_slope(deltas, errors):.4f}")


if __name__ == "__main__":
    main()
