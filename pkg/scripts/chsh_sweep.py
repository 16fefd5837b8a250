"""Closed-form and Monte Carlo CHSH value as Bob's axis b sweeps 0..180 deg.

a = 0, a' = 90, b' = b + 90 (degrees). Prints CSV to stdout.
"""

import argparse
import math

import numpy as np

from oscket.bell import ChshConfig, chsh_value
from oscket.sampler import estimate_chsh


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--step-deg", type=float, default=7.5)
    p.add_argument("--trials", type=int, default=50_000, help="per correlation pair; 0 skips Monte Carlo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=0, help="tick")
    args = p.parse_args()

    print("b_deg,S,mc_estimate,mc_stderr")
    for j, b in enumerate(np.arange(0.0, 180.0 + 1e-9, args.step_deg).tolist()):
        cfg = ChshConfig.coplanar(0.0, math.pi / 2, math.radians(b), math.radians(b + 90))
        s = chsh_value(cfg, args.n)
        if args.trials:
            mc = estimate_chsh(cfg, args.n, args.trials, seed=args.seed + j)
            print(f"{b:g},{s!r},{mc.estimate!r},{mc.stderr!r}")
        else:
            print(f"{b:g},{s!r},,")


if __name__ == "__main__":
    main()
