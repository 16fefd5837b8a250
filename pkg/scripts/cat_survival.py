"""Closed-form vs simulated survival of the tick-driven cat process."""

import argparse
import math

from oscket.cat import CatConfig, empirical_survival_curve, expected_death_tick, simulate_death_ticks, survival_curve


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--omega-pi", type=float, default=1.0)
    p.add_argument("--phi-pi", type=float, default=0.25)
    p.add_argument("--ticks", type=int, default=20)
    p.add_argument("--runs", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    config = CatConfig(args.omega_pi * math.pi, args.phi_pi * math.pi, args.ticks)
    closed = survival_curve(config)
    deaths = simulate_death_ticks(config, args.runs, seed=args.seed, workers=args.workers)
    empirical = empirical_survival_curve(deaths, args.ticks)

    print("tick,survival_closed,survival_empirical,binomial_stderr")
    for n, (c, e) in enumerate(zip(closed.tolist(), empirical.tolist())):
        print(f"{n},{c!r},{e!r},{math.sqrt(c * (1 - c) / args.runs)!r}")
    summary = expected_death_tick(config)
    print(f"# expected death tick {summary.mean}, survivor mass {summary.survivor_mass:.3e}")


if __name__ == "__main__":
    main()
