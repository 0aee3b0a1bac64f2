#!/usr/bin/env python3
"""Monte Carlo demonstration of a negative conditional arrival time.

Just past orthogonal post-selection the conditional mean leaves [0, eps]
entirely; the run confirms the closed form and prints a histogram of the
sampled arrivals (all rarity is in the post-selection, not the samples).

Usage: python scripts/negative_arrival_demo.py [--trials N] [--seed S]
"""

import argparse
import math

from weakarrival import (
    Apparatus,
    RunConfig,
    exact_mean_arrival,
    histogram_csv,
    report_to_json,
    run_single_photon,
    weak_arrival,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=lambda s: int(float(s)), default=2_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--eps-over-sigma", type=float, default=0.05)
    args = ap.parse_args()

    app = Apparatus(
        theta=3 * math.pi / 4 + args.delta,
        phi=math.pi / 4,
        epsilon=args.eps_over_sigma,
        sigma=1.0,
    )
    print(f"# weak value:  {weak_arrival(app).value.real:+.6f}")
    mean, norm_sq = exact_mean_arrival(app)
    print(f"# exact mean:  {mean:+.6f}   success probability: {norm_sq:.6f}")

    report = run_single_photon(
        RunConfig(apparatus=app, n_trials=args.trials, seed=args.seed),
        keep_samples=True,
    )
    print(report_to_json(report))
    print(histogram_csv(report.samples, bins=40), end="")


if __name__ == "__main__":
    main()
