#!/usr/bin/env python3
"""Fit the quadratic law of the post-selection probability near orthogonal
selection, for the single photon and for the entangled pair.

Usage: python scripts/delta_probability_scaling.py [--theta RAD]
"""

import argparse
import math

import numpy as np

from weakarrival import Apparatus, bell_weak_arrivals, weak_arrival


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=math.pi / 4)
    args = ap.parse_args()

    deltas = np.geomspace(1e-4, 1e-1, 25)
    single = np.array(
        [
            weak_arrival(
                Apparatus(
                    theta=args.theta,
                    phi=args.theta - math.pi / 2 - d,
                    epsilon=1.0,
                    sigma=1.0,
                )
            ).probability
            for d in deltas
        ]
    )
    pair = np.array(
        [bell_weak_arrivals(args.theta, d, 1.0, "exact").probability for d in deltas]
    )

    print("delta,prob_single,prob_pair")
    for d, p1, p2 in zip(deltas, single, pair):
        print(f"{d:.6g},{p1:.6e},{p2:.6e}")
    s1 = np.polyfit(np.log(deltas), np.log(single), 1)[0]
    s2 = np.polyfit(np.log(deltas), np.log(pair), 1)[0]
    print(f"# log-log slope single photon: {s1:.5f}")
    print(f"# log-log slope photon pair:   {s2:.5f}")


if __name__ == "__main__":
    main()
