#!/usr/bin/env python3
"""Sweep the envelope separation and watch the conditional mean interpolate
between the weak value (eps << sigma) and the ideal-measurement mean
(eps >> sigma).

Usage: python scripts/weak_limit_convergence.py [--theta RAD] [--phi RAD]
"""

import argparse
import math

import numpy as np

from weakarrival import Apparatus, abl_mean_arrival, exact_mean_arrival, weak_arrival


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=math.pi / 3)
    ap.add_argument("--phi", type=float, default=math.pi / 12)
    args = ap.parse_args()

    probe = Apparatus(theta=args.theta, phi=args.phi, epsilon=1.0, sigma=1.0)
    weak = weak_arrival(probe).value.real  # per unit epsilon
    abl = abl_mean_arrival(probe.pre_state(), probe.post_state(), 1.0)
    print(f"# theta={args.theta:.6f} phi={args.phi:.6f}")
    print(f"# weak value / eps          = {weak:.12f}")
    print(f"# ideal-measurement mean/eps = {abl:.12f}")
    print("eps_over_sigma,exact_mean_over_eps,dev_from_weak,dev_from_ideal")
    for ratio in np.geomspace(1e-3, 30.0, 22):
        app = Apparatus(theta=args.theta, phi=args.phi, epsilon=ratio, sigma=1.0)
        mean = exact_mean_arrival(app).mean / ratio
        print(f"{ratio:.6g},{mean:.12f},{abs(mean - weak):.3e},{abs(mean - abl):.3e}")


if __name__ == "__main__":
    main()
