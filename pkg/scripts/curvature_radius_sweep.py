#!/usr/bin/env python3
"""Sweep sphere radii and report mean/Gaussian curvature against 1/R, 1/R^2.

Usage: python scripts/curvature_radius_sweep.py [--radii 0.5 1 2 4] [--out sweep.csv]
"""

import argparse
import csv

import numpy as np

from klts.surface_geometry import frame, sphere_chart


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--radii", type=float, nargs="+", default=[0.5, 1.0, 2.0, 4.0])
    parser.add_argument("--points", type=int, default=7)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    rows = []
    print(f"{'R':>6s} {'|H|':>12s} {'1/R':>12s} {'kappa_G':>12s} {'1/R^2':>12s} {'max err':>10s}")
    for radius in args.radii:
        chart = sphere_chart(radius)
        lo, hi = chart.domain[:, 0], chart.domain[:, 1]
        worst = 0.0
        for s in np.linspace(0.25, 0.75, args.points):
            u = lo + s * (hi - lo)
            fr = frame(chart, u)
            err = max(abs(abs(fr.mean_curvature) - 1.0 / radius),
                      abs(fr.gauss_curvature - 1.0 / radius ** 2))
            worst = max(worst, err)
            rows.append([radius, u[0], u[1], abs(fr.mean_curvature), fr.gauss_curvature])
        print(f"{radius:6.2f} {abs(fr.mean_curvature):12.8f} {1 / radius:12.8f} "
              f"{fr.gauss_curvature:12.8f} {1 / radius ** 2:12.8f} {worst:10.2e}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["radius", "xi1", "xi2", "abs_H", "kappa_G"])
            writer.writerows(rows)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
