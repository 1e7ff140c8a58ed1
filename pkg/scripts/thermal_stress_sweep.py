#!/usr/bin/env python3
"""Hold the deformation at the thermal state of T* and sweep temperature:
the stress norm dips to zero exactly at the compatibility point T = T*.

Usage: python scripts/thermal_stress_sweep.py [--t-star 340] [--span 60]
"""

import argparse

import numpy as np

from klts.constitutive import ThermalExpansionModel, VolumeMaterialParams, volume_response


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--t-star", type=float, default=340.0)
    parser.add_argument("--span", type=float, default=60.0)
    parser.add_argument("--steps", type=int, default=13)
    args = parser.parse_args()

    params = VolumeMaterialParams(mu0=1.0e6, lam=2.0e6, c1=1.5e6, c2=1.0e-3,
                                  T_ref=293.15, T0=300.0, rho0=1200.0)
    model = ThermalExpansionModel(alpha=1.0e-3 * np.eye(3), theta0=300.0)
    f_star = model.deformation(args.t_star)

    print(f"{'T [K]':>8s} {'|S| [Pa]':>12s} {'s [J/(kg K)]':>14s}")
    for t in np.linspace(args.t_star - args.span, args.t_star + args.span, args.steps):
        resp = volume_response(f_star, float(t), model, params)
        print(f"{t:8.2f} {np.linalg.norm(resp.S):12.4e} {resp.entropy:14.6f}")
    print(f"\nstress-free point: T = {args.t_star} K (deformation equals the thermal map there)")


if __name__ == "__main__":
    main()
