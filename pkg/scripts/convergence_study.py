#!/usr/bin/env python3
"""Convergence study: fixed-step RK4 order against the exact propagator,
and the shrink of the route disagreement under step doubling."""

import argparse

import numpy as np

from ptgeom.evolution import evolve
from ptgeom.models import OscillatorModel
from ptgeom.numerics import blas_threads
from ptgeom.phases import phase_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ratio", type=float, default=0.3)
    ap.add_argument("--truncation", type=int, default=40)
    args = ap.parse_args()

    model = OscillatorModel(n=args.truncation, omega_d=args.ratio, delta=1.0)
    H, W, path, psi0 = model.pt_scenario()
    exact_end = model.propagator(model.tau) @ psi0

    print("RK4 end-state error vs the exact time-ordered propagator:")
    print(f"{'steps':>7} {'error':>12} {'ratio':>8}")
    prev = None
    with blas_threads(1):
        for steps in (50, 100, 200, 400):
            rec = evolve(H, W, path, psi0, steps, refine_on_drift=False)
            err = float(np.linalg.norm(rec.states[-1] - exact_end))
            ratio = f"{prev/err:8.1f}" if prev else "       -"
            print(f"{steps:7d} {err:12.3e} {ratio}")
            prev = err

        print("\nroute disagreement under step doubling:")
        print(f"{'steps':>7} {'spread':>12} {'ratio':>8}")
        prev = None
        for steps in (400, 800, 1600):
            rec = evolve(H, W, path, psi0, steps)
            spread = phase_report(rec, H).route_spread()
            ratio = f"{prev/spread:8.1f}" if prev else "       -"
            print(f"{steps:7d} {spread:12.3e} {ratio}")
            prev = spread


if __name__ == "__main__":
    main()
