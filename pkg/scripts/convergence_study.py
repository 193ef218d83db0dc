#!/usr/bin/env python3
"""Splitting-order study: energy drift and Morawetz residual vs dt.

Runs the d=1 two-component benchmark at a ladder of time steps and prints
the measured convergence orders (expected ~2 for the symmetric splitting).
"""

import argparse

import numpy as np

from q4nl import (GridSpec, StepPlan, SystemParams, energy, integrate,
                  make_initial)
from q4nl.morawetz import WeightSpec, max_residual, verify_identity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=float, default=0.5)
    ap.add_argument("--dt", type=float, default=4e-3, help="coarsest step")
    ap.add_argument("--levels", type=int, default=3)
    args = ap.parse_args()

    grid = GridSpec(1, 256, 40.0)
    system = SystemParams(N=2, p=2.0, kappa=1,
                          beta=np.array([[1.0, 0.3], [0.3, 0.8]]),
                          lam=np.array([[0.2, 0.1], [0.1, 0.2]]))
    state0 = make_initial("gaussian_packet",
                          {"amplitude": [1.0, 0.8], "sigma": 2.0,
                           "velocity": [[0.5], [-0.3]], "center": [[-3.0], [3.0]]},
                          grid, system, seed=3)
    e0 = energy(state0, grid, system).total
    weight = WeightSpec.quadratic()

    drifts, residuals = [], []
    dt = args.dt
    for _ in range(args.levels):
        samples = []
        final = integrate(state0, grid, system,
                          StepPlan.for_horizon(args.horizon, dt, 1),
                          lambda k, s: samples.append(s))
        drift = abs(energy(final, grid, system).total - e0) / abs(e0)
        resid = max_residual(verify_identity(samples, grid, system, weight))
        drifts.append(drift)
        residuals.append(resid)
        print(f"dt={dt:8.2e}  energy drift={drift:.3e}  morawetz residual={resid:.3e}")
        dt /= 2.0

    for name, series in (("energy", drifts), ("residual", residuals)):
        orders = [np.log2(a / b) for a, b in zip(series[:-1], series[1:])]
        print(f"{name} orders: " + "  ".join(f"{o:.2f}" for o in orders))


if __name__ == "__main__":
    main()
