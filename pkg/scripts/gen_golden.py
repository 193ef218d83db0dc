#!/usr/bin/env python3
"""Generate the golden CSV bundle consumed by the plotting frontend's tests.

Writes a contained free-dispersion run (decay sample), a two-component
nonlinear run (conservation sample), and a scattering pullback report into
frontend/golden/.
"""

import argparse
from pathlib import Path

from q4nl.cli import cmd_scatter, run_simulation
from q4nl.config import RunConfig

FREE_RUN = {
    "grid": {"d": 1, "n": 256, "L": 40.0},
    "system": {"N": 1, "p": 2.0, "kappa": 1, "beta": [[0.0]], "lambda": [[0.0]]},
    "time": {"dt": 0.001, "t_end": 0.5, "record_every": 10},
    "initial": {"kind": "gaussian_packet", "seed": 1,
                "params": {"amplitude": 1.0, "sigma": 2.0}},
    "diagnostics": {"q_list": [4.0, 6.0], "interaction": False,
                    "weight": {"kind": "quadratic"}},
}

NONLINEAR_RUN = {
    "grid": {"d": 1, "n": 256, "L": 40.0},
    "system": {"N": 2, "p": 2.0, "kappa": 1,
               "beta": [[1.0, 0.3], [0.3, 0.8]],
               "lambda": [[0.2, 0.1], [0.1, 0.2]]},
    "time": {"dt": 0.001, "t_end": 0.5, "record_every": 10},
    "initial": {"kind": "gaussian_packet", "seed": 3,
                "params": {"amplitude": [1.0, 0.8], "sigma": 2.0,
                           "velocity": [[0.5], [-0.3]],
                           "center": [[-3.0], [3.0]]}},
    "diagnostics": {"q_list": [4.0], "interaction": True,
                    "weight": {"kind": "radial_eps", "epsilon_cells": 2.0}},
}

SCATTER_RUN = {
    "grid": {"d": 1, "n": 4096, "L": 640.0},
    "system": {"N": 1, "p": 5.0, "kappa": 1, "beta": [[1.0]], "lambda": [[0.0]]},
    "time": {"dt": 0.001, "t_end": 1.0, "record_every": 100},
    "initial": {"kind": "gaussian_packet", "seed": 4,
                "params": {"amplitude": 1.0, "sigma": 1.0}},
    "diagnostics": {"q_list": [4.0], "weight": {"kind": "quadratic"},
                    "boundary_threshold": 1.0e-6},
    "scattering": {"checkpoint_times": [0.25, 0.5, 1.0, 2.0]},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    default_dir = Path(__file__).resolve().parent.parent / "frontend" / "golden"
    ap.add_argument("--out", type=Path, default=default_dir)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name, raw in (("free_run", FREE_RUN), ("nonlinear_run", NONLINEAR_RUN)):
        cfg = RunConfig.from_dict(dict(raw))
        cfg.output.directory = str(args.out / name)
        run_simulation(cfg, Path(cfg.output.directory))
        print(f"wrote {cfg.output.directory}/series.csv")

    cfg = RunConfig.from_dict(dict(SCATTER_RUN))
    cfg.output.directory = str(args.out / "scatter")
    code = cmd_scatter(cfg)
    print(f"wrote {cfg.output.directory}/scatter_report.csv (exit {code})")


if __name__ == "__main__":
    main()
