"""Command-line surface: simulate, verify, scatter, waveop, check.

Exit codes: 0 pass, 1 usage/config error, 2 numerical failure,
3 acceptance-threshold failure.
"""

from __future__ import annotations

import argparse
import math
import sys as _sys
from pathlib import Path

import numpy as np

from . import morawetz
from .config import ConfigError, RunConfig
from .functionals import energy, lq_norm_total, mass, sobolev_h2_norm
from .grid import GridSpec
from .io import (DiagnosticsRecord, SeriesWriter, csv_columns, format_float,
                 q_column, write_checkpoint)
from .propagator import BlowUpError, StepPlan, integrate
from .scattering import (admissible_pair, check_exponents,
                         extract_scattering_state, wave_operator_round_trip)
from .state import BoundaryContaminationError, FieldState, boundary_mass_fraction
from .system import SystemParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_THRESHOLD = 3


def _record(state: FieldState, grid: GridSpec, sys: SystemParams, cfg: RunConfig,
            weight, interaction_weight) -> DiagnosticsRecord:
    vals = {"t": state.t}
    m = mass(state, grid)
    for mu in range(sys.N):
        vals[f"mass_{mu + 1}"] = float(m[mu])
    e = energy(state, grid, sys)
    vals["energy_total"] = e.total
    vals["energy_biharmonic"] = e.kinetic_biharmonic
    vals["energy_gradient"] = e.kinetic_gradient
    vals["energy_potential"] = e.potential
    h2 = sobolev_h2_norm(state, grid)
    for mu in range(sys.N):
        vals[f"h2_{mu + 1}"] = float(h2[mu])
    for q in cfg.diagnostics.q_list:
        vals[q_column(q)] = lq_norm_total(state, grid, float(q))
    vals["boundary_mass"] = boundary_mass_fraction(state, grid)
    vals["morawetz_action"] = morawetz.action_m(state, grid, sys, weight)
    if cfg.diagnostics.interaction:
        vals["interaction_action"] = morawetz.interaction_action(
            state, grid, sys, interaction_weight)
    return DiagnosticsRecord(vals)


def run_simulation(cfg: RunConfig, out_dir: Path) -> FieldState:
    """Integrate per config, streaming the diagnostics CSV and writing
    checkpoints at the configured times. Returns the final state."""
    grid = cfg.build_grid()
    system = cfg.build_system()
    state = cfg.build_initial(grid, system)
    weight = cfg.build_weight(grid)
    iweight = cfg.interaction_weight(grid)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg.save(out_dir / "config.yaml")

    # observe every step so checkpoints land on their exact times; CSV rows
    # are decimated to the configured recording stride
    plan = StepPlan.for_horizon(cfg.time.t_end, cfg.time.dt, 1)
    columns = csv_columns(system.N, list(cfg.diagnostics.q_list), cfg.diagnostics.interaction)
    pending = sorted(float(t) for t in cfg.scattering.checkpoint_times)
    write_csv = "csv" in cfg.output.formats
    write_ckpt = "checkpoint" in cfg.output.formats
    stride = cfg.time.record_every

    writer = SeriesWriter(out_dir / "series.csv", columns) if write_csv else None
    try:
        def observer(step: int, s: FieldState) -> None:
            if writer is not None and (step % stride == 0 or step == plan.steps):
                writer.write(_record(s, grid, system, cfg, weight, iweight))
            while pending and s.t >= pending[0] - 0.5 * cfg.time.dt:
                t_ck = pending.pop(0)
                if write_ckpt:
                    write_checkpoint(out_dir / f"checkpoint_{t_ck:g}.q4nl", s, grid, system)

        final = integrate(state, grid, system, plan, observer)
    finally:
        if writer is not None:
            writer.close()
    return final


def cmd_simulate(cfg: RunConfig) -> int:
    out_dir = Path(cfg.output.directory)
    try:
        final = run_simulation(cfg, out_dir)
    except BlowUpError as err:
        print(f"numerical failure: {err}", file=_sys.stderr)
        return EXIT_NUMERICAL
    print(f"simulated to t={format_float(final.t)}; outputs in {out_dir}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, refinements: int = 3, corrupt_rhs_sign: bool = False) -> int:
    """Morawetz identity check under dt-refinement; exit 0 iff the finest-dt
    max residual is below diagnostics.verify_tolerance."""
    grid = cfg.build_grid()
    system = cfg.build_system()
    weight = cfg.build_weight(grid)
    state0 = cfg.build_initial(grid, system)
    out_dir = Path(cfg.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    results = []
    dt = float(cfg.time.dt)
    for level in range(refinements):
        plan = StepPlan.for_horizon(cfg.time.t_end, dt, 1)
        samples: list[FieldState] = []
        integrate(state0, grid, system, plan, lambda step, s: samples.append(s))
        reports = morawetz.verify_identity(samples, grid, system, weight)
        if corrupt_rhs_sign:  # negative-control hook for tests
            reports = [morawetz.MorawetzReport(
                t=r.t, action=r.action, rhs_terms=r.rhs_terms,
                fd_derivative=r.fd_derivative,
                residual=r.fd_derivative + r.rhs_total) for r in reports]
        results.append((dt, reports))
        dt /= 2.0

    with open(out_dir / "verify_residuals.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("dt,t,action,fd_derivative,rhs_total,residual\n")
        for dt_level, reports in results:
            for r in reports:
                fh.write(",".join(format_float(v) for v in
                                  (dt_level, r.t, r.action, r.fd_derivative,
                                   r.rhs_total, r.residual)) + "\n")

    maxima = [morawetz.max_residual(reports) for _, reports in results]
    for (dt_level, _), mr in zip(results, maxima):
        print(f"dt={dt_level:g} max_residual={mr:.6e}")
    orders = [math.log2(a / b) if b > 0 else math.inf
              for a, b in zip(maxima[:-1], maxima[1:])]
    if orders:
        print("refinement orders: " + " ".join(f"{o:.2f}" for o in orders))
    tol = float(cfg.diagnostics.verify_tolerance)
    ok = maxima[-1] <= tol
    print(f"finest max residual {maxima[-1]:.6e} {'<=' if ok else '>'} tolerance {tol:g}: "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_THRESHOLD


def cmd_scatter(cfg: RunConfig) -> int:
    """Integrate to the configured checkpoint times, extract the scattering
    state, and report the Cauchy matrix of pullback differences."""
    if len(cfg.scattering.checkpoint_times) < 3:
        print("scatter needs >= 3 scattering.checkpoint_times", file=_sys.stderr)
        return EXIT_USAGE
    grid = cfg.build_grid()
    system = cfg.build_system()
    state = cfg.build_initial(grid, system)
    dt = float(cfg.time.dt)
    checkpoints = []
    t_now = 0.0
    for t_ck in [float(t) for t in cfg.scattering.checkpoint_times]:
        plan = StepPlan.for_horizon(t_ck - t_now, dt, max(1, int(round((t_ck - t_now) / dt))))
        state = integrate(state, grid, system, plan)
        t_now = state.t
        checkpoints.append(state)
    try:
        report = extract_scattering_state(
            checkpoints, grid, system,
            boundary_threshold=float(cfg.diagnostics.boundary_threshold))
    except ValueError as err:
        print(f"scattering extraction failed: {err}", file=_sys.stderr)
        return EXIT_NUMERICAL
    np.set_printoptions(precision=6)
    print("checkpoint times:", report.times)
    if report.excluded_times:
        print("warning: excluded boundary-contaminated checkpoints at t =",
              list(report.excluded_times))
    print("cauchy matrix (H2 pullback differences):")
    print(report.cauchy)
    diffs = report.consecutive_differences
    print("consecutive differences:", diffs)
    print(f"strictly_decreasing={str(report.success).lower()}")
    max_entry = float(report.cauchy.max())
    print(f"max_cauchy_entry={max_entry:.6e}")
    out_dir = Path(cfg.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "scatter_report.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("t,cauchy_to_next,scattering_error\n")
        for i, t in enumerate(report.times):
            nxt = diffs[i] if i < len(diffs) else 0.0
            fh.write(",".join(format_float(v) for v in
                              (t, nxt, report.scattering_errors[i])) + "\n")
    if np.any(system.gamma):  # gamma = 0 controls sit at the round-off floor
        return EXIT_OK if report.success else EXIT_THRESHOLD
    return EXIT_OK


def cmd_waveop(cfg: RunConfig, horizon: float | None = None) -> int:
    """Wave-operator round trip from the configured initial data taken as the
    asymptotic datum."""
    grid = cfg.build_grid()
    system = cfg.build_system()
    u0_plus = cfg.build_initial(grid, system)
    T = float(horizon if horizon is not None else cfg.time.t_end)
    report = wave_operator_round_trip(u0_plus, T, grid, system, float(cfg.time.dt))
    print(f"horizon={T:g} extract_time={report.extract_time:g}")
    print(f"roundtrip_h2_error={report.roundtrip_error:.6e}")
    return EXIT_OK


def cmd_check(args) -> int:
    """Exponent flags and admissibility verdicts in key=value form."""
    printed = False
    if args.d is not None and args.p is not None:
        chk = check_exponents(args.d, args.p, args.N)
        print(chk.as_kv())
        printed = True
    if args.q is not None and args.r is not None:
        n = args.n if args.n is not None else (args.d if args.d is not None else 3)
        q = math.inf if args.q == "inf" else float(args.q)
        r = math.inf if args.r == "inf" else float(args.r)
        ok = admissible_pair(q, r, n)
        print(f"q={args.q} r={args.r} n={n} admissible={str(ok).lower()}")
        printed = True
    if not printed:
        print("check needs --d/--p (exponents) and/or --q/--r (admissibility)",
              file=_sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="q4nl",
        description="Pseudospectral lab for coupled defocusing fourth-order NLS")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_options(p):
        p.add_argument("--config", type=str, help="YAML run configuration")
        p.add_argument("--dt", type=float, help="override time.dt")
        p.add_argument("--steps", type=int, help="override step count (sets t_end = dt*steps)")
        p.add_argument("--seed", type=int, help="override initial.seed")
        p.add_argument("--output", type=str, help="override output.directory")

    add_config_options(sub.add_parser("simulate", help="run and record diagnostics"))
    p_verify = sub.add_parser("verify", help="Morawetz identity residuals under dt-refinement")
    add_config_options(p_verify)
    p_verify.add_argument("--refinements", type=int, default=3)
    p_verify.add_argument("--corrupt-rhs-sign", action="store_true",
                          help=argparse.SUPPRESS)
    add_config_options(sub.add_parser("scatter", help="scattering-state extraction"))
    p_waveop = sub.add_parser("waveop", help="wave-operator round trip")
    add_config_options(p_waveop)
    p_waveop.add_argument("--horizon", type=float, help="matching horizon T")
    p_check = sub.add_parser("check", help="exponent and admissibility flags")
    p_check.add_argument("--d", type=int)
    p_check.add_argument("--p", type=float)
    p_check.add_argument("--N", type=int, default=1)
    p_check.add_argument("--q", type=str)
    p_check.add_argument("--r", type=str)
    p_check.add_argument("--n", type=int)
    return parser


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.dt is not None:
        cfg.time.dt = args.dt
    if args.steps is not None:
        cfg.time.t_end = float(args.steps) * float(cfg.time.dt)
    if args.seed is not None:
        cfg.initial.seed = args.seed
    if args.output is not None:
        cfg.output.directory = args.output
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    try:
        cfg = _load_config(args)
    except (ConfigError, FileNotFoundError, OSError) as err:
        print(f"config error: {err}", file=_sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, refinements=args.refinements,
                              corrupt_rhs_sign=args.corrupt_rhs_sign)
        if args.command == "scatter":
            return cmd_scatter(cfg)
        if args.command == "waveop":
            return cmd_waveop(cfg, horizon=args.horizon)
    except BoundaryContaminationError as err:
        print(f"config error: {err}", file=_sys.stderr)
        return EXIT_USAGE
    except BlowUpError as err:
        print(f"numerical failure: {err}", file=_sys.stderr)
        return EXIT_NUMERICAL
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    _sys.exit(main())
