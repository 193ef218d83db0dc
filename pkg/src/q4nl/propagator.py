"""Time evolution: exact free flow, exact nonlinear phase, Strang composition.

Sign convention: i du/dt + (lap^2 - kappa lap) u + F(u) = 0, so the free flow
multiplies each mode by exp(i t sigma(k)) with sigma = |k|^4 + kappa |k|^2,
and the nonlinear subflow is the pointwise phase rotation
u_mu <- exp(i tau Phi_mu) u_mu with
Phi_mu = sum_nu gamma_{mu nu} |u_nu|^{p+1} |u_mu|^{p-1}.
Both substeps are exact, so dt is an accuracy knob only (no CFL limit).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import GridSpec
from .state import FieldState
from .system import SystemParams


class BlowUpError(FloatingPointError):
    """Non-finite field values during integration (should not happen: defocusing)."""


@dataclass(frozen=True)
class MultiplierTable:
    """Free-flow symbol sigma(k) = |k|^4 + kappa |k|^2 on the grid."""

    sigma: np.ndarray

    @classmethod
    def build(cls, grid: GridSpec, sys: SystemParams) -> "MultiplierTable":
        sigma = grid.k_quad + sys.kappa * grid.k_sq
        sigma.setflags(write=False)
        return cls(sigma)


@dataclass(frozen=True)
class StepPlan:
    """dt > 0, step count, direction +-1, and the recording stride."""

    dt: float
    steps: int
    direction: int = 1
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")

    @classmethod
    def for_horizon(cls, t_end: float, dt: float, record_every: int = 1) -> "StepPlan":
        """Plan covering |t_end| with steps*dt = |t_end| to round-off."""
        steps = int(round(abs(t_end) / dt))
        if not np.isclose(steps * dt, abs(t_end), rtol=1e-9, atol=0.0):
            raise ValueError(f"horizon {t_end} is not an integer multiple of dt={dt}")
        return cls(dt=dt, steps=steps, direction=1 if t_end >= 0 else -1,
                   record_every=record_every)

    @property
    def horizon(self) -> float:
        return self.direction * self.dt * self.steps


def free_evolve(state: FieldState, grid: GridSpec, sys: SystemParams, t: float,
                table: Optional[MultiplierTable] = None) -> FieldState:
    """Apply the free group over time t: u^_k <- exp(i t sigma(k)) u^_k."""
    if t == 0.0:
        return state
    if table is None:
        table = MultiplierTable.build(grid, sys)
    uhat = grid.fft(state.u)
    uhat *= np.exp(1j * t * table.sigma)
    return FieldState(state.t + t, grid.ifft(uhat))


def _phase_field(u: np.ndarray, sys: SystemParams) -> np.ndarray:
    """Phi_mu = gamma_mm |u_mu|^{2p} + (sum_{nu != mu} gamma |u_nu|^{p+1}) |u_mu|^{p-1}.

    The diagonal exponents are combined first so p < 1 stays finite at zeros
    of the field; the split off-diagonal form requires p >= 1 (matching the
    well-posedness constraint for genuinely coupled systems).
    """
    amps = np.abs(u)
    phi = np.empty_like(amps)
    offdiag = sys.has_offdiagonal_coupling
    if offdiag:
        if sys.N > 1 and sys.p < 1:
            raise ValueError("coupled systems (N > 1) require p >= 1")
        amp_p1 = amps ** (sys.p + 1.0)
    for mu in range(sys.N):
        phi[mu] = sys.gamma[mu, mu] * amps[mu] ** (2.0 * sys.p)
        if offdiag:
            cross = np.zeros(amps.shape[1:])
            for nu in range(sys.N):
                if nu != mu and sys.gamma[mu, nu] != 0.0:
                    cross += sys.gamma[mu, nu] * amp_p1[nu]
            if cross.any():
                phi[mu] += cross * amps[mu] ** (sys.p - 1.0)
    return phi


def nonlinear_phase_step(state: FieldState, grid: GridSpec, sys: SystemParams,
                         tau: float) -> FieldState:
    """Exact solution of the nonlinear subflow over tau (pure phase rotation;
    every pointwise modulus is constant along it)."""
    if tau == 0.0:
        return state
    phi = _phase_field(state.u, sys)
    return FieldState(state.t, np.exp(1j * tau * phi) * state.u)


def strang_step(state: FieldState, grid: GridSpec, sys: SystemParams, dt: float,
                table: Optional[MultiplierTable] = None) -> FieldState:
    """Symmetric composition: half phase, full free flow, half phase.

    Time-reversible; negative dt integrates backward with the same code path.
    """
    if dt == 0.0:
        raise ValueError("strang_step needs dt != 0")
    s = nonlinear_phase_step(state, grid, sys, dt / 2.0)
    s = free_evolve(s, grid, sys, dt, table)
    return nonlinear_phase_step(s, grid, sys, dt / 2.0)


def integrate(state: FieldState, grid: GridSpec, sys: SystemParams, plan: StepPlan,
              observer: Optional[Callable[[int, FieldState], None]] = None) -> FieldState:
    """Run plan.steps Strang steps in plan.direction from the given state.

    The observer (if any) sees the initial state as step 0 and every
    record_every-th state after that, plus the final one. Aborts with
    BlowUpError on NaN/Inf.
    """
    table = MultiplierTable.build(grid, sys)
    t0 = state.t
    signed_dt = plan.direction * plan.dt
    if observer is not None:
        observer(0, state)
    current = state
    for step in range(1, plan.steps + 1):
        current = strang_step(current, grid, sys, signed_dt, table)
        # keep recorded times exact multiples of dt (no accumulation drift)
        current = FieldState(t0 + signed_dt * step, current.u)
        if not np.all(np.isfinite(current.u.view(np.float64))):
            raise BlowUpError(f"non-finite field at step {step}, t={current.t}")
        if observer is not None and (step % plan.record_every == 0 or step == plan.steps):
            observer(step, current)
    return current
