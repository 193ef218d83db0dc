"""Exponent validation, decay monitoring, scattering extraction, wave operators.

Scattering at finite horizon: the t -> infinity limit is replaced by
geometric checkpointing of the free-group pullback v(t) = exp(-it sigma) u(t)
and a strictly decreasing Cauchy-difference sequence. The wave operator is
built by integrating the full equation backward from a free profile (the
stepper is time symmetric), with quality measured by a forward round trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .functionals import h2_distance, h2_norm_total, lq_norm, lq_norm_total, mass_density_sum
from .grid import GridSpec
from .propagator import MultiplierTable, StepPlan, free_evolve, integrate
from .state import FieldState, boundary_mass_fraction
from .system import SystemParams

DEFAULT_BOUNDARY_THRESHOLD = 1e-8


# -- exponents and admissibility ----------------------------------------------

@dataclass(frozen=True)
class ExponentCheck:
    """Theory flags for (d, p, N): p_star is the energy-critical power,
    decay needs 0 < p < p_star, scattering additionally p*d > 4; genuinely
    coupled systems (N > 1) also need p >= 1."""

    d: int
    p: float
    N: int
    p_star: float
    pd: float
    decay_ok: bool
    scattering_ok: bool
    in_theorem_range: bool

    def as_kv(self) -> str:
        return (f"d={self.d} p={self.p:g} N={self.N} p_star={self.p_star:g} "
                f"pd={self.pd:g} decay_ok={str(self.decay_ok).lower()} "
                f"scattering_ok={str(self.scattering_ok).lower()} "
                f"in_theorem_range={str(self.in_theorem_range).lower()}")


def critical_power(d: int) -> float:
    """Energy-critical exponent: infinity for d in {3,4}, 4/(d-4) for 5<=d<=8."""
    if d in (3, 4):
        return math.inf
    if 5 <= d <= 8:
        return 4.0 / (d - 4)
    return math.nan


def check_exponents(d: int, p: float, N: int = 1) -> ExponentCheck:
    """Pure flag computation; never raises, so sweeps can tabulate."""
    p_star = critical_power(d)
    in_range = 3 <= d <= 8 and not math.isnan(p_star)
    needs_p_ge_1 = N > 1
    subcritical = in_range and 0 < p < p_star
    lower_ok = p >= 1 if needs_p_ge_1 else p > 0
    decay_ok = bool(subcritical and lower_ok)
    scattering_ok = bool(subcritical and lower_ok and p * d > 4)
    return ExponentCheck(d=d, p=p, N=N, p_star=p_star, pd=p * d,
                         decay_ok=decay_ok, scattering_ok=scattering_ok,
                         in_theorem_range=in_range)


def _as_fraction(x) -> Fraction | None:
    """Exact rational value, or None for infinity."""
    if x == math.inf:
        return None
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**9)


def admissible_pair(q, r, n: int) -> bool:
    """Biharmonic admissibility: 2 <= q, r <= inf, (q, r, n) != (2, inf, 4),
    and 4/q + n/r = n/2 checked in exact rational arithmetic."""
    fq, fr = _as_fraction(q), _as_fraction(r)
    for f in (fq, fr):
        if f is not None and f < 2:
            return False
    if fq is not None and fq == 2 and fr is None and n == 4:
        return False
    lhs = (Fraction(0) if fq is None else Fraction(4) / fq) + \
          (Fraction(0) if fr is None else Fraction(n) / fr)
    return lhs == Fraction(n, 2)


def pair_from_p(p, n: int) -> tuple[Fraction, Fraction]:
    """The working Strichartz pair (q, r) = (8(p+1)/(n p), 2p+2); raises if
    it falls outside admissibility (p at or above the critical power)."""
    fp = _as_fraction(p)
    if fp is None or fp <= 0:
        raise ValueError(f"need a positive finite p, got {p}")
    q = Fraction(8) * (fp + 1) / (n * fp)
    r = 2 * fp + 2
    if not admissible_pair(q, r, n):
        raise ValueError(f"pair {(q, r)} from p={p}, n={n} is not admissible")
    return q, r


# -- decay ---------------------------------------------------------------------

@dataclass(frozen=True)
class DecaySeries:
    times: np.ndarray
    q_values: tuple[float, ...]
    norms: dict           # q -> array of tuple L^q norms along the run
    free_norms: dict      # q -> same for the matched free evolution
    tail_slopes: dict     # q -> fitted log-log slope over the tail window

    def halving_time(self, q: float) -> float:
        """First time the L^q norm falls below half its initial value (nan if never)."""
        series = self.norms[q]
        below = np.nonzero(series <= 0.5 * series[0])[0]
        return float(self.times[below[0]]) if len(below) else math.nan


def _tail_slope(times: np.ndarray, values: np.ndarray) -> float:
    keep = (times > 0) & (values > 0)
    t, v = times[keep], values[keep]
    if len(t) < 4:
        return math.nan
    tail = slice(len(t) // 2, None)
    logt, logv = np.log(t[tail]), np.log(v[tail])
    if len(logt) < 2:
        return math.nan
    return float(np.polyfit(logt, logv, 1)[0])


def decay_series(samples: list[FieldState], grid: GridSpec, sys: SystemParams,
                 q_list: list[float]) -> DecaySeries:
    """Tuple L^q norms along the trajectory for each q in (2, inf), plus the
    matched free evolution from the first sample for comparison."""
    for q in q_list:
        if not 2 < q < math.inf:
            raise ValueError(f"decay norms need 2 < q < inf, got {q} "
                             "(q = 2 is conserved mass)")
    times = np.array([s.t for s in samples])
    table = MultiplierTable.build(grid, sys)
    t0 = samples[0].t
    norms = {q: np.empty(len(samples)) for q in q_list}
    free_norms = {q: np.empty(len(samples)) for q in q_list}
    for i, s in enumerate(samples):
        fs = free_evolve(samples[0], grid, sys, s.t - t0, table)
        for q in q_list:
            norms[q][i] = lq_norm_total(s, grid, q)
            free_norms[q][i] = lq_norm_total(fs, grid, q)
    slopes = {q: _tail_slope(times, norms[q]) for q in q_list}
    return DecaySeries(times=times, q_values=tuple(q_list), norms=norms,
                       free_norms=free_norms, tail_slopes=slopes)


# -- localized Gagliardo-Nirenberg ----------------------------------------------

def sup_cube_mass(state: FieldState, grid: GridSpec, side: float = 1.0) -> float:
    """sup over cube centers of the tuple L^2 norm on the side-`side` cube,
    via an exact moving-window (partial-cell weighted) sum of sum_mu |u_mu|^2."""
    if side > grid.L:
        raise ValueError(f"cube side {side} exceeds the box size {grid.L}")
    half = side / 2.0
    h = grid.h
    m = int(math.ceil(half / h + 0.5))
    offsets = np.arange(-m, m + 1)
    lo = np.maximum(offsets * h - h / 2.0, -half)
    hi = np.minimum(offsets * h + h / 2.0, half)
    axis_w = np.clip(hi - lo, 0.0, None) / h
    kernel = np.zeros(grid.shape)
    idx = np.ix_(*[(offsets % grid.n) for _ in range(grid.d)])
    weights = axis_w
    for _ in range(grid.d - 1):
        weights = np.multiply.outer(weights, axis_w)
    np.add.at(kernel, idx, weights)  # accumulate if the window wraps onto itself
    dens = mass_density_sum(state, grid)
    window = grid.cell_volume * np.real(grid.ifft(grid.fft(kernel) * grid.fft(dens)))
    return float(np.sqrt(max(window.max(), 0.0)))


def gn_localized_ratio(state: FieldState, grid: GridSpec, side: float = 1.0) -> float:
    """||w||_{q}^{q} / [ (sup_x ||w||_{L2(Q_x)})^{4/d} ||w||_{H2}^2 ] with
    q = (2d+4)/d and Q_x the side-`side` cube (side 1 by default; side 2 is
    the enlarged cube of the cube-mass lower-bound argument)."""
    d = grid.d
    q = (2.0 * d + 4.0) / d
    lhs = lq_norm_total(state, grid, q) ** q
    if lhs == 0.0:
        return 0.0
    sup_l2 = sup_cube_mass(state, grid, side)
    h2 = h2_norm_total(state, grid)
    return lhs / (sup_l2 ** (4.0 / d) * h2**2)


# -- scattering extraction -------------------------------------------------------

@dataclass(frozen=True)
class ScatterReport:
    times: np.ndarray
    cauchy: np.ndarray            # c_ij = ||v(t_i) - v(t_j)||_H2
    u0_plus: FieldState
    scattering_errors: np.ndarray  # ||u(t_i) - exp(i t_i sigma) u0_plus||_H2
    success: bool
    excluded_times: tuple[float, ...] = field(default=())

    @property
    def consecutive_differences(self) -> np.ndarray:
        return np.array([self.cauchy[i + 1, i] for i in range(len(self.times) - 1)])


def extract_scattering_state(checkpoints: list[FieldState], grid: GridSpec,
                             sys: SystemParams,
                             boundary_threshold: float = DEFAULT_BOUNDARY_THRESHOLD
                             ) -> ScatterReport:
    """Pull back checkpoints with the free group, take the last pullback as
    the asymptotic datum, and report the Cauchy matrix of pullback
    differences. Success means consecutive differences strictly decrease.
    Boundary-contaminated checkpoints are dropped (with a record); fewer than
    three clean ones is an error."""
    table = MultiplierTable.build(grid, sys)
    clean, excluded = [], []
    for s in checkpoints:
        if boundary_mass_fraction(s, grid) <= boundary_threshold:
            clean.append(s)
        else:
            excluded.append(s.t)
    if len(clean) < 3:
        raise ValueError(f"need >= 3 boundary-clean checkpoints, got {len(clean)} "
                         f"(excluded at t={excluded})")
    times = np.array([s.t for s in clean])
    if np.any(np.diff(times) <= 0):
        raise ValueError("checkpoint times must be strictly increasing")
    pullbacks = [free_evolve(s, grid, sys, -s.t, table) for s in clean]
    n = len(pullbacks)
    cauchy = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            cauchy[i, j] = cauchy[j, i] = h2_distance(pullbacks[i], pullbacks[j], grid)
    u0_plus = FieldState(0.0, pullbacks[-1].u)
    diffs = np.array([cauchy[i + 1, i] for i in range(n - 1)])
    success = bool(np.all(np.diff(diffs) < 0)) if len(diffs) > 1 else False
    return ScatterReport(times=times, cauchy=cauchy, u0_plus=u0_plus,
                         scattering_errors=cauchy[:, -1].copy(), success=success,
                         excluded_times=tuple(excluded))


# -- wave operator ----------------------------------------------------------------

def wave_operator(u0_plus: FieldState, horizon: float, grid: GridSpec,
                  sys: SystemParams, dt: float) -> FieldState:
    """Approximate wave operator: initial data whose nonlinear evolution
    matches the free evolution of u0_plus from `horizon` onward. Built by
    pushing u0_plus forward with the free group and integrating the full
    equation backward to t = 0."""
    if not horizon > 0:
        raise ValueError("wave operator needs a positive matching horizon")
    profile = free_evolve(FieldState(0.0, u0_plus.u), grid, sys, horizon)
    plan = StepPlan.for_horizon(horizon, dt)
    back = integrate(profile, grid, sys,
                     StepPlan(dt=plan.dt, steps=plan.steps, direction=-1))
    return FieldState(0.0, back.u)


@dataclass(frozen=True)
class WaveOperatorReport:
    initial_data: FieldState
    horizon: float
    extract_time: float
    roundtrip_error: float        # ||re-extracted - u0_plus||_H2, relative


def wave_operator_round_trip(u0_plus: FieldState, horizon: float, grid: GridSpec,
                             sys: SystemParams, dt: float,
                             extract_factor: float = 2.0) -> WaveOperatorReport:
    """Build the initial data, integrate it forward past the horizon and
    re-extract the asymptotic state; the relative H^2 discrepancy measures
    the neglected interaction beyond the horizon."""
    u0 = wave_operator(u0_plus, horizon, grid, sys, dt)
    t_extract = extract_factor * horizon
    plan = StepPlan.for_horizon(t_extract, dt)
    forward = integrate(u0, grid, sys, plan)
    re_extracted = free_evolve(forward, grid, sys, -forward.t)
    ref = h2_norm_total(u0_plus, grid)
    err = h2_distance(re_extracted, FieldState(re_extracted.t, u0_plus.u), grid)
    return WaveOperatorReport(initial_data=u0, horizon=horizon,
                              extract_time=t_extract,
                              roundtrip_error=err / ref if ref > 0 else err)


# -- discrete space-time norms -----------------------------------------------------

@dataclass(frozen=True)
class SpacetimeNorm:
    q: float
    r: float
    times: np.ndarray
    instantaneous: np.ndarray   # tuple W^{2,r} norm at each sample
    cumulative: np.ndarray      # norm restricted to [t_0, t_i]

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])


def _w2r_norm(state: FieldState, grid: GridSpec, r: float) -> float:
    """Tuple W^{2,r} norm: l^2 combination over components of
    (||u||_r^2 + || |grad u| ||_r^2 + || |D2 u| ||_r^2)^(1/2)."""
    u = state.u
    grad = grid.gradient(u)
    grad_mag = np.sqrt(sum(np.abs(g) ** 2 for g in grad))
    hess = grid.hessian(u)
    hess_mag = np.sqrt(sum(np.abs(hess[i, j]) ** 2
                           for i in range(grid.d) for j in range(grid.d)))
    total = 0.0
    for comp in (u, grad_mag, hess_mag):
        st = FieldState(0.0, comp)
        total += float((lq_norm(st, grid, r) ** 2).sum())
    return math.sqrt(total)


def spacetime_norm(samples: list[FieldState], grid: GridSpec, sys: SystemParams,
                   q, r) -> SpacetimeNorm:
    """Discrete quadrature of ( int ||w(t)||_{W^{2,r}}^q dt )^{1/q} over the
    sampled window, reported cumulatively so growth or saturation is visible.
    The pair must be biharmonic-admissible for the grid dimension."""
    if not admissible_pair(q, r, grid.d):
        raise ValueError(f"(q={q}, r={r}) is not biharmonic-admissible for n={grid.d}")
    times = np.array([s.t for s in samples])
    if len(times) < 2 or np.any(np.diff(times) <= 0):
        raise ValueError("need at least 2 samples at increasing times")
    qf = float(q) if q != math.inf else math.inf
    rf = float(r) if r != math.inf else math.inf
    inst = np.array([_w2r_norm(s, grid, rf) for s in samples])
    cum = np.empty_like(inst)
    if qf == math.inf:
        cum = np.maximum.accumulate(inst)
    else:
        gaps = np.diff(times)
        powers = inst**qf
        acc = np.concatenate([[0.0], np.cumsum(0.5 * gaps * (powers[1:] + powers[:-1]))])
        cum = acc ** (1.0 / qf)
    return SpacetimeNorm(q=qf, r=rf, times=times, instantaneous=inst, cumulative=cum)
