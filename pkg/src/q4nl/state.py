"""Field snapshots and initial-data construction.

States are immutable value objects: the field array is write-protected on
construction and every operation returns a fresh state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec
from .system import SystemParams

# Peak-relative field level tolerated inside the 4h boundary shell at t=0.
BOUNDARY_PEAK_TOL = 1e-12


class BoundaryContaminationError(ValueError):
    """Initial data carries significant amplitude within 4h of the boundary."""


@dataclass(frozen=True)
class FieldState:
    """N complex fields on the grid at time t; shape (N,) + grid.shape."""

    t: float
    u: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.complex128)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def N(self) -> int:
        return self.u.shape[0]

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.u.view(np.float64))):
            raise FloatingPointError(f"non-finite field values at t={self.t}")

    def with_u(self, u: np.ndarray, t: float | None = None) -> "FieldState":
        return FieldState(self.t if t is None else t, u)


def boundary_mass_fraction(state: FieldState, grid: GridSpec) -> float:
    """Mass within 4h of the box boundary, as a fraction of total (0 if empty)."""
    m = np.abs(state.u) ** 2
    total = m.sum()
    if total == 0.0:
        return 0.0
    return float(m[:, grid.boundary_mask].sum() / total)


def _per_component(value, N: int, mu: int):
    """Length-N list selects per component; anything else is shared."""
    if isinstance(value, (list, tuple)) and len(value) == N:
        return value[mu]
    return value


def _per_component_vector(value, N: int, mu: int):
    """Vector params: a list of lists is per-component, a flat list is shared."""
    if isinstance(value, (list, tuple)) and len(value) > 0 and isinstance(value[0], (list, tuple)):
        if len(value) != N:
            raise ValueError(f"per-component vectors must have {N} entries")
        return value[mu]
    return value


def _vector_param(value, d: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(value, dtype=float))
    if v.size == 1:
        v = np.full(d, v[0])
    if v.size != d:
        raise ValueError(f"expected a length-{d} vector, got {value!r}")
    return v


def _gaussian_bump(grid: GridSpec, amplitude: float, sigma: float,
                   center: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    r2 = np.zeros(grid.shape)
    phase = np.zeros(grid.shape)
    for j, xj in enumerate(grid.coords):
        r2 = r2 + (xj - center[j]) ** 2
        phase = phase + velocity[j] * xj
    return amplitude * np.exp(-r2 / (2.0 * sigma**2)) * np.exp(1j * phase)


def make_initial(kind: str, params: dict, grid: GridSpec, sys: SystemParams,
                 seed: int = 0) -> FieldState:
    """Build t=0 data: 'gaussian_packet', 'multi_bump' or 'random_schwartz'.

    Deterministic for a fixed seed. Data whose amplitude inside the 4h
    boundary shell exceeds 1e-12 of the peak is rejected so that the torus
    remains a faithful stand-in for free space.
    """
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    fields = np.zeros((sys.N,) + grid.shape, dtype=np.complex128)

    if kind == "gaussian_packet":
        for mu in range(sys.N):
            amp = _per_component(params.get("amplitude", 1.0), sys.N, mu)
            sigma = float(_per_component(params.get("sigma", 1.0), sys.N, mu))
            center = _vector_param(_per_component_vector(params.get("center", 0.0), sys.N, mu), grid.d)
            velocity = _vector_param(_per_component_vector(params.get("velocity", 0.0), sys.N, mu), grid.d)
            fields[mu] = _gaussian_bump(grid, float(amp), sigma, center, velocity)
    elif kind == "multi_bump":
        bumps = params.get("bumps")
        if not bumps:
            raise ValueError("multi_bump requires a nonempty 'bumps' list")
        scales = params.get("component_amplitudes", [1.0] * sys.N)
        if len(scales) != sys.N:
            raise ValueError("component_amplitudes must have one entry per component")
        for mu in range(sys.N):
            for bump in bumps:
                fields[mu] += _gaussian_bump(
                    grid,
                    float(scales[mu]) * float(bump.get("amplitude", 1.0)),
                    float(bump.get("sigma", 1.0)),
                    _vector_param(bump.get("center", 0.0), grid.d),
                    _vector_param(bump.get("velocity", 0.0), grid.d),
                )
    elif kind == "random_schwartz":
        amp = float(params.get("amplitude", 1.0))
        k_sigma = float(params.get("k_sigma", 1.0))
        # default spatial envelope keeps the tail below the boundary check
        x_sigma = float(params.get("x_sigma", grid.L / 16.0))
        envelope_k = np.exp(-grid.k_sq / (2.0 * k_sigma**2))
        envelope_x = np.exp(-grid.radius_sq / (2.0 * x_sigma**2))
        for mu in range(sys.N):
            coef = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
            f = grid.ifft(coef * envelope_k)
            f *= envelope_x
            peak = np.abs(f).max()
            if peak > 0:
                f *= amp / peak
            fields[mu] = f
    else:
        raise ValueError(f"unknown initial kind {kind!r}")

    peak = np.abs(fields).max()
    if peak > 0:
        shell_peak = np.abs(fields[:, grid.boundary_mask]).max()
        if shell_peak > BOUNDARY_PEAK_TOL * peak:
            raise BoundaryContaminationError(
                f"boundary contamination: shell amplitude {shell_peak:.3e} exceeds "
                f"{BOUNDARY_PEAK_TOL:g} of peak {peak:.3e}; widen the box or "
                f"shrink/recenter the packet"
            )
    return FieldState(0.0, fields)
