"""Static functionals of a field snapshot: masses, energy, norms, densities.

Kinetic terms are evaluated as spectral sums (exact under the discrete
Parseval identity); Lebesgue norms as h^d-weighted sums; tuple norms combine
component norms in l^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec
from .state import FieldState
from .system import SystemParams


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic_biharmonic: float
    kinetic_gradient: float
    potential: float

    @property
    def total(self) -> float:
        return self.kinetic_biharmonic + self.kinetic_gradient + self.potential


@dataclass(frozen=True)
class DensityPair:
    """Pointwise mass |f|^2 and momentum Im(conj(f) grad f) of one component."""

    m: np.ndarray
    j: np.ndarray  # shape (d,) + grid.shape


def mass(state: FieldState, grid: GridSpec) -> np.ndarray:
    """M(u_mu) = integral of |u_mu|^2, one value per component."""
    return np.asarray(grid.integrate(np.abs(state.u) ** 2))


def energy(state: FieldState, grid: GridSpec, sys: SystemParams) -> EnergyBreakdown:
    """Conserved energy: sum |lap u|^2 + kappa sum |grad u|^2
    + sum_{mu,nu} gamma_{mu nu} |u_mu u_nu|^{p+1} / (p+1)."""
    uhat = grid.fft(state.u)
    pw = np.abs(uhat) ** 2
    w = grid.spectral_weight
    kin_bi = float(w * (grid.k_quad * pw).sum())
    kin_grad = float(sys.kappa * w * (grid.k_sq * pw).sum())

    amp_pow = np.abs(state.u) ** (sys.p + 1.0)  # |u_mu|^{p+1} per component
    pot = 0.0
    for mu in range(sys.N):
        for nu in range(sys.N):
            g = sys.gamma[mu, nu]
            if g != 0.0:
                pot += g * float(grid.integrate(amp_pow[mu] * amp_pow[nu]))
    pot /= sys.p + 1.0
    return EnergyBreakdown(kin_bi, kin_grad, pot)


def lq_norm(state: FieldState, grid: GridSpec, q: float) -> np.ndarray:
    """L^q norm per component; q >= 1, with q = inf the max norm."""
    if q != np.inf and q < 1:
        raise ValueError(f"L^q norm needs q >= 1, got {q}")
    a = np.abs(state.u)
    axes = tuple(range(1, a.ndim))
    if q == np.inf:
        return a.max(axis=axes)
    return (grid.cell_volume * (a**q).sum(axis=axes)) ** (1.0 / q)


def lq_norm_total(state: FieldState, grid: GridSpec, q: float) -> float:
    """Tuple L^q norm: l^2 combination of the component norms."""
    return float(np.sqrt((lq_norm(state, grid, q) ** 2).sum()))


def sobolev_h2_norm(state: FieldState, grid: GridSpec) -> np.ndarray:
    """H^2 norm per component, ||u||^2 = sum_k (1+|k|^2)^2 |u^_k|^2 with the
    unitary-normalized transform."""
    pw = np.abs(grid.fft(state.u)) ** 2
    mult = (1.0 + grid.k_sq) ** 2
    axes = tuple(range(1, pw.ndim))
    return np.sqrt(grid.spectral_weight * (mult * pw).sum(axis=axes))


def h2_norm_total(state: FieldState, grid: GridSpec) -> float:
    return float(np.sqrt((sobolev_h2_norm(state, grid) ** 2).sum()))


def h2_distance(a: FieldState, b: FieldState, grid: GridSpec) -> float:
    """Tuple H^2 distance between two states on the same grid."""
    return h2_norm_total(FieldState(0.0, a.u - b.u), grid)


def densities(state: FieldState, grid: GridSpec, mu: int) -> DensityPair:
    """Mass and momentum density of component mu (0-based)."""
    if not 0 <= mu < state.N:
        raise ValueError(f"component index {mu} out of range for N={state.N}")
    f = state.u[mu]
    grad = grid.gradient(f)
    j = np.stack([np.imag(np.conj(f) * gj) for gj in grad])
    return DensityPair(m=np.abs(f) ** 2, j=j)


def momentum_density_sum(state: FieldState, grid: GridSpec) -> np.ndarray:
    """sum_mu Im(conj(u_mu) grad u_mu), shape (d,) + grid.shape."""
    grad = grid.gradient(state.u)
    out = np.zeros((grid.d,) + grid.shape)
    for jax in range(grid.d):
        out[jax] = np.imag(np.conj(state.u) * grad[jax]).sum(axis=0)
    return out


def mass_density_sum(state: FieldState, grid: GridSpec) -> np.ndarray:
    """sum_mu |u_mu|^2 on the grid."""
    return (np.abs(state.u) ** 2).sum(axis=0)
