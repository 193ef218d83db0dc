"""Independent reference computations used to freeze expected test values.

Everything here deliberately avoids the code paths under test: quadrature
instead of grid sums, explicit double loops instead of FFT convolutions,
dense eigen-decompositions instead of closed-form curvature formulas.
"""

import itertools
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad


def quadrature_1d(f, lo: float, hi: float) -> float:
    """Adaptive quadrature to near machine precision."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=400)
    assert err < 1e-10
    return val


def gaussian_packet_mass_1d(amplitude: float, sigma: float, half_box: float) -> float:
    """integral of |A exp(-x^2/(2 sigma^2))|^2 over the box."""
    return quadrature_1d(
        lambda x: amplitude**2 * np.exp(-(x**2) / sigma**2), -half_box, half_box)


def gaussian_lq_1d(amplitude: float, sigma: float, q: float, half_box: float) -> float:
    val = quadrature_1d(
        lambda x: abs(amplitude) ** q * np.exp(-q * x**2 / (2 * sigma**2)),
        -half_box, half_box)
    return val ** (1.0 / q)


def gaussian_x_moment_1d(amplitude: float, sigma: float, x0: float, half_box: float) -> float:
    """integral of x |A exp(-(x-x0)^2/(2 sigma^2))|^2."""
    return quadrature_1d(
        lambda x: x * amplitude**2 * np.exp(-((x - x0) ** 2) / sigma**2),
        -half_box, half_box)


def interaction_double_sum(j_field: np.ndarray, m_field: np.ndarray,
                           axis_coords_wrapped: np.ndarray, eps: float,
                           cell_volume: float) -> float:
    """Brute-force O(M^2) evaluation of
    2 sum_x sum_y J(x) . (x - y)/sqrt(|x-y|^2 + eps^2) M(y) h^{2d}."""
    d = j_field.shape[0]
    shape = m_field.shape
    n = shape[0]
    idx = np.array(list(itertools.product(range(n), repeat=d)))
    jr = j_field.reshape(d, -1)
    mr = m_field.reshape(-1)
    total = 0.0
    for a in range(idx.shape[0]):
        di = (idx[a][None, :] - idx) % n
        z = axis_coords_wrapped[di]                       # (M, d)
        rho = np.sqrt((z**2).sum(axis=1) + eps * eps)
        for ax in range(d):
            total += float(jr[ax, a] * ((z[:, ax] / rho) * mr).sum())
    return 2.0 * cell_volume**2 * total


def hessian_psd_sweep(hess: np.ndarray, d: int) -> float:
    """Minimum eigenvalue over all sampled points of a (d, d) + shape field."""
    mats = hess.reshape(d, d, -1)
    worst = np.inf
    for a in range(mats.shape[2]):
        worst = min(worst, float(np.linalg.eigvalsh(mats[:, :, a]).min()))
    return worst


def cube_mass_direct(density: np.ndarray, axis_coords: np.ndarray, h: float,
                     center_idx: tuple, side: float) -> float:
    """Partial-cell-weighted mass of the side-`side` cube centered at a grid
    point, computed by direct looping with minimum-image offsets."""
    d = density.ndim
    n = density.shape[0]
    half = side / 2.0
    m = int(np.ceil(half / h + 0.5))
    offs = np.arange(-m, m + 1)
    w = np.clip(np.minimum(offs * h + h / 2, half) - np.maximum(offs * h - h / 2, -half),
                0.0, None) / h
    total = 0.0
    for combo in itertools.product(range(len(offs)), repeat=d):
        weight = np.prod([w[c] for c in combo])
        if weight == 0.0:
            continue
        pos = tuple((center_idx[ax] + offs[combo[ax]]) % n for ax in range(d))
        total += weight * density[pos]
    return total * h**d
