import numpy as np
import pytest

from q4nl import FieldState, GridSpec, SystemParams, make_initial


@pytest.fixture
def grid1d():
    return GridSpec(1, 256, 40.0)


@pytest.fixture
def single_sys():
    return SystemParams(N=1, p=2.0, kappa=1,
                        beta=np.array([[1.0]]), lam=np.array([[0.0]]))


@pytest.fixture
def two_sys():
    return SystemParams(N=2, p=2.0, kappa=1,
                        beta=np.array([[1.0, 0.3], [0.3, 0.8]]),
                        lam=np.array([[0.2, 0.1], [0.1, 0.2]]))


@pytest.fixture
def gaussian1d(grid1d, single_sys):
    return make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 1.0},
                        grid1d, single_sys, seed=1)


def plane_wave(grid: GridSpec, amplitude: complex, mode: tuple) -> FieldState:
    """Single Fourier mode A exp(i k.x) with k = 2 pi mode / L."""
    phase = np.zeros(grid.shape)
    for ax, m in enumerate(mode):
        k = 2.0 * np.pi * m / grid.L
        phase = phase + k * np.broadcast_to(grid.coords[ax], grid.shape)
    return FieldState(0.0, (amplitude * np.exp(1j * phase))[None, ...])


def random_state(grid: GridSpec, N: int, seed: int, k_sigma: float = 1.0,
                 x_sigma: float | None = None) -> FieldState:
    """Smooth random field, spatially localized so torus diagnostics apply."""
    rng = np.random.default_rng(seed)
    x_sigma = x_sigma if x_sigma is not None else grid.L / 8.0
    env_k = np.exp(-grid.k_sq / (2.0 * k_sigma**2))
    env_x = np.exp(-grid.radius_sq / (2.0 * x_sigma**2))
    u = np.empty((N,) + grid.shape, dtype=complex)
    for mu in range(N):
        coef = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        u[mu] = grid.ifft(coef * env_k) * env_x
    return FieldState(0.0, u)
