"""Periodic torus discretization and spectral calculus.

The simulation domain is the centered box [-L/2, L/2)^d sampled on n points
per axis. The forward transform is the plain (unnormalized) FFT, the inverse
carries 1/M; every physical integral uses the h^d quadrature weight
explicitly, and spectral sums use h^d/M so that Parseval holds exactly:

    h^d sum_x |u|^2 == (h^d/M) sum_k |fft(u)_k|^2
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft


def fft_workers() -> int:
    """Worker-thread cap for transforms, from Q4NL_THREADS (default: all cores).

    Thread count only affects speed: pocketfft computes each 1-d line in a
    single thread, so results are bit-identical for any worker count.
    """
    raw = os.environ.get("Q4NL_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = os.cpu_count() or 1
    return cap


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: dimension d, n points per axis, side length L."""

    d: int
    n: int
    L: float

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {self.d}")
        if self.n < 8:
            raise ValueError(f"need at least 8 points per axis, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"side length must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def num_points(self) -> int:
        return self.n**self.d

    @property
    def cell_volume(self) -> float:
        return self.h**self.d

    @property
    def spectral_weight(self) -> float:
        """Weight making sum_k w |fft(u)_k|^2 equal the physical L^2 integral."""
        return self.cell_volume / self.num_points

    @cached_property
    def axis_coords(self) -> np.ndarray:
        """Centered coordinates along one axis, from -L/2 to L/2 - h."""
        return (np.arange(self.n) - self.n // 2) * self.h

    @cached_property
    def axis_coords_wrapped(self) -> np.ndarray:
        """Coordinates in FFT index order mapped to [-L/2, L/2).

        Entry j is the signed displacement j*h wrapped to the symmetric
        interval, so kernel[(i - m) % n] samples the kernel at the
        minimum-image separation between points i and m.
        """
        idx = np.arange(self.n)
        signed = np.where(idx < (self.n + 1) // 2, idx, idx - self.n)
        return signed * self.h

    @cached_property
    def axis_wavenumbers(self) -> np.ndarray:
        """k_m = 2*pi*m~/L with m~ the signed FFT index."""
        return 2.0 * np.pi * scipy.fft.fftfreq(self.n, d=self.h)

    @cached_property
    def axis_wavenumbers_odd(self) -> np.ndarray:
        """Wavenumbers for odd-order derivatives: Nyquist mode zeroed.

        Keeps spectral first derivatives of real fields real (the lone
        Nyquist mode has no conjugate partner on even grids).
        """
        k = self.axis_wavenumbers.copy()
        if self.n % 2 == 0:
            k[self.n // 2] = 0.0
        return k

    def _mesh(self, axis_values: np.ndarray) -> list[np.ndarray]:
        out = []
        for j in range(self.d):
            shape = [1] * self.d
            shape[j] = self.n
            out.append(axis_values.reshape(shape))
        return out

    @cached_property
    def coords(self) -> list[np.ndarray]:
        """Centered coordinate arrays, broadcastable, row-major axis order."""
        return self._mesh(self.axis_coords)

    @cached_property
    def coords_wrapped(self) -> list[np.ndarray]:
        return self._mesh(self.axis_coords_wrapped)

    @cached_property
    def k(self) -> list[np.ndarray]:
        return self._mesh(self.axis_wavenumbers)

    @cached_property
    def k_odd(self) -> list[np.ndarray]:
        return self._mesh(self.axis_wavenumbers_odd)

    @cached_property
    def k_sq(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for kj in self.k:
            out = out + kj**2
        return out

    @cached_property
    def k_quad(self) -> np.ndarray:
        return self.k_sq**2

    @cached_property
    def radius_sq(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for xj in self.coords:
            out = out + xj**2
        return out

    # -- transforms ---------------------------------------------------------

    def fft(self, u: np.ndarray) -> np.ndarray:
        return scipy.fft.fftn(u, axes=self._field_axes(u), workers=fft_workers())

    def ifft(self, uhat: np.ndarray) -> np.ndarray:
        return scipy.fft.ifftn(uhat, axes=self._field_axes(uhat), workers=fft_workers())

    def _field_axes(self, u: np.ndarray) -> tuple[int, ...]:
        return tuple(range(u.ndim - self.d, u.ndim))

    # -- calculus -----------------------------------------------------------

    def integrate(self, f: np.ndarray) -> float | np.ndarray:
        """h^d-weighted sum over the grid axes (pairwise deterministic order)."""
        axes = self._field_axes(f)
        return self.cell_volume * f.sum(axis=axes)

    def gradient(self, u: np.ndarray) -> list[np.ndarray]:
        uhat = self.fft(u)
        return [self.ifft(1j * kj * uhat) for kj in self.k_odd]

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        return self.ifft(-self.k_sq * self.fft(u))

    def hessian(self, u: np.ndarray) -> np.ndarray:
        """All second derivatives; shape (d, d) + field shape."""
        uhat = self.fft(u)
        out = np.empty((self.d, self.d) + u.shape, dtype=complex)
        for i in range(self.d):
            for j in range(i, self.d):
                if i == j:
                    mult = -self.k[i] ** 2
                else:
                    mult = -self.k_odd[i] * self.k_odd[j]
                out[i, j] = self.ifft(mult * uhat)
                out[j, i] = out[i, j]
        return out

    # -- boundary shell -----------------------------------------------------

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        """Points within 4h of a box face (the contamination monitor shell)."""
        edge = self.L / 2 - 4 * self.h
        mask = np.zeros(self.shape, dtype=bool)
        for xj in self.coords:
            mask |= np.broadcast_to(np.abs(xj) > edge, self.shape)
        return mask
