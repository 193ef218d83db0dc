"""Coupled-system parameters: component count, power, couplings.

The effective coupling is gamma = beta + N*lambda; it must be symmetric and
entrywise nonnegative (defocusing) for the conserved energy to exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    """N coupled equations with power p, kappa in {0,1}, couplings beta/lam."""

    N: int
    p: float
    kappa: int
    beta: np.ndarray
    lam: np.ndarray
    gamma: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"component count must be >= 1, got {self.N}")
        if not self.p > 0:
            raise ValueError(f"nonlinearity power must be positive, got {self.p}")
        if self.kappa not in (0, 1):
            raise ValueError(f"kappa must be 0 or 1, got {self.kappa}")
        beta = np.asarray(self.beta, dtype=float)
        lam = np.asarray(self.lam, dtype=float)
        for name, m in (("beta", beta), ("lambda", lam)):
            if m.shape != (self.N, self.N):
                raise ValueError(f"{name} must be {self.N}x{self.N}, got {m.shape}")
            if not np.array_equal(m, m.T):
                raise ValueError(f"{name} must be symmetric")
            if np.any(m < 0):
                raise ValueError(f"{name} must be entrywise nonnegative")
        object.__setattr__(self, "beta", _frozen(beta))
        object.__setattr__(self, "lam", _frozen(lam))
        object.__setattr__(self, "gamma", _frozen(beta + self.N * lam))

    @property
    def coupling_theory_ok(self) -> bool:
        """Whether every component has a self-interaction (beta_mm or lam_mm
        nonzero), as the well-posedness theory assumes. Zero-coupling control
        runs are allowed; reports label them as outside the hypotheses."""
        return bool(np.all((np.diag(self.beta) != 0) | (np.diag(self.lam) != 0)))

    @property
    def has_offdiagonal_coupling(self) -> bool:
        g = self.gamma
        return bool(np.any(g - np.diag(np.diag(g))))

    def __eq__(self, other):
        if not isinstance(other, SystemParams):
            return NotImplemented
        return (
            self.N == other.N
            and self.p == other.p
            and self.kappa == other.kappa
            and np.array_equal(self.beta, other.beta)
            and np.array_equal(self.lam, other.lam)
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a
