"""Time-series CSV and binary checkpoint serialization.

CSV column order is a stable contract (plotting tools depend on it):
t, mass_1..mass_N, energy_total, energy_biharmonic, energy_gradient,
energy_potential, h2_1..h2_N, lq_<q> per requested q, boundary_mass,
morawetz_action, and (optionally) interaction_action.

Checkpoints are little-endian binary: magic "Q4NL", u32 version, u32 d,
u32 N, d x u32 points per axis, f64 L, f64 t, u32 kappa, f64 p, then per
component the complex field values as interleaved (re, im) f64 pairs in
row-major order. Round trips are bit-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridSpec
from .state import FieldState
from .system import SystemParams

CHECKPOINT_MAGIC = b"Q4NL"
CHECKPOINT_VERSION = 1


class CheckpointFormatError(IOError):
    pass


def q_column(q: float) -> str:
    return f"lq_{q:g}"


def csv_columns(N: int, q_list: list[float], interaction: bool) -> list[str]:
    cols = ["t"]
    cols += [f"mass_{mu + 1}" for mu in range(N)]
    cols += ["energy_total", "energy_biharmonic", "energy_gradient", "energy_potential"]
    cols += [f"h2_{mu + 1}" for mu in range(N)]
    cols += [q_column(q) for q in q_list]
    cols += ["boundary_mass", "morawetz_action"]
    if interaction:
        cols.append("interaction_action")
    return cols


@dataclass
class DiagnosticsRecord:
    """One recorded time sample; values keyed by CSV column name."""

    values: dict

    def row(self, columns: list[str]) -> list[float]:
        return [self.values[c] for c in columns]


def format_float(x: float) -> str:
    return repr(float(x))


class SeriesWriter:
    """Streams diagnostics rows to a CSV file with deterministic formatting
    (same run, same bytes). Single-writer; call close() or use as a context
    manager."""

    def __init__(self, path: str | Path, columns: list[str]):
        self.columns = list(columns)
        self._fh = open(path, "w", encoding="ascii", newline="\n")
        self._fh.write(",".join(self.columns) + "\n")

    def write(self, record: DiagnosticsRecord) -> None:
        self._fh.write(",".join(format_float(v) for v in record.row(self.columns)) + "\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "SeriesWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_series(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Header and data matrix of a diagnostics CSV."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


# -- checkpoints -----------------------------------------------------------------

def write_checkpoint(path: str | Path, state: FieldState, grid: GridSpec,
                     sys: SystemParams) -> None:
    header = CHECKPOINT_MAGIC + struct.pack("<III", CHECKPOINT_VERSION, grid.d, sys.N)
    header += struct.pack(f"<{grid.d}I", *((grid.n,) * grid.d))
    header += struct.pack("<ddId", grid.L, state.t, sys.kappa, sys.p)
    payload = np.ascontiguousarray(state.u, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


@dataclass(frozen=True)
class CheckpointHeader:
    version: int
    d: int
    N: int
    n_axes: tuple[int, ...]
    L: float
    t: float
    kappa: int
    p: float


def read_checkpoint(path: str | Path) -> tuple[CheckpointHeader, FieldState]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CHECKPOINT_MAGIC:
            raise CheckpointFormatError(f"bad magic {magic!r}, expected {CHECKPOINT_MAGIC!r}")
        version, d, N = struct.unpack("<III", fh.read(12))
        if version != CHECKPOINT_VERSION:
            raise CheckpointFormatError(
                f"checkpoint format version {version} not supported "
                f"(expected {CHECKPOINT_VERSION})")
        n_axes = struct.unpack(f"<{d}I", fh.read(4 * d))
        L, t, kappa, p = struct.unpack("<ddId", fh.read(28))
        points = int(np.prod(n_axes))
        raw = fh.read(N * points * 16)
        if len(raw) != N * points * 16:
            raise CheckpointFormatError("truncated checkpoint payload")
        extra = fh.read(1)
        if extra:
            raise CheckpointFormatError("trailing bytes after checkpoint payload")
    u = np.frombuffer(raw, dtype="<c16").reshape((N,) + tuple(n_axes)).astype(np.complex128)
    header = CheckpointHeader(version=version, d=d, N=N, n_axes=n_axes,
                              L=L, t=t, kappa=kappa, p=p)
    return header, FieldState(t, u)
