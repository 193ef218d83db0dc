"""Run configuration: YAML key-tree, fully validated before any allocation.

Validation failures name the offending path (e.g. "system.beta: must be
symmetric"). All quantities are in natural units (hbar = 1), times and
lengths dimensionless.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .grid import GridSpec
from .morawetz import WeightSpec
from .state import FieldState, make_initial
from .system import SystemParams


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending path."""


@dataclass
class GridConfig:
    d: int = 1
    n: int = 256
    L: float = 40.0


@dataclass
class SystemConfig:
    N: int = 1
    p: float = 2.0
    kappa: int = 1
    beta: list = field(default_factory=lambda: [[1.0]])
    lam: list = field(default_factory=lambda: [[0.0]])


@dataclass
class TimeConfig:
    dt: float = 1e-3
    t_end: float = 1.0
    record_every: int = 10


@dataclass
class InitialConfig:
    kind: str = "gaussian_packet"
    seed: int = 0
    params: dict = field(default_factory=dict)


@dataclass
class WeightConfig:
    kind: str = "quadratic"
    epsilon_cells: float = 2.0
    window: int = 0


@dataclass
class DiagnosticsConfig:
    q_list: list = field(default_factory=lambda: [4.0])
    weight: WeightConfig = field(default_factory=WeightConfig)
    interaction: bool = False
    boundary_threshold: float = 1e-8
    verify_tolerance: float = 1e-6


@dataclass
class ScatteringConfig:
    checkpoint_times: list = field(default_factory=list)


@dataclass
class OutputConfig:
    directory: str = "out"
    formats: list = field(default_factory=lambda: ["csv", "checkpoint"])


@dataclass
class RunConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    system: SystemConfig = field(default_factory=SystemConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    scattering: ScatteringConfig = field(default_factory=ScatteringConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        cfg = cls()
        sections = {
            "grid": (cfg.grid, {}),
            "system": (cfg.system, {"lambda": "lam"}),
            "time": (cfg.time, {}),
            "initial": (cfg.initial, {}),
            "diagnostics": (cfg.diagnostics, {}),
            "scattering": (cfg.scattering, {}),
            "output": (cfg.output, {}),
        }
        for name, body in (raw or {}).items():
            if name not in sections:
                raise ConfigError(f"{name}: unknown config section")
            target, renames = sections[name]
            for key, value in (body or {}).items():
                attr = renames.get(key, key)
                if name == "diagnostics" and attr == "weight":
                    for wk, wv in (value or {}).items():
                        if not hasattr(cfg.diagnostics.weight, wk):
                            raise ConfigError(f"diagnostics.weight.{wk}: unknown key")
                        setattr(cfg.diagnostics.weight, wk, wv)
                    continue
                if not hasattr(target, attr):
                    raise ConfigError(f"{name}.{key}: unknown key")
                setattr(target, attr, value)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        d = asdict(self)
        d["system"]["lambda"] = d["system"].pop("lam")
        return d

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        return cls.from_dict(raw or {})

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yaml.safe_dump(self.to_dict(), fh, sort_keys=False)

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        g, s, t = self.grid, self.system, self.time
        _require(g.d in (1, 2, 3), "grid.d", "must be 1, 2 or 3")
        _require(isinstance(g.n, int) and g.n >= 8, "grid.n", "must be an integer >= 8")
        _require(_num(g.L) > 0, "grid.L", "must be positive")
        _require(isinstance(s.N, int) and s.N >= 1, "system.N", "must be an integer >= 1")
        _require(_num(s.p) > 0, "system.p", "must be positive")
        _require(s.kappa in (0, 1), "system.kappa", "must be 0 or 1")
        for name, m in (("system.beta", s.beta), ("system.lambda", s.lam)):
            arr = np.asarray(m, dtype=float)
            _require(arr.shape == (s.N, s.N), name, f"must be {s.N}x{s.N}")
            _require(np.array_equal(arr, arr.T), name, "must be symmetric")
            _require(bool(np.all(arr >= 0)), name, "must be entrywise nonnegative")
        if s.N > 1 and np.any(np.asarray(s.beta) + np.asarray(s.lam)
                              - np.diag(np.diag(np.asarray(s.beta) + np.asarray(s.lam)))):
            _require(_num(s.p) >= 1, "system.p", "must be >= 1 for coupled systems")
        _require(_num(t.dt) > 0, "time.dt", "must be positive")
        _require(_num(t.t_end) >= 0, "time.t_end", "must be nonnegative")
        _require(isinstance(t.record_every, int) and t.record_every >= 1,
                 "time.record_every", "must be an integer >= 1")
        _require(self.initial.kind in ("gaussian_packet", "multi_bump", "random_schwartz"),
                 "initial.kind", "unknown initial kind")
        _require(isinstance(self.initial.seed, int), "initial.seed", "must be an integer")
        for q in self.diagnostics.q_list:
            _require(_num(q) >= 1, "diagnostics.q_list", "entries must be >= 1")
        w = self.diagnostics.weight
        _require(w.kind in ("quadratic", "radial_eps"), "diagnostics.weight.kind",
                 "must be 'quadratic' or 'radial_eps'")
        _require(_num(w.epsilon_cells) > 0, "diagnostics.weight.epsilon_cells",
                 "must be positive")
        _require(isinstance(w.window, int) and w.window >= 0,
                 "diagnostics.weight.window", "must be an integer >= 0")
        _require(_num(self.diagnostics.boundary_threshold) > 0,
                 "diagnostics.boundary_threshold", "must be positive")
        _require(_num(self.diagnostics.verify_tolerance) > 0,
                 "diagnostics.verify_tolerance", "must be positive")
        times = list(self.scattering.checkpoint_times)
        _require(all(_num(x) > 0 for x in times), "scattering.checkpoint_times",
                 "must be positive")
        _require(times == sorted(times), "scattering.checkpoint_times",
                 "must be increasing")
        for fmt in self.output.formats:
            _require(fmt in ("csv", "checkpoint"), "output.formats",
                     f"unknown format {fmt!r}")

    # -- builders -------------------------------------------------------------

    def build_grid(self) -> GridSpec:
        return GridSpec(d=self.grid.d, n=self.grid.n, L=float(self.grid.L))

    def build_system(self) -> SystemParams:
        return SystemParams(N=self.system.N, p=float(self.system.p),
                            kappa=self.system.kappa,
                            beta=np.asarray(self.system.beta, dtype=float),
                            lam=np.asarray(self.system.lam, dtype=float))

    def build_initial(self, grid: GridSpec, sys: SystemParams) -> FieldState:
        return make_initial(self.initial.kind, self.initial.params, grid, sys,
                            seed=self.initial.seed)

    def build_weight(self, grid: GridSpec) -> WeightSpec:
        w = self.diagnostics.weight
        if w.kind == "quadratic":
            return WeightSpec.quadratic()
        return WeightSpec.radial(grid, epsilon_cells=float(w.epsilon_cells),
                                 window=w.window)

    def interaction_weight(self, grid: GridSpec) -> WeightSpec:
        """Radial weight for interaction quantities (always radial, whatever
        the identity weight is)."""
        w = self.diagnostics.weight
        return WeightSpec.radial(grid, epsilon_cells=float(w.epsilon_cells),
                                 window=w.window)


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {message}")


def _num(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"expected a number, got {x!r}")
    return float(x)
