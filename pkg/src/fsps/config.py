"""Problem statement types: initial data and simulation configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .riesz import BACKENDS, SPECTRAL, check_sigma
from .spectral import Grid1D, WaveField, lp_norm

INITIAL_KINDS = ("gaussian", "plane_modulated", "from_file")


@dataclass(frozen=True)
class InitialCondition:
    """Initial datum ``f``.

    gaussian:         amplitude * exp(-(x-c)^2/width^2) * exp(i chirp (x-c)^2)
    plane_modulated:  amplitude * exp(-(x-c)^2/width^2) * exp(i wavenumber x)
    from_file:        samples read from a snapshot file (grid must match)

    If ``l2_norm`` is set the profile is rescaled to that L^2 norm.
    """
    kind: str = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    chirp: float = 0.0
    center: float = 0.0
    wavenumber: float = 0.0
    l2_norm: Optional[float] = None
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise ConfigurationError(
                f"initial.kind must be one of {INITIAL_KINDS}, got {self.kind!r}")
        if self.kind == "from_file" and not self.path:
            raise ConfigurationError("initial.path is required for kind=from_file")
        if self.kind != "from_file" and not self.width > 0:
            raise ConfigurationError(f"initial.width must be positive, got {self.width!r}")
        if self.l2_norm is not None and not self.l2_norm > 0:
            raise ConfigurationError(f"initial.l2_norm must be positive, got {self.l2_norm!r}")

    def build(self, grid: Grid1D) -> WaveField:
        if self.kind == "from_file":
            from .io import read_snapshot
            f, _ = read_snapshot(self.path)
            if f.grid != grid:
                raise ConfigurationError(
                    f"snapshot grid {f.grid!r} does not match configured {grid!r}")
        else:
            x = grid.x
            y = x - self.center
            env = self.amplitude * np.exp(-(y / self.width) ** 2)
            if self.kind == "gaussian":
                vals = env * np.exp(1j * self.chirp * y * y)
            else:
                vals = env * np.exp(1j * self.wavenumber * x)
            f = WaveField(grid, vals)
        if self.l2_norm is not None:
            f = WaveField(grid, f.values * (self.l2_norm / lp_norm(f, 2)))
        return f


@dataclass(frozen=True)
class SimConfig:
    """Full statement of one run.

    ``local_on``, ``nonlocal_on`` and ``potential_offset`` are test hooks that
    switch off a nonlinearity or add a constant gauge shift to the potential.
    ``boundary_tol`` bounds the mass fraction allowed in the outer tenth of the
    box before the run is flagged as feeling the periodic wrap-around.
    """
    sigma: float
    gamma: float
    alpha: int
    grid: Grid1D
    dt: float
    t_end: float
    initial: InitialCondition = field(default_factory=InitialCondition)
    poisson_backend: str = SPECTRAL
    blowup_h1_cap: float = 1e4
    record_every: int = 1
    boundary_tol: float = 1e-8
    local_on: bool = True
    nonlocal_on: bool = True
    potential_offset: float = 0.0
    confirm_blowup: bool = True

    def __post_init__(self):
        check_sigma(self.sigma)
        object.__setattr__(self, "sigma", float(self.sigma))
        if not self.gamma > 1:
            raise ConfigurationError(f"gamma must exceed 1, got {self.gamma!r}")
        if self.alpha not in (1, -1):
            raise ConfigurationError(f"alpha must be +1 or -1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", int(self.alpha))
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not self.t_end > self.dt:
            raise ConfigurationError(f"t_end must exceed dt, got t_end={self.t_end!r}")
        if self.poisson_backend not in BACKENDS:
            raise ConfigurationError(
                f"backend must be one of {BACKENDS}, got {self.poisson_backend!r}")
        if not self.blowup_h1_cap > 0:
            raise ConfigurationError(f"blowup_h1_cap must be positive, got {self.blowup_h1_cap!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigurationError(
                f"record_every must be an integer >= 1, got {self.record_every!r}")
        object.__setattr__(self, "record_every", int(self.record_every))

    @property
    def out_of_scope(self) -> bool:
        """True for L^2-supercritical powers (gamma > 5)."""
        return self.gamma > 5

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def replace(self, **changes) -> "SimConfig":
        return replace(self, **changes)
