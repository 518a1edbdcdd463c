"""Time evolution of

    i dPsi/dt + 1/2 Laplacian Psi = A Psi + alpha |Psi|^{gamma-1} Psi,
    (-Laplacian)^{sigma/2} A = |Psi|^2.

``strang_step`` is the workhorse: half free flow, exact pointwise phase
rotation by the (real) nonlinear potential, half free flow.  Because both
substeps are unitary the L^2 norm is conserved up to roundoff.

``duhamel_iterate`` solves the integral form by Picard iteration on a fixed
time mesh and serves as an independent check of the splitting scheme.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.signal import fftconvolve

from . import diagnostics
from .config import SimConfig
from .errors import ConfigurationError, ContractionFailure
from .exponents import working_interval
from .riesz import (QUADRATURE, SPECTRAL, inverse_multiplier, riesz_kernel_weights,
                    solve_poisson)
from .spectral import WaveField, fft_unitary, lp_norm

log = logging.getLogger(__name__)


def nonlocal_term(psi: WaveField, sigma, backend=SPECTRAL) -> WaveField:
    """A * Psi with A solving the fractional Poisson equation for |Psi|^2."""
    a = solve_poisson(np.abs(psi.values) ** 2, sigma, backend, grid=psi.grid)
    return psi.with_values(a.values * psi.values, gauge=a.gauge)


def local_term(psi: WaveField, gamma, alpha) -> WaveField:
    v = psi.values
    return psi.with_values(alpha * np.abs(v) ** (gamma - 1.0) * v)


class _Kernel:
    """Precomputed multipliers and potential solver for one (config, dt)."""

    def __init__(self, cfg: SimConfig, dt: float):
        self.cfg = cfg
        self.dt = dt
        g = cfg.grid
        self.xi2 = g.fft_frequencies ** 2
        self.half = np.exp(-0.25j * dt * self.xi2)
        if cfg.nonlocal_on:
            if cfg.poisson_backend == SPECTRAL:
                self.inv = inverse_multiplier(g, cfg.sigma)
            else:
                self.weights = riesz_kernel_weights(g, cfg.sigma)

    def potential(self, rho):
        """Potential for one density (1-D) or a stack of densities (rows)."""
        n = self.cfg.grid.n_points
        if self.cfg.poisson_backend == SPECTRAL:
            return np.fft.ifft(np.fft.fft(rho, axis=-1) * self.inv, axis=-1).real
        if rho.ndim == 1:
            return fftconvolve(rho, self.weights)[n - 1:2 * n - 1]
        w = np.broadcast_to(self.weights, (rho.shape[0], self.weights.shape[0]))
        return fftconvolve(rho, w, axes=-1)[:, n - 1:2 * n - 1]

    def real_potential(self, v):
        """A + offset + alpha |v|^{gamma-1}: the real field multiplying Psi."""
        cfg = self.cfg
        rho = (v * np.conj(v)).real
        out = np.zeros(rho.shape)
        if cfg.nonlocal_on:
            out += self.potential(rho) + cfg.potential_offset
        if cfg.local_on:
            out += cfg.alpha * rho ** ((cfg.gamma - 1.0) / 2.0)
        return out

    def step_values(self, v):
        """One Strang step on raw samples; returns (new samples, new FFT)."""
        w = np.fft.ifft(self.half * np.fft.fft(v))
        if self.cfg.local_on or self.cfg.nonlocal_on:
            w = w * np.exp(-1j * self.dt * self.real_potential(w))
        vhat = self.half * np.fft.fft(w)
        return np.fft.ifft(vhat), vhat


def strang_step(psi: WaveField, cfg: SimConfig, dt: Optional[float] = None) -> WaveField:
    """Advance by one step (``dt`` defaults to ``cfg.dt``; negative runs backwards)."""
    k = _Kernel(cfg, cfg.dt if dt is None else dt)
    v, _ = k.step_values(psi.values)
    return WaveField(psi.grid, v)


@dataclass
class PicardResult:
    field: WaveField
    iterations: int
    increments: List[float]
    contraction_factor: float
    converged: bool


def duhamel_iterate(f: WaveField, cfg: SimConfig, horizon: float, max_iter: int = 50,
                    tol: float = 1e-12) -> PicardResult:
    """Picard iteration of the Duhamel map on [0, horizon].

    Psi_{k+1}(t) = S(t) f - i int_0^t S(t-s) [A Psi_k + alpha |Psi_k|^{gamma-1} Psi_k](s) ds

    The time integral uses the trapezoid rule on a uniform mesh with step close
    to ``cfg.dt``; the seed is the free evolution S(t) f.  Iteration stops when
    the sup-in-time L^2 increment drops below ``tol`` or after ``max_iter``
    sweeps.  Raises ContractionFailure when the increment grows three times in
    a row.
    """
    if not horizon > 0:
        raise ConfigurationError(f"horizon must be positive, got {horizon!r}")
    if max_iter < 1:
        raise ConfigurationError(f"max_iter must be >= 1, got {max_iter!r}")
    m = max(1, int(round(horizon / cfg.dt)))
    h = horizon / m
    kern = _Kernel(cfg, h)
    s = h * np.arange(m + 1)
    prop = np.exp(-0.5j * s[:, None] * kern.xi2[None, :])
    fhat = np.fft.fft(f.values)
    psi = np.fft.ifft(prop * fhat, axis=-1)
    dx = cfg.grid.dx
    increments = []
    nonlinear = cfg.local_on or cfg.nonlocal_on
    converged = False
    for it in range(1, max_iter + 1):
        if nonlinear:
            g = np.conj(prop) * np.fft.fft(kern.real_potential(psi) * psi, axis=-1)
            cum = np.zeros_like(g)
            cum[1:] = np.cumsum(0.5 * h * (g[1:] + g[:-1]), axis=0)
            new = np.fft.ifft(prop * (fhat - 1j * cum), axis=-1)
        else:
            new = np.fft.ifft(prop * fhat, axis=-1)
        inc = float(np.sqrt(np.max(np.sum(np.abs(new - psi) ** 2, axis=-1)) * dx))
        increments.append(inc)
        psi = new
        if inc < tol:
            converged = True
            break
        if len(increments) >= 4 and all(
                increments[-j] > increments[-j - 1] for j in (1, 2, 3)):
            raise ContractionFailure(
                f"Picard increments grew for 3 consecutive iterations: {increments[-4:]}",
                increments)
    floor = 1e-13 * max(lp_norm(f, 2), 1e-300)
    ratios = [b / a for a, b in zip(increments, increments[1:]) if a > floor and b > floor]
    factor = ratios[-1] if ratios else 0.0
    return PicardResult(WaveField(f.grid, psi[-1]), it, increments, factor, converged)


@dataclass(frozen=True)
class RunStatus:
    kind: str  # "completed" | "blowup_detected" | "numeric_failure"
    t: Optional[float] = None
    message: str = ""


@dataclass
class Trajectory:
    config: SimConfig
    times: List[float] = field(default_factory=list)
    snapshots: List[WaveField] = field(default_factory=list)
    diagnostics: List[diagnostics.DiagnosticsRecord] = field(default_factory=list)
    status: RunStatus = RunStatus("completed")
    boundary_mass: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def final(self) -> WaveField:
        return self.snapshots[-1]

    @property
    def boundary_ok(self) -> bool:
        return self.boundary_mass <= self.config.boundary_tol


def _boundary_fraction(grid, v):
    rho = np.abs(v) ** 2
    edge = np.abs(grid.x) > 0.9 * grid.half_length
    total = rho.sum()
    return float(rho[edge].sum() / total) if total > 0 else 0.0


def _scope_notes(cfg):
    notes = []
    if cfg.out_of_scope:
        notes.append("gamma > 5: L2-supercritical, outside the supported scope")
    elif not working_interval(cfg.sigma, cfg.gamma).feasible:
        notes.append("(sigma, gamma) outside the region where the contraction proof applies")
    return notes


def run_simulation(cfg: SimConfig) -> Trajectory:
    """Evolve from ``cfg.initial`` to ``cfg.t_end`` with Strang steps.

    Diagnostics and snapshots are recorded every ``record_every`` steps and at
    the final time.  The run stops early with ``blowup_detected`` when the H^1
    norm exceeds ``blowup_h1_cap`` (confirmed by a rerun at dt/2 unless
    ``confirm_blowup`` is off) or with ``numeric_failure`` on non-finite data.
    """
    grid = cfg.grid
    psi0 = cfg.initial.build(grid)
    h1_0 = math.sqrt(lp_norm(psi0, 2) ** 2 + float(np.sum(
        grid.fft_frequencies ** 2 * np.abs(fft_unitary(grid, psi0.values)) ** 2)))
    if not cfg.blowup_h1_cap > h1_0:
        raise ConfigurationError(
            f"blowup_h1_cap ({cfg.blowup_h1_cap}) must exceed the initial H1 norm ({h1_0:.6g})")
    traj = Trajectory(cfg, notes=_scope_notes(cfg))
    for note in traj.notes:
        log.warning(note)

    kern = _Kernel(cfg, cfg.dt)
    n_steps = cfg.n_steps
    l4 = 0.0
    v = psi0.values
    bmax = _boundary_fraction(grid, v)

    def rec(n, values):
        f = WaveField(grid, values)
        t = n * cfg.dt
        traj.times.append(t)
        traj.snapshots.append(f)
        traj.diagnostics.append(diagnostics.record(f, cfg, t, l4))

    with np.errstate(over="ignore", invalid="ignore"):
        try:
            rec(0, v)
            for n in range(1, n_steps + 1):
                l4 += float(np.max(np.abs(v))) ** 4 * cfg.dt
                v_new, vhat = kern.step_values(v)
                h1 = math.sqrt(float(np.sum((1.0 + kern.xi2) * np.abs(vhat) ** 2))
                               * grid.dx / grid.n_points)
                t = n * cfg.dt
                if not (math.isfinite(h1) and np.isfinite(v_new).all()):
                    traj.status = RunStatus("numeric_failure", t, "non-finite samples")
                    break
                v = v_new
                bmax = max(bmax, _boundary_fraction(grid, v))
                if h1 > cfg.blowup_h1_cap:
                    rec(n, v)
                    traj.status = _classify_cap_exceedance(cfg, t, h1)
                    break
                if n % cfg.record_every == 0 or n == n_steps:
                    rec(n, v)
        except ArithmeticError as exc:  # overflow in diagnostics, non-finite fields
            t = traj.times[-1] if traj.times else 0.0
            traj.status = RunStatus("numeric_failure", t, f"arithmetic failure: {exc}")
    traj.boundary_mass = bmax
    if bmax > cfg.boundary_tol:
        traj.notes.append(
            f"boundary mass fraction {bmax:.3g} exceeds tolerance {cfg.boundary_tol:.3g}")
    return traj


def _classify_cap_exceedance(cfg, t, h1):
    msg = f"H1 norm {h1:.6g} exceeded cap {cfg.blowup_h1_cap:.6g}"
    if not cfg.confirm_blowup:
        return RunStatus("blowup_detected", t, msg)
    fine = run_simulation(cfg.replace(dt=cfg.dt / 2, record_every=10 ** 9,
                                      confirm_blowup=False))
    if fine.status.kind == "blowup_detected":
        return RunStatus("blowup_detected", t,
                         msg + f"; confirmed at dt/2 (t={fine.status.t:.6g})")
    return RunStatus("numeric_failure", t, msg + "; not reproduced at dt/2")
