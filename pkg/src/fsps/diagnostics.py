"""Observables along a trajectory.

Energy convention:
    E = 1/4 ||dPsi||^2 + 1/4 int A |Psi|^2 + alpha/(gamma+1) int |Psi|^{gamma+1}
with A taken in the gauge the dynamics uses (mean-free for the spectral
backend, free-space for the quadrature backend).  A constant shift c of A moves
E by c*||Psi||_2^2/4, so drift comparisons are only meaningful within one gauge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .riesz import SPECTRAL, solve_poisson
from .spectral import WaveField, fft_unitary, gradient, lp_norm


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    momentum: float
    h1: float
    sup_norm: float
    theta: float
    l4linf_accum: float


def _potential(psi, sigma, backend):
    rho = np.abs(psi.values) ** 2
    return solve_poisson(rho, sigma, backend, grid=psi.grid).values


def energy_terms(psi: WaveField, sigma, gamma, alpha, backend=SPECTRAL,
                 local_on=True, nonlocal_on=True):
    """Return ``(kinetic, interaction, power)``; their sum is the energy."""
    dx = psi.grid.dx
    c = fft_unitary(psi.grid, psi.values)
    xi = psi.grid.fft_frequencies
    kinetic = 0.25 * float(np.sum(xi * xi * np.abs(c) ** 2))
    rho = np.abs(psi.values) ** 2
    interaction = 0.0
    if nonlocal_on:
        interaction = 0.25 * float(np.sum(_potential(psi, sigma, backend) * rho) * dx)
    power = 0.0
    if local_on:
        power = alpha / (gamma + 1.0) * float(np.sum(rho ** ((gamma + 1.0) / 2.0)) * dx)
    return kinetic, interaction, power


def energy(psi: WaveField, sigma, gamma, alpha, backend=SPECTRAL,
           local_on=True, nonlocal_on=True) -> float:
    return math.fsum(energy_terms(psi, sigma, gamma, alpha, backend, local_on, nonlocal_on))


def momentum(psi: WaveField) -> float:
    """Im int conj(Psi) dPsi/dx dx."""
    return float(np.sum(np.imag(np.conj(psi.values) * gradient(psi))) * psi.grid.dx)


def time_derivative(psi: WaveField, cfg) -> np.ndarray:
    """dPsi/dt = i (Laplacian Psi / 2 - A Psi - alpha |Psi|^{gamma-1} Psi)."""
    xi = psi.grid.fft_frequencies
    v = psi.values
    rhs = -0.5 * np.fft.ifft(xi * xi * np.fft.fft(v))
    if cfg.nonlocal_on:
        a = _potential(psi, cfg.sigma, cfg.poisson_backend) + cfg.potential_offset
        rhs = rhs - a * v
    if cfg.local_on:
        rhs = rhs - cfg.alpha * np.abs(v) ** (cfg.gamma - 1.0) * v
    return 1j * rhs


def oscillation_speed(psi: WaveField, cfg) -> float:
    """theta = int |Psi|^2 dS/dt = int Im(conj(Psi) dPsi/dt) dx.

    The |Psi|^2 weight cancels the division hidden in dS/dt, so nodes of Psi
    need no special treatment.
    """
    dpsi = time_derivative(psi, cfg)
    return float(np.sum(np.imag(np.conj(psi.values) * dpsi)) * psi.grid.dx)


def l4linf_update(state: float, psi: WaveField, dt: float) -> float:
    """Left-endpoint update of int ||Psi(s)||_inf^4 ds (the fourth power)."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    return state + float(np.max(np.abs(psi.values))) ** 4 * dt


def l4linf_value(state: float) -> float:
    return state ** 0.25


def gn_check(f: WaveField, beta: float):
    """Return ``(lhs, rhs_core)`` of the Gagliardo-Nirenberg inequality.

    lhs = ||f||_{beta+1}^{beta+1},
    rhs_core = ||f'||_2^{(beta-1)/2} ||f||_2^{(beta+3)/2}.
    """
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta!r}")
    lhs = float(np.sum(np.abs(f.values) ** (beta + 1.0)) * f.grid.dx)
    c = fft_unitary(f.grid, f.values)
    xi = f.grid.fft_frequencies
    grad = math.sqrt(float(np.sum(xi * xi * np.abs(c) ** 2)))
    l2 = lp_norm(f, 2)
    rhs = grad ** ((beta - 1.0) / 2.0) * l2 ** ((beta + 3.0) / 2.0)
    return lhs, rhs


def critical_threshold() -> float:
    """Mass threshold (2/3)^{1/4} (pi/2)^{1/2} for the focusing quintic case."""
    return (2.0 / 3.0) ** 0.25 * math.sqrt(math.pi / 2.0)


def h1_from_coeffs(grid, coeffs) -> float:
    xi = grid.fft_frequencies
    return math.sqrt(float(np.sum((1.0 + xi * xi) * np.abs(coeffs) ** 2)))


def record(psi: WaveField, cfg, t: float, l4_state: float) -> DiagnosticsRecord:
    c = fft_unitary(psi.grid, psi.values)
    xi = psi.grid.fft_frequencies
    return DiagnosticsRecord(
        t=float(t),
        mass=lp_norm(psi, 2),
        energy=energy(psi, cfg.sigma, cfg.gamma, cfg.alpha, cfg.poisson_backend,
                      cfg.local_on, cfg.nonlocal_on),
        momentum=float(np.sum(xi * np.abs(c) ** 2)),
        h1=math.sqrt(float(np.sum((1.0 + xi * xi) * np.abs(c) ** 2))),
        sup_norm=float(np.max(np.abs(psi.values))),
        theta=oscillation_speed(psi, cfg),
        l4linf_accum=l4linf_value(l4_state),
    )
