"""Fractional Laplacian, Riesz potentials and the fractional Poisson solve.

Two independent routes to the potential A solving (-Laplacian)^{s/2} A = rho:

* ``solve_poisson_spectral`` applies |xi|^{-s} on the periodic grid (zero
  mode removed), which is the defining multiplier.
* ``solve_poisson_quadrature`` convolves rho with the Riesz kernel
  c_s |x|^{-(1-s)} on the real line (zero padding), using exact cell
  integrals of the integrable singularity.

Constant conventions: with A-hat = |xi|^{-s} rho-hat the kernel constant is
c_s = Gamma((1-s)/2) / (2^s sqrt(pi) Gamma(s/2)).  The textbook constant
sqrt(pi) 2^{1-s} Gamma((1-s)/2) / Gamma(s/2) is exactly 2 pi c_s; it is exposed
by ``riesz_constants`` for reference but never used to build potentials.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gamma as gamma_fn

from .errors import ConfigurationError, DomainError, InputError
from .spectral import Grid1D, WaveField, lp_norm

SPECTRAL = "spectral"
QUADRATURE = "quadrature"
BACKENDS = (SPECTRAL, QUADRATURE)


def check_sigma(sigma) -> float:
    s = float(sigma)
    if not 0.0 < s < 1.0:
        raise DomainError(f"sigma must lie strictly inside (0,1), got {sigma!r}")
    return s


@dataclass(frozen=True)
class RieszOrder:
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_sigma(self.sigma))

    def __float__(self):
        return self.sigma


def _sigma(sigma):
    return sigma.sigma if isinstance(sigma, RieszOrder) else check_sigma(sigma)


def riesz_constants(sigma):
    """Return ``(textbook_c, kernel_c)``; ``textbook_c == 2*pi*kernel_c``."""
    s = _sigma(sigma)
    ratio = gamma_fn((1.0 - s) / 2.0) / gamma_fn(s / 2.0)
    textbook_c = np.sqrt(np.pi) * 2.0 ** (1.0 - s) * ratio
    kernel_c = ratio / (2.0 ** s * np.sqrt(np.pi))
    return float(textbook_c), float(kernel_c)


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential samples.

    ``values`` is what the dynamics uses: mean-free for the spectral backend,
    the free-space convolution for the quadrature backend (``gauge`` says which).
    """
    grid: Grid1D
    values: np.ndarray
    gauge: str = "mean_free"

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def raw(self) -> np.ndarray:
        return self.values

    @property
    def mean_free(self) -> np.ndarray:
        return self.values - self.values.mean()


def fractional_laplacian(f: WaveField, sigma, sign: int = 1) -> WaveField:
    """Apply (-Laplacian)^{sign*sigma/2} as the multiplier |xi|^{sign*sigma}.

    For ``sign=-1`` the zero mode is dropped; the removed mean is reported in
    ``meta['dropped_mean']``.
    """
    s = _sigma(sigma)
    if sign not in (1, -1):
        raise ConfigurationError(f"sign must be +1 or -1, got {sign!r}")
    xi = np.abs(f.grid.fft_frequencies)
    coeffs = np.fft.fft(f.values)
    if sign > 0:
        out = np.fft.ifft(coeffs * xi ** s)
        return f.with_values(out)
    m = np.zeros_like(xi)
    m[1:] = xi[1:] ** (-s)
    out = np.fft.ifft(coeffs * m)
    dropped = coeffs[0] / f.grid.n_points
    return f.with_values(out, gauge="mean_free", dropped_mean=complex(dropped))


def _as_density(density, grid=None):
    if isinstance(density, WaveField):
        grid, values = density.grid, density.values
    else:
        values = np.asarray(density)
        if grid is None:
            raise InputError("a Grid1D is required when the density is a bare array")
    if np.iscomplexobj(values):
        scale = np.max(np.abs(values)) or 1.0
        if np.max(np.abs(values.imag)) > 1e-8 * scale:
            raise InputError("density must be real; imaginary part exceeds 1e-8 relative")
        values = values.real
    return grid, np.asarray(values, dtype=float)


def inverse_multiplier(grid: Grid1D, sigma) -> np.ndarray:
    """|xi|^{-sigma} in FFT order with the zero mode set to 0."""
    s = _sigma(sigma)
    xi = np.abs(grid.fft_frequencies)
    m = np.zeros_like(xi)
    m[1:] = xi[1:] ** (-s)
    return m


def solve_poisson_spectral(density, sigma, grid: Optional[Grid1D] = None) -> Potential:
    grid, rho = _as_density(density, grid)
    a = np.fft.ifft(np.fft.fft(rho) * inverse_multiplier(grid, sigma))
    scale = np.max(np.abs(a)) or 1.0
    if np.max(np.abs(a.imag)) > 1e-10 * scale:
        raise InputError("spectral potential has a non-negligible imaginary part")
    return Potential(grid, a.real, gauge="mean_free")


def power_kernel_weights(grid: Grid1D, exponent: float) -> np.ndarray:
    """Exact integrals of |x|^{-exponent} over the cells centred on m*dx.

    Covers offsets m = -(N-1) ... N-1 for a linear (non-periodic) convolution.
    Requires 0 < exponent < 1.
    """
    e = 1.0 - exponent
    n, dx = grid.n_points, grid.dx
    off = dx * np.arange(-(n - 1), n)
    a, b = off - 0.5 * dx, off + 0.5 * dx
    return (np.sign(b) * np.abs(b) ** e - np.sign(a) * np.abs(a) ** e) / e


def riesz_kernel_weights(grid: Grid1D, sigma) -> np.ndarray:
    s = _sigma(sigma)
    _, kernel_c = riesz_constants(s)
    return kernel_c * power_kernel_weights(grid, 1.0 - s)


def _linear_convolve(rho, weights):
    n = rho.shape[0]
    full = fftconvolve(rho, weights)
    return full[n - 1:2 * n - 1]


def solve_poisson_quadrature(density, sigma, grid: Optional[Grid1D] = None) -> Potential:
    """Free-space Riesz potential c_s |x|^{-(1-s)} * rho (values in free-space gauge)."""
    grid, rho = _as_density(density, grid)
    raw = _linear_convolve(rho, riesz_kernel_weights(grid, sigma))
    return Potential(grid, raw, gauge="free_space")


def solve_poisson(density, sigma, backend: str = SPECTRAL, grid=None) -> Potential:
    if backend == SPECTRAL:
        return solve_poisson_spectral(density, sigma, grid)
    if backend == QUADRATURE:
        return solve_poisson_quadrature(density, sigma, grid)
    raise ConfigurationError(f"backend must be one of {BACKENDS}, got {backend!r}")


def hls_exponent(beta: float, r: float) -> float:
    """The p with 1/p = beta + 1/r - 1 (one dimension)."""
    inv = beta + 1.0 / r - 1.0
    return np.inf if inv == 0 else 1.0 / inv


def hls_ratio(f: WaveField, beta: float, p: float, r: float) -> float:
    """||  |y|^{-beta} * f ||_p / ||f||_r with unit kernel constant."""
    if not 0.0 < beta < 1.0:
        raise ConfigurationError(f"beta must lie in (0,1), got {beta!r}")
    if not 1.0 < r < p < np.inf:
        raise ConfigurationError(f"need 1 < r < p < inf, got r={r!r}, p={p!r}")
    if abs(1.0 / p - (beta + 1.0 / r - 1.0)) > 1e-12:
        raise ConfigurationError(
            f"exponents violate 1/p = beta + 1/r - 1 (beta={beta}, r={r}, p={p})")
    w = power_kernel_weights(f.grid, beta)
    conv = _linear_convolve(f.values.real, w) + 1j * _linear_convolve(f.values.imag, w)
    return lp_norm(f.with_values(conv), p) / lp_norm(f, r)
