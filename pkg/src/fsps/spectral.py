"""Periodic grid, unitary spectral transforms, free propagator and norms.

The real line is replaced by the periodic box [-L, L) sampled at N points.
Spectral coefficients use the symmetric Fourier-series normalisation

    c_k = (2L)^{-1/2} * sum_j f(x_j) exp(-i xi_k x_j) dx,

so that ``sum |c_k|^2 == sum |f_j|^2 dx`` (discrete Parseval).  Coefficients
are stored in the order of ``Grid1D.frequencies`` (k = -N/2 ... N/2-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ConfigurationError, NumericError


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid1D:
    half_length: float
    n_points: int

    def __post_init__(self):
        if not (self.half_length > 0 and np.isfinite(self.half_length)):
            raise ConfigurationError(
                f"half_length must be a positive finite number, got {self.half_length!r}")
        n = self.n_points
        if int(n) != n or n < 8 or (int(n) & (int(n) - 1)) != 0:
            raise ConfigurationError(
                f"n_points must be a power of two >= 8, got {n!r}")
        object.__setattr__(self, "half_length", float(self.half_length))
        object.__setattr__(self, "n_points", int(n))

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @property
    def x(self) -> np.ndarray:
        return -self.half_length + self.dx * np.arange(self.n_points)

    @property
    def mode_numbers(self) -> np.ndarray:
        n = self.n_points
        return np.arange(-n // 2, n // 2)

    @property
    def frequencies(self) -> np.ndarray:
        """xi_k = pi k / L, k = -N/2 ... N/2 - 1."""
        return np.pi * self.mode_numbers / self.half_length

    @property
    def fft_frequencies(self) -> np.ndarray:
        """Frequencies in numpy FFT order, used by the fast internal kernels."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def __eq__(self, other):
        return (isinstance(other, Grid1D) and self.n_points == other.n_points
                and self.half_length == other.half_length)

    def __hash__(self):
        return hash((self.half_length, self.n_points))

    def __repr__(self):
        return f"Grid1D(half_length={self.half_length!r}, n_points={self.n_points})"


def make_grid(half_length: float, n_points: int) -> Grid1D:
    return Grid1D(half_length, n_points)


def _check_finite(values, what="field"):
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise NumericError(f"non-finite {what} sample at index {idx}", index=idx)


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex samples of a wave function on a grid.

    ``meta`` carries provenance flags such as the gauge applied by an operator.
    """
    grid: Grid1D
    values: np.ndarray
    diverged: bool = False
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        v = _frozen(self.values, complex)
        if v.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"expected {self.grid.n_points} samples, got shape {v.shape}")
        if not self.diverged:
            _check_finite(v)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "meta", dict(self.meta))

    @classmethod
    def from_function(cls, grid, func):
        return cls(grid, func(grid.x))

    def with_values(self, values, **meta):
        return WaveField(self.grid, values, meta=meta)

    def __len__(self):
        return self.grid.n_points


@dataclass(frozen=True, eq=False)
class Spectrum:
    grid: Grid1D
    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs, complex)
        if c.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"expected {self.grid.n_points} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)


# Internal array-level transforms (numpy FFT order, unitary scaling).  The
# alternating sign accounts for the grid starting at x = -L.

def _scale(grid):
    return np.sqrt(grid.dx / grid.n_points)


def fft_unitary(grid, values):
    return np.fft.fft(values) * _scale(grid)


def ifft_unitary(grid, coeffs):
    return np.fft.ifft(coeffs) / _scale(grid)


def forward_transform(f: WaveField) -> Spectrum:
    _check_finite(f.values)
    g = f.grid
    c = np.fft.fftshift(fft_unitary(g, f.values))
    c *= np.where(g.mode_numbers % 2 == 0, 1.0, -1.0)
    return Spectrum(g, c)


def inverse_transform(s: Spectrum) -> WaveField:
    _check_finite(s.coeffs, "spectral coefficient")
    g = s.grid
    c = s.coeffs * np.where(g.mode_numbers % 2 == 0, 1.0, -1.0)
    return WaveField(g, ifft_unitary(g, np.fft.ifftshift(c)))


def apply_multiplier(f: WaveField, multiplier) -> np.ndarray:
    """Apply a Fourier multiplier m(xi) given in numpy FFT order; returns samples."""
    return np.fft.ifft(np.fft.fft(f.values) * multiplier)


def free_propagator(grid: Grid1D, t: float) -> np.ndarray:
    xi = grid.fft_frequencies
    return np.exp(-0.5j * t * xi * xi)


def free_propagate(f: WaveField, t: float) -> WaveField:
    """Exact free Schroedinger flow exp(i t Laplacian / 2); negative t allowed."""
    _check_finite(f.values)
    if t == 0:
        return WaveField(f.grid, f.values)
    return WaveField(f.grid, apply_multiplier(f, free_propagator(f.grid, t)))


def gradient(f: WaveField) -> np.ndarray:
    return apply_multiplier(f, 1j * f.grid.fft_frequencies)


def lp_norm(f, p=2.0) -> float:
    """Rectangle-rule L^p norm.  ``p`` may be ``np.inf``."""
    if not p >= 1:
        raise ConfigurationError(f"p must satisfy p >= 1, got {p!r}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    if p == 2:
        return float(np.sqrt(np.sum(a * a) * f.grid.dx))
    return float((np.sum(a ** p) * f.grid.dx) ** (1.0 / p))


def gradient_norm(f: WaveField) -> float:
    """||d/dx f||_2 evaluated in spectral space (no extra inverse FFT)."""
    c = fft_unitary(f.grid, f.values)
    xi = f.grid.fft_frequencies
    return float(np.sqrt(np.sum(xi * xi * np.abs(c) ** 2)))


def h1_norm(f: WaveField) -> float:
    c = fft_unitary(f.grid, f.values)
    xi = f.grid.fft_frequencies
    return float(np.sqrt(np.sum((1.0 + xi * xi) * np.abs(c) ** 2)))
