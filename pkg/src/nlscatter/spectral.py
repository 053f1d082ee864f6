"""Unitary Fourier transform and spectral calculus.

Convention::

    h^(xi) = (2 pi)^(-n/2) * integral exp(-i x.xi) h(x) dx

discretized as a scaled DFT.  The lattice starts at ``-L`` rather than 0,
which contributes the factor ``exp(i k_m L) = (-1)^m``.  With this
normalization ``sum |h|^2 dx^n == sum |h^|^2 dk^n`` exactly.
"""
from __future__ import annotations

from typing import Callable, Union

import numpy as np

from .field import Spectrum, WaveField, require_same_grid
from .grid import Grid

Multiplier = Union[np.ndarray, Callable[..., np.ndarray]]


def _scale(grid: Grid) -> float:
    return (grid.spacing / np.sqrt(2.0 * np.pi)) ** grid.dim


def fft_sorted(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Unitary transform of a raw array; output on the sorted k-lattice."""
    raw = np.fft.fftshift(np.fft.fftn(values))
    return raw * grid.phase_correction * _scale(grid)


def ifft_sorted(coefficients: np.ndarray, grid: Grid) -> np.ndarray:
    raw = np.fft.ifftshift(coefficients * grid.phase_correction)
    return np.fft.ifftn(raw) / _scale(grid)


def forward_transform(field: WaveField) -> Spectrum:
    return Spectrum(field.grid, fft_sorted(field.values, field.grid))


def inverse_transform(spec: Spectrum, time: float = 0.0) -> WaveField:
    return WaveField(spec.grid, ifft_sorted(spec.coefficients, spec.grid), time)


def _multiplier_values(spec: Spectrum, m: Multiplier) -> np.ndarray:
    if callable(m):
        m = m(*spec.grid.k_mesh)
    m = np.broadcast_to(np.asarray(m), spec.grid.shape)
    if not np.all(np.isfinite(m)):
        raise ValueError("multiplier is not finite on the lattice")
    return m


def apply_multiplier(spec: Spectrum, m: Multiplier) -> Spectrum:
    """Pointwise product ``m(k) * spec``; ``m`` is an array or ``m(*k_mesh)``."""
    return Spectrum(spec.grid, spec.coefficients * _multiplier_values(spec, m))


def filter_field(field: WaveField, m: Multiplier) -> WaveField:
    """``F^-1 [m F field]`` in one call."""
    spec = apply_multiplier(forward_transform(field), m)
    return inverse_transform(spec, field.time)


def spectral_l2_norm(spec: Spectrum) -> float:
    return float(np.sqrt(np.sum(np.abs(spec.coefficients) ** 2) * spec.grid.k_cell_volume))


def gradient(field: WaveField) -> list[np.ndarray]:
    """Spectral gradient, one sample array per axis."""
    grid = field.grid
    coeffs = fft_sorted(field.values, grid)
    return [ifft_sorted(1j * k * coeffs, grid) for k in grid.k_mesh]


def laplacian(field: WaveField) -> np.ndarray:
    grid = field.grid
    return ifft_sorted(-grid.k2 * fft_sorted(field.values, grid), grid)


def spectral_mass_fraction_above(field: WaveField, kmin: float) -> float:
    """Fraction of L^2 mass at wavenumbers with ``max_i |k_i| > kmin``."""
    power = np.abs(fft_sorted(field.values, field.grid)) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    kmax = np.max(np.abs(np.stack(field.grid.k_mesh)), axis=0)
    return float(power[kmax > kmin].sum() / total)


def top_octave_fraction(field: WaveField) -> float:
    """Mass fraction in the upper half of the resolved wavenumber range."""
    kmax = field.grid.points_per_axis * field.grid.dk / 2
    return spectral_mass_fraction_above(field, kmax / 2)
