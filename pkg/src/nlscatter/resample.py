"""Band-limited evaluation of lattice fields at rescaled points.

The change-of-variable maps all need ``f(scale * x)`` sampled on some
target lattice, usually followed by a quadratic chirp.  The periodic
trigonometric interpolant of the source is evaluated exactly at the
requested points with a chirp-z transform, so highly oscillatory
sources are not aliased as long as the source lattice resolves them.
Points outside the source box evaluate to zero: the box is a proxy for
R^n and the field is assumed negligible at its edge.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .field import WaveField
from .grid import Grid
from .spectral import top_octave_fraction

RESOLUTION_TOLERANCE = 1e-6
COVERAGE_TOLERANCE = 1e-8


class ResamplingError(ValueError):
    pass


class ResolutionError(ResamplingError):
    """Too much mass in the top wavenumber octave to interpolate safely."""


class SupportError(ResamplingError):
    """The rescaled field does not fit on the target lattice."""


def _eval_axis(values: np.ndarray, axis: int, half_width: float,
               y0: float, step: float, count: int) -> np.ndarray:
    n = values.shape[axis]
    coeffs = np.fft.fftshift(np.fft.fft(values, axis=axis), axes=axis) / n
    # split the Nyquist mode symmetrically so real fields stay real
    nyq = np.take(coeffs, [0], axis=axis) / 2
    coeffs = np.concatenate(
        [nyq, np.delete(coeffs, 0, axis=axis), nyq], axis=axis)
    m = np.arange(n + 1)
    shape = [1] * values.ndim
    shape[axis] = n + 1
    kappa = np.pi / half_width
    pre = np.exp(1j * kappa * m * (y0 + half_width)).reshape(shape)
    out = czt(coeffs * pre, m=count, w=np.exp(1j * kappa * step), a=1.0, axis=axis)
    q = np.arange(count)
    y = y0 + q * step
    post = np.exp(-1j * kappa * (n // 2) * (y + half_width))
    post[(y < -half_width) | (y >= half_width)] = 0.0
    shape[axis] = count
    return out * post.reshape(shape)


def evaluate_on_lattice(values: np.ndarray, source: Grid,
                        y0: float, step: float, count: int) -> np.ndarray:
    """Interpolant of ``values`` at ``y0 + q*step`` (q < count) on every axis."""
    out = np.asarray(values, dtype=np.complex128)
    for axis in range(source.dim):
        out = _eval_axis(out, axis, source.half_width, y0, step, count)
    return out


def outside_box_fraction(field: WaveField, half_width: float) -> float:
    """Mass fraction of ``field`` with some ``|x_i| >= half_width``."""
    dens = np.abs(field.values) ** 2
    total = dens.sum()
    if total == 0:
        return 0.0
    outside = np.zeros(field.grid.shape, dtype=bool)
    for c in field.grid.x_mesh:
        outside |= np.abs(c) >= half_width
    return float(dens[outside].sum() / total)


@dataclass(frozen=True)
class ChirpResampler:
    """``out(x) = exp(i * chirp * |x|^2) * f(scale * x)`` on ``target``."""

    source: Grid
    target: Grid
    scale: float
    chirp: float = 0.0

    def audit(self, field: WaveField) -> None:
        frac = top_octave_fraction(field)
        if frac >= RESOLUTION_TOLERANCE:
            raise ResolutionError(
                f"source has {frac:.3g} of its mass in the top wavenumber octave")
        lost = outside_box_fraction(field, abs(self.scale) * self.target.half_width)
        if lost >= COVERAGE_TOLERANCE:
            raise SupportError(
                f"{lost:.3g} of the mass maps outside the target box "
                f"(scale {self.scale:g}, target half-width {self.target.half_width:g})")

    def __call__(self, field: WaveField, check: bool = True) -> np.ndarray:
        if field.grid != self.source:
            raise ValueError("field is not on the resampler's source grid")
        if check:
            self.audit(field)
        t = self.target
        vals = evaluate_on_lattice(field.values, self.source,
                                   self.scale * t.x[0], self.scale * t.spacing,
                                   t.points_per_axis)
        if self.chirp:
            vals = vals * np.exp(1j * self.chirp * t.r2)
        if check:
            out = WaveField(t, vals)
            frac = top_octave_fraction(out)
            if frac >= RESOLUTION_TOLERANCE:
                raise ResolutionError(
                    f"resampled field has {frac:.3g} of its mass in the top octave")
        return vals
