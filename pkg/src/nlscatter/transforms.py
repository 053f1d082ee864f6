"""Change-of-variable maps between the physical, pseudo-conformal and lens frames.

Branch conventions: ``(2 i t)^(-n/2)`` and ``cos(2t)^(-n/2)`` use the
principal branch, which is continuous on ``t > 0`` (resp. ``|t| < pi/4``)
and equals 1 at the identity point of each map.
"""
from __future__ import annotations

import cmath
import math
from typing import Optional

from .field import Spectrum, WaveField, dual_grid
from .grid import Grid
from .resample import ChirpResampler


def time_map(s: float) -> float:
    """Lens time ``arctan(2s)/2`` of physical time ``s``."""
    return math.atan(2.0 * s) / 2.0


def time_map_inverse(t: float) -> float:
    if abs(t) >= math.pi / 4:
        raise ValueError("lens time must satisfy |t| < pi/4")
    return math.tan(2.0 * t) / 2.0


def pseudo_conformal_transform(u: WaveField, s: float, target: Optional[Grid] = None,
                               check: bool = True) -> WaveField:
    """``w(t, x) = t^(-n/2) conj(u(s, x/t)) exp(i|x|^2/(4t))`` with ``t = 1/s``.

    For ``s < 0`` the amplitude uses ``|t|^(-n/2)`` (mirror branch).  The
    map is its own inverse up to relabelling: applying it to ``w`` at
    time ``t`` returns ``u`` at time ``1/t``.
    """
    if s == 0:
        raise ValueError("s must be non-zero")
    target = target or u.grid
    t = 1.0 / s
    resampler = ChirpResampler(u.grid, target, scale=s, chirp=s / 4.0)
    vals = resampler(u.conj(), check=check) * abs(s) ** (u.grid.dim / 2)
    return WaveField(target, vals, t)


def inverse_pseudo_conformal_transform(w: WaveField, t: float, target: Optional[Grid] = None,
                                       check: bool = True) -> WaveField:
    """Recover ``u(1/t, .)`` from ``w(t, .)``."""
    return pseudo_conformal_transform(w, t, target, check)


def _lens_cos(t: float) -> float:
    if abs(t) >= math.pi / 4:
        raise ValueError("lens transform needs |t| < pi/4")
    return math.cos(2.0 * t)


def lens_apply(G: WaveField, t: float, target: Optional[Grid] = None,
               check: bool = True) -> WaveField:
    """``cos(2t)^(-n/2) G(x / cos 2t) exp(-i |x|^2 tan(2t) / 2)``."""
    c = _lens_cos(t)
    target = target or G.grid
    resampler = ChirpResampler(G.grid, target, scale=1.0 / c, chirp=-math.tan(2 * t) / 2)
    vals = resampler(G, check=check) * c ** (-G.grid.dim / 2)
    return WaveField(target, vals, t)


def lens_invert(F: WaveField, t: float, target: Optional[Grid] = None,
                check: bool = True) -> WaveField:
    """Exact inverse of :func:`lens_apply`; result carries physical time ``tan(2t)/2``."""
    c = _lens_cos(t)
    target = target or F.grid
    chirp = math.sin(2 * t) * c / 2
    resampler = ChirpResampler(F.grid, target, scale=c, chirp=chirp)
    vals = resampler(F, check=check) * c ** (F.grid.dim / 2)
    return WaveField(target, vals, time_map_inverse(t))


def mdfm_factor(t: float, n: int) -> complex:
    """``(2 i t)^(-n/2)`` on the principal branch."""
    return cmath.exp(-(n / 2) * cmath.log(2j * t))


def mdfm_profile(phi_hat: Spectrum, t: float, target: Optional[Grid] = None,
                 check: bool = True) -> WaveField:
    """Leading large-time profile ``(2it)^(-n/2) exp(i|x|^2/4t) h^(x/2t)`` of ``exp(it Lap) h``.

    ``phi_hat`` is sampled on the k-lattice of its grid; the profile is
    placed on ``target`` (default: that same grid).
    """
    if t == 0:
        raise ValueError("t must be non-zero")
    target = target or phi_hat.grid
    as_field = phi_hat.as_field(dual_grid(phi_hat.grid))
    resampler = ChirpResampler(as_field.grid, target, scale=1.0 / (2 * t), chirp=1.0 / (4 * t))
    vals = resampler(as_field, check=check) * mdfm_factor(t, target.dim)
    return WaveField(target, vals, t)
