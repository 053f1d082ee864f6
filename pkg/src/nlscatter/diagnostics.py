"""Scalar functionals of wave fields.

Norms with a Fourier multiplier are computed spectrally; weights in x
are applied by quadrature on the lattice.  Exterior regions use a sharp
indicator evaluated at the sample points (the cell centres).
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import Optional

import numpy as np

from .field import WaveField
from .spectral import fft_sorted, gradient

CSV_COLUMNS = ("time", "mass", "energy", "h1", "sigma", "lp2",
               "variance", "cone_ext", "gauge_deficit")


def _integrate(grid, density) -> float:
    return float(np.sum(density) * grid.cell_volume)


def mass(f: WaveField) -> float:
    return _integrate(f.grid, np.abs(f.values) ** 2)


def spectral_mass(f: WaveField) -> float:
    coeffs = fft_sorted(f.values, f.grid)
    return float(np.sum(np.abs(coeffs) ** 2) * f.grid.k_cell_volume)


def l2_norm(f: WaveField) -> float:
    return math.sqrt(mass(f))


def kinetic(f: WaveField) -> float:
    """``int |grad f|^2`` via Plancherel."""
    coeffs = fft_sorted(f.values, f.grid)
    return float(np.sum(f.grid.k2 * np.abs(coeffs) ** 2) * f.grid.k_cell_volume)


def kinetic_quadrature(f: WaveField) -> float:
    """Same as :func:`kinetic`, through the sampled gradient."""
    return _integrate(f.grid, sum(np.abs(g) ** 2 for g in gradient(f)))


def lp_integral(f: WaveField, q: float) -> float:
    """``int |f|^q``."""
    return _integrate(f.grid, np.abs(f.values) ** q)


def lp_norm(f: WaveField, q: float) -> float:
    return lp_integral(f, q) ** (1.0 / q)


def energy(f: WaveField, p: float) -> float:
    if not p > 0:
        raise ValueError("p must be positive")
    return 0.5 * kinetic(f) + lp_integral(f, p + 2) / (p + 2)


def hs_norm(f: WaveField, s: float) -> float:
    if not 0 <= s <= 2:
        raise ValueError("s must lie in [0, 2]")
    coeffs = fft_sorted(f.values, f.grid)
    weight = (1.0 + f.grid.k2) ** s
    return math.sqrt(np.sum(weight * np.abs(coeffs) ** 2) * f.grid.k_cell_volume)


def second_moment(f: WaveField) -> float:
    """``int |x|^2 |f|^2``."""
    return _integrate(f.grid, f.grid.r2 * np.abs(f.values) ** 2)


def sigma_norm(f: WaveField) -> float:
    return math.sqrt(mass(f) + kinetic(f) + second_moment(f))


def _check_time(t: float) -> None:
    if t == 0:
        raise ValueError("t must be non-zero")


def gauge_gradient_deficit(u: WaveField, t: float) -> float:
    """``|| grad u - i x/(2t) u ||_L2``."""
    _check_time(t)
    grads = gradient(u)
    dens = sum(np.abs(g - 1j * c / (2 * t) * u.values) ** 2
               for g, c in zip(grads, u.grid.x_mesh))
    return math.sqrt(_integrate(u.grid, dens))


def renormalized_variance(u: WaveField, t: float) -> float:
    """``int |x|^2/t^2 |u|^2``."""
    _check_time(t)
    return second_moment(u) / t**2


def _exterior(f: WaveField, radius: float) -> float:
    dens = f.grid.r2 * np.abs(f.values) ** 2
    return _integrate(f.grid, np.where(f.grid.r2 > radius**2, dens, 0.0))


def cone_exterior_moment(u: WaveField, t: float, R: float) -> float:
    """``int_{|x| > R t} |x|^2/t^2 |u|^2``."""
    if not (t > 0 and R > 0):
        raise ValueError("t and R must be positive")
    return _exterior(u, R * t) / t**2


def cylinder_exterior_moment(w: WaveField, R: float) -> float:
    """``int_{|x| > R} |x|^2 |w|^2``."""
    if not R > 0:
        raise ValueError("R must be positive")
    return _exterior(w, R)


def guard_fraction(f: WaveField, fraction: float = 0.9) -> float:
    """Mass fraction at ``|x| > fraction * L``; the wrap-around guard."""
    dens = np.abs(f.values) ** 2
    total = dens.sum()
    if total == 0:
        return 0.0
    lim = fraction * f.grid.half_width
    return float(dens[f.grid.r2 > lim**2].sum() / total)


@dataclass(frozen=True)
class DiagnosticRecord:
    """One sampled time of a run.

    The moment-type entries only make sense for the physical variant at
    ``t > 0``; elsewhere they are ``None`` and serialize as empty cells.
    """

    time: float
    mass: float
    energy: float
    h1_norm: float
    sigma_norm: float
    lp2_norm: float
    renorm_variance: Optional[float] = None
    cone_exterior: Optional[float] = None
    gauge_deficit: Optional[float] = None

    def as_row(self) -> list[str]:
        return ["" if v is None else repr(float(v)) for v in astuple(self)]

    @classmethod
    def from_row(cls, row) -> "DiagnosticRecord":
        vals = [None if v == "" else float(v) for v in row]
        return cls(*vals)


RECORD_FIELDS = tuple(f.name for f in fields(DiagnosticRecord))


def diagnostic_record(f: WaveField, p: float, t: float | None = None,
                      moments: bool = True, cone_radius: float = 10.0) -> DiagnosticRecord:
    t = f.time if t is None else t
    m, kin = mass(f), kinetic(f)
    lp = lp_integral(f, p + 2)
    extra = [None, None, None]
    if moments and t > 0:
        extra = [renormalized_variance(f, t), cone_exterior_moment(f, t, cone_radius),
                 gauge_gradient_deficit(f, t)]
    return DiagnosticRecord(
        time=t, mass=m, energy=0.5 * kin + lp / (p + 2),
        h1_norm=math.sqrt(m + kin), sigma_norm=math.sqrt(m + kin + second_moment(f)),
        lp2_norm=lp ** (1.0 / (p + 2)), renorm_variance=extra[0],
        cone_exterior=extra[1], gauge_deficit=extra[2])
