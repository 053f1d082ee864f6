"""From trajectories to verdicts: scattering states, distances, identities."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from . import diagnostics as dg
from .exponents import ExponentData
from .field import Spectrum, WaveField, dual_grid, require_same_grid
from .fitting import RateFit
from .propagators import free_flow
from .resample import RESOLUTION_TOLERANCE, ResolutionError, evaluate_on_lattice
from .spectral import fft_sorted, forward_transform, top_octave_fraction

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class Verdict:
    """A named pass/fail outcome with the operation and tolerance behind it."""

    name: str
    operation: str
    value: float
    threshold: float
    comparator: str
    passed: bool

    @classmethod
    def check(cls, name: str, operation: str, value: float, threshold: float,
              comparator: str = "<=") -> "Verdict":
        ops = {"<=": lambda a, b: a <= b, "<": lambda a, b: a < b,
               ">=": lambda a, b: a >= b, ">": lambda a, b: a > b}
        passed = bool(np.isfinite(value)) and ops[comparator](value, threshold)
        return cls(name, operation, float(value), float(threshold), comparator, passed)


@dataclass
class ScatteringReport:
    extraction_times: list
    states: list
    cauchy_table: np.ndarray
    increments: list = field(default_factory=list)
    fitted_rates: dict = field(default_factory=dict)
    identity_residuals: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    sobolev_index: float = 1.0

    @property
    def increments_decreasing(self) -> bool:
        inc = self.increments
        return all(b < a for a, b in zip(inc, inc[1:]))

    def add_verdict(self, verdict: Verdict) -> Verdict:
        self.verdicts[verdict.name] = verdict
        return verdict

    def to_dict(self, state_files: Optional[Sequence[str]] = None) -> dict:
        rates = {k: asdict(v) if isinstance(v, RateFit) else v
                 for k, v in self.fitted_rates.items()}
        return {
            "schema_version": SCHEMA_VERSION,
            "extraction_times": [float(t) for t in self.extraction_times],
            "sobolev_index": float(self.sobolev_index),
            "states": list(state_files) if state_files is not None else [],
            "cauchy_table": [[float(v) for v in row] for row in self.cauchy_table],
            "increments": [float(v) for v in self.increments],
            "increments_decreasing": self.increments_decreasing,
            "fitted_rates": rates,
            "identity_residuals": {k: float(v) for k, v in self.identity_residuals.items()},
            "verdicts": {k: asdict(v) for k, v in self.verdicts.items()},
        }


def sobolev_distance(a: WaveField, b: WaveField, s: float) -> float:
    require_same_grid(a, b)
    return dg.hs_norm(a - b, s)


def scattering_state(u: WaveField, T: Optional[float] = None) -> WaveField:
    """``exp(-i T Lap) u(T)``, tagged with time 0."""
    T = u.time if T is None else T
    phi = free_flow(u, -T)
    return phi.with_values(phi.values, time=0.0)


def extract_scattering_state(snapshots: Mapping[float, WaveField] | Sequence[WaveField],
                             times: Sequence[float], s: float = 1.0,
                             audit: bool = True) -> ScatteringReport:
    """Pull states back along the free flow and tabulate their H^s distances."""
    if not 0 <= s <= 1:
        raise ValueError("s must lie in [0, 1]")
    if not isinstance(snapshots, Mapping):
        snapshots = {f.time: f for f in snapshots}
    lookup = {float(k): v for k, v in snapshots.items()}
    states = []
    for T in times:
        match = [k for k in lookup if math.isclose(k, T, rel_tol=1e-12, abs_tol=1e-14)]
        if not match:
            raise KeyError(f"no snapshot at time {T}")
        u = lookup[match[0]]
        if audit:
            frac = top_octave_fraction(u)
            if frac >= RESOLUTION_TOLERANCE:
                raise ResolutionError(f"state at T={T:g} is under-resolved ({frac:.3g})")
        states.append(scattering_state(u, T))
    m = len(states)
    table = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            table[i, j] = table[j, i] = sobolev_distance(states[i], states[j], s)
    increments = [table[i, i + 1] for i in range(m - 1)]
    return ScatteringReport(list(times), states, table, increments, sobolev_index=s)


def weighted_distance(u: WaveField, phi_plus: WaveField, t: float) -> float:
    """``|| (|x|/t) (u(t) - exp(it Lap) phi_+) ||_L2``."""
    if t == 0:
        raise ValueError("t must be non-zero")
    require_same_grid(u, phi_plus)
    diff = u.values - free_flow(phi_plus, t).values
    return math.sqrt(np.sum(u.grid.r2 * np.abs(diff) ** 2) * u.grid.cell_volume) / abs(t)


class IdentityResidual(NamedTuple):
    residual: float
    degenerate: bool


def fourier_identity_side(w_plus: WaveField, on: Spectrum | WaveField) -> np.ndarray:
    """``(2i)^(n/2) conj(w_+)(2 xi)`` sampled on the k-lattice of ``on.grid``."""
    grid = on.grid
    n = grid.dim
    k0, dk = grid.k[0], grid.dk
    vals = evaluate_on_lattice(np.conj(w_plus.values), w_plus.grid, 2 * k0, 2 * dk,
                               grid.points_per_axis)
    return (2j) ** (n / 2) * vals


def fourier_identity_residual(phi_plus: WaveField, w_plus: WaveField,
                              audit: bool = True) -> IdentityResidual:
    """Relative L2 gap between ``phi_+^`` and ``(2i)^(n/2) conj(w_+)(2 xi)``."""
    if audit:
        for name, f in (("phi_plus", phi_plus), ("w_plus", w_plus)):
            frac = top_octave_fraction(f)
            if frac >= RESOLUTION_TOLERANCE:
                raise ResolutionError(f"{name} is under-resolved ({frac:.3g})")
    lhs = fft_sorted(phi_plus.values, phi_plus.grid)
    rhs = fourier_identity_side(w_plus, phi_plus)
    dk = phi_plus.grid.k_cell_volume
    norm = math.sqrt(np.sum(np.abs(lhs) ** 2) * dk)
    gap = math.sqrt(np.sum(np.abs(lhs - rhs) ** 2) * dk)
    if norm == 0:
        return IdentityResidual(0.0 if gap == 0 else math.inf, True)
    return IdentityResidual(gap / norm, False)


def linear_pseudo_conformal_limit(phi: WaveField) -> WaveField:
    """Exact ``t -> 0+`` limit of the pseudo-conformal image of ``exp(it Lap) phi``.

    ``w_+(x) = 2^(-n/2) exp(i n pi/4) conj(phi^(x/2))``, placed on the
    same lattice as ``phi``.
    """
    grid = phi.grid
    n = grid.dim
    spec = forward_transform(phi).as_field(dual_grid(grid))
    vals = evaluate_on_lattice(spec.values, spec.grid, grid.x[0] / 2, grid.spacing / 2,
                               grid.points_per_axis)
    return WaveField(grid, 2 ** (-n / 2) * np.exp(1j * n * math.pi / 4) * np.conj(vals), 0.0)


def dichotomy_exponents(exp: ExponentData) -> tuple[float, float]:
    """(weight power ``4 alpha/(4 - p(n-2))``, outer power ``(4 - p(n-2))/4``)."""
    n, p, alpha = exp.n, float(exp.p), float(exp.alpha)
    denom = 4.0 - p * (n - 2)
    return 4.0 * alpha / denom, denom / 4.0


def dichotomy_tail(t: float, exp: ExponentData) -> float:
    """``int_t^{pi/4} cos(2 tau)^(-gamma) d tau`` by adaptive quadrature."""
    n, p = exp.n, float(exp.p)
    if not p > 4.0 / (n + 2) or (n > 2 and not p < 4.0 / (n - 2)):
        raise ValueError(f"p={p} outside (4/(n+2), 4/(n-2)); the tail integral diverges")
    gamma, _ = dichotomy_exponents(exp)
    if gamma >= 1:
        raise ValueError(f"tail integral diverges (exponent {gamma:g} >= 1)")
    end = math.pi / 4
    if t >= end:
        return 0.0

    def smooth(tau):
        u = end - tau
        return (math.sin(2 * u) / u) ** (-gamma) if u > 0 else 2.0 ** (-gamma)

    # integrand = smooth(tau) * (pi/4 - tau)^(-gamma)
    val, _ = quad(smooth, t, end, weight="alg", wvar=(0.0, -gamma),
                  epsabs=0.0, epsrel=1e-12, limit=200)
    return val


def dichotomy_quantity(v: WaveField, t: float, exp: ExponentData) -> float:
    """``||v(t)||_Sigma^p (int_t^{pi/4} cos(2tau)^-gamma)^((4 - p(n-2))/4)``."""
    _, outer = dichotomy_exponents(exp)
    tail = dichotomy_tail(t, exp)
    return dg.sigma_norm(v) ** float(exp.p) * tail**outer
