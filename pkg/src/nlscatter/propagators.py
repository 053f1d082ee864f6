"""Linear flows and Strang split-step integrators.

All three evolutions share the form

    i f_t = -Lap f + V(x) f + c W(t) |f|^p f

with ``V = 0, W = 1`` (physical NLS), ``V = 0, W = t^-alpha``
(pseudo-conformal frame) or ``V = |x|^2, W = cos(2t)^-alpha`` (lens
frame).  A step is half kinetic, full pointwise phase, half kinetic.
The pointwise substep is exact: ``|f|`` is invariant under it, so it is
a multiplication by ``exp(-i (V tau + c |f|^p int W))`` with the weight
integral taken in closed form or by Gauss quadrature.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import roots_legendre

from . import diagnostics as dg
from .exponents import ExponentData
from .field import WaveField
from .spectral import fft_sorted, ifft_sorted

# harmonic_flow(f, t) = exp(HARMONIC_SIGN * i t H) f.  Chosen by checking
# both signs against Hermite eigenphases and the lens identity: with
# i u_t + Lap u = 0 the lens map conjugates exp(i s Lap) to exp(-i t H).
HARMONIC_SIGN = -1

GAUSS_NODES = 8
GUARD_FRACTION = 0.9
GUARD_TOLERANCE = 1e-8
# steps between guard and finiteness checks when no sample falls due
GUARD_INTERVAL = 500


class EvolutionError(RuntimeError):
    pass


class WrapAroundError(EvolutionError):
    """Mass reached the edge of the periodic box; the run is invalid."""


class NumericalInstabilityError(EvolutionError):
    pass


class StepBudgetError(EvolutionError):
    """The weight budget cannot be met within ``max_steps``."""


class Variant(str, enum.Enum):
    PHYSICAL = "PhysicalNLS"
    PSEUDO_CONFORMAL = "PseudoConformal"
    LENS = "Lens"


_GL_X, _GL_W = roots_legendre(GAUSS_NODES)


def _gauss(func, a: float, b: float, panel: float = math.inf) -> float:
    """Gauss-Legendre on ``[a, b]``, split into panels no wider than ``panel``."""
    count = max(1, math.ceil(abs(b - a) / panel)) if math.isfinite(panel) else 1
    edges = np.linspace(a, b, count + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    return float(np.sum(half * (func(nodes) @ _GL_W)))


def power_weight_integral(alpha: float, a: float, b: float) -> float:
    """``int_a^b t^-alpha dt`` for ``a, b > 0``."""
    if a <= 0 or b <= 0:
        raise ValueError("power weight is only defined for t > 0")
    if alpha == 0:
        return b - a
    if alpha == 1:
        return math.log(b / a)
    g = 1.0 - alpha
    return (b**g - a**g) / g


def cos_weight_integral(alpha: float, a: float, b: float) -> float:
    """``int_a^b cos(2t)^-alpha dt`` for ``a, b`` in ``(-pi/4, pi/4)``.

    For ``0 < alpha < 1`` the integrand behaves like ``(pi/4 - t)^-alpha``
    near the endpoint; substituting ``z = (pi/4 - t)^(1-alpha)`` leaves a
    smooth integrand, so Gauss-Legendre stays accurate on steps that
    hug the singularity.
    """
    lim = math.pi / 4
    if not (-lim < a < lim and -lim < b < lim):
        raise ValueError("cos weight needs |t| < pi/4")
    if alpha == 0:
        return b - a
    if 0 < alpha < 1 and a >= 0 and b >= 0:
        g = 1.0 - alpha

        def integrand(z):
            u = z ** (1.0 / g)
            smooth = np.where(u > 0, np.sin(2 * u) / np.where(u > 0, u, 1.0), 2.0)
            return smooth ** (-alpha) / g

        return _gauss(integrand, (lim - b) ** g, (lim - a) ** g, panel=0.05)
    return _gauss(lambda t: np.cos(2 * t) ** (-alpha), a, b, panel=0.05)


@dataclass(frozen=True)
class EquationSpec:
    variant: Variant
    exponents: ExponentData
    coupling: float = 1.0

    def __post_init__(self):
        if self.coupling < 0:
            raise ValueError("only the defocusing sign (coupling >= 0) is supported")

    @property
    def p(self) -> float:
        return float(self.exponents.p)

    @property
    def alpha(self) -> float:
        return float(self.exponents.alpha)

    @property
    def singular_endpoint(self) -> Optional[float]:
        if self.variant is Variant.PSEUDO_CONFORMAL and self.alpha > 0:
            return 0.0
        if self.variant is Variant.LENS and self.alpha > 0:
            return math.pi / 4
        return None

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        if self.variant is Variant.PHYSICAL:
            return np.ones_like(t)
        if self.variant is Variant.PSEUDO_CONFORMAL:
            return t ** (-self.alpha)
        return np.cos(2 * t) ** (-self.alpha)

    def weight_integral(self, a: float, b: float) -> float:
        if self.variant is Variant.PHYSICAL:
            return b - a
        if self.variant is Variant.PSEUDO_CONFORMAL:
            return power_weight_integral(self.alpha, a, b)
        return cos_weight_integral(self.alpha, a, b)


@dataclass(frozen=True)
class StepPolicy:
    """Step selection.

    ``weight_budget`` caps ``|int W|`` over one step; when ``None`` it
    defaults to ``budget_fraction`` of the weight integral over the run.
    Only variants with a singular weight are budget limited.
    """

    base_dt: float
    weight_budget: Optional[float] = None
    budget_fraction: float = 0.01
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not self.base_dt > 0:
            raise ValueError("base_dt must be positive")


@dataclass
class Trajectory:
    final: WaveField
    records: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    steps: int = 0

    def snapshot_at(self, t: float) -> WaveField:
        for snap in self.snapshots:
            if math.isclose(snap.time, t, rel_tol=1e-12, abs_tol=1e-14):
                return snap
        raise KeyError(f"no snapshot at t={t}")


Observer = Callable[[WaveField, dg.DiagnosticRecord], None]


def free_flow(f: WaveField, t: float) -> WaveField:
    """``exp(i t Lap) f``, exact on the lattice."""
    grid = f.grid
    coeffs = fft_sorted(f.values, grid) * np.exp(-1j * grid.k2 * t)
    return WaveField(grid, ifft_sorted(coeffs, grid), f.time + t)


def harmonic_flow(f: WaveField, t: float, dt: float) -> WaveField:
    """``exp(HARMONIC_SIGN i t H) f`` with ``H = -Lap + |x|^2`` by Strang splitting."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    tau = -HARMONIC_SIGN * t
    steps = max(1, math.ceil(abs(tau) / dt - 1e-9))
    h = tau / steps
    grid = f.grid
    half_pot = np.exp(-0.5j * h * grid.r2)
    kin = np.exp(-1j * h * grid.k2_fft)
    psi = f.values * half_pot
    for i in range(steps):
        psi = np.fft.ifftn(np.fft.fftn(psi) * kin)
        psi *= half_pot if i == steps - 1 else half_pot * half_pot
    return WaveField(grid, psi, f.time + t)


def _budget(spec: EquationSpec, policy: StepPolicy, t0: float, t1: float) -> Optional[float]:
    if spec.singular_endpoint is None:
        return None
    if policy.weight_budget is not None:
        return policy.weight_budget
    return policy.budget_fraction * abs(spec.weight_integral(min(t0, t1), max(t0, t1)))


def _choose_step(spec, t, target, h, budget) -> float:
    lo, hi = (t, t + h) if target > t else (t - h, t)
    if budget is None or abs(spec.weight_integral(lo, hi)) <= budget:
        return h
    if target > t:
        g = lambda s: spec.weight_integral(t, t + s) - budget
    else:
        g = lambda s: spec.weight_integral(t - s, t) - budget
    return brentq(g, 0.0, h, xtol=1e-15 * max(1.0, abs(t)), rtol=1e-12)


def _check_guard(psi, grid, t):
    frac = dg.guard_fraction(WaveField(grid, psi), GUARD_FRACTION)
    if frac >= GUARD_TOLERANCE:
        raise WrapAroundError(
            f"wrap-around guard violated at t={t:g}: mass fraction {frac:.3g} "
            f"beyond {GUARD_FRACTION}L")


def evolve(spec: EquationSpec, f0: WaveField, t0: float, t1: float,
           policy: StepPolicy, observer: Optional[Observer] = None,
           sample_times: Sequence[float] = (), keep_snapshots: bool = True,
           guard: bool = True, cone_radius: float = 10.0) -> Trajectory:
    """Integrate from ``t0`` to ``t1`` (either direction).

    The step schedule lands exactly on every sample time; a diagnostic
    record (and optionally a snapshot) is taken there and passed to
    ``observer``.
    """
    grid = f0.grid
    if spec.variant is Variant.PSEUDO_CONFORMAL and min(t0, t1) <= 0 < spec.alpha:
        raise ValueError("pseudo-conformal runs must stay in t > 0")
    if spec.variant is Variant.LENS and max(abs(t0), abs(t1)) >= math.pi / 4:
        raise ValueError("lens runs must stay in |t| < pi/4")
    direction = 1.0 if t1 >= t0 else -1.0
    samples = sorted({float(s) for s in sample_times
                      if (s - t0) * direction >= 0 and (t1 - s) * direction >= 0},
                     key=lambda s: direction * s)
    targets = [s for s in samples if s != t0] + ([t1] if t1 not in samples else [])
    if t1 == t0:
        targets = []
    budget = _budget(spec, policy, t0, t1)
    p, c = spec.p, spec.coupling
    lens = spec.variant is Variant.LENS
    k2 = grid.k2_fft
    kin_cache: dict[float, np.ndarray] = {}
    traj = Trajectory(final=f0)
    moments = spec.variant is Variant.PHYSICAL

    def sample(psi, t):
        if not np.all(np.isfinite(psi)):
            raise NumericalInstabilityError(f"non-finite field at t={t:g}")
        if guard:
            _check_guard(psi, grid, t)
        snap = WaveField(grid, psi, t)
        rec = dg.diagnostic_record(snap, p, t, moments=moments, cone_radius=cone_radius)
        traj.records.append(rec)
        if keep_snapshots:
            traj.snapshots.append(snap)
        if observer is not None:
            observer(snap, rec)
        return snap

    psi = np.array(f0.values)
    if guard:
        _check_guard(psi, grid, t0)
    if t0 in samples:
        sample(psi, t0)
    t = float(t0)
    steps = 0
    for target in targets:
        while (target - t) * direction > 0:
            h = min(policy.base_dt, abs(target - t))
            h = _choose_step(spec, t, target, h, budget)
            t_new = t + direction * h
            if (target - t_new) * direction <= 1e-13 * max(1.0, abs(target)):
                t_new = target
            tau = t_new - t
            kin = kin_cache.get(tau)
            if kin is None:
                kin = np.exp(-0.5j * tau * k2)
                if len(kin_cache) < 64:
                    kin_cache[tau] = kin
            a, b = (t, t_new) if tau > 0 else (t_new, t)
            w_int = spec.weight_integral(a, b) * (1.0 if tau > 0 else -1.0)
            psi = np.fft.ifftn(np.fft.fftn(psi) * kin)
            phase = c * w_int * np.abs(psi) ** p
            if lens:
                phase = phase + tau * grid.r2
            psi *= np.exp(-1j * phase)
            psi = np.fft.ifftn(np.fft.fftn(psi) * kin)
            t = t_new
            steps += 1
            if steps > policy.max_steps:
                raise StepBudgetError(
                    f"exceeded {policy.max_steps} steps before t={target:g}")
            if steps % GUARD_INTERVAL == 0:
                if not np.all(np.isfinite(psi)):
                    raise NumericalInstabilityError(f"non-finite field at t={t:g}")
                if guard:
                    _check_guard(psi, grid, t)
        if target in samples:
            sample(psi, target)
    if not np.all(np.isfinite(psi)):
        raise NumericalInstabilityError(f"non-finite field at t={t:g}")
    if guard:
        _check_guard(psi, grid, t)
    traj.final = WaveField(grid, psi, t)
    traj.steps = steps
    return traj


@dataclass(frozen=True)
class ConvergenceResult:
    order: float
    differences: tuple

    @property
    def exact(self) -> bool:
        return math.isinf(self.order)


def self_convergence_order(spec: EquationSpec, f0: WaveField, t0: float, t1: float,
                           base_dt: float, budget_fraction: float = 0.01,
                           roundoff: float = 1e-12) -> ConvergenceResult:
    """Richardson estimate of the splitting order from dt, dt/2, dt/4 runs.

    Step size and weight budget are refined together.  Returns ``inf``
    when the coarse difference is at roundoff level, i.e. the scheme is
    exact for this problem.
    """
    budget = _budget(spec, StepPolicy(base_dt, budget_fraction=budget_fraction), t0, t1)
    finals = []
    for j in range(3):
        policy = StepPolicy(base_dt / 2**j,
                            weight_budget=None if budget is None else budget / 2**j)
        run = evolve(spec, f0, t0, t1, policy, keep_snapshots=False, guard=False)
        finals.append(run.final.values)
    dx = f0.grid.cell_volume
    d1 = math.sqrt(np.sum(np.abs(finals[0] - finals[1]) ** 2) * dx)
    d2 = math.sqrt(np.sum(np.abs(finals[1] - finals[2]) ** 2) * dx)
    scale = max(dg.l2_norm(f0), 1e-300)
    if d1 <= roundoff * scale or d2 == 0:
        return ConvergenceResult(math.inf, (d1, d2))
    return ConvergenceResult(math.log2(d1 / d2), (d1, d2))


def monitored_functional(snapshots: Sequence[WaveField], spec: EquationSpec) -> np.ndarray:
    """Weighted energy along a pseudo-conformal or lens trajectory.

    pseudo-conformal: ``t^a ||grad w||^2 + 2/(p+2) ||w||_{p+2}^{p+2}``
    lens:             ``cos(2t)^a ||v||_Sigma^2 + 1/(p+2) ||v||_{p+2}^{p+2}``
    """
    p, a = spec.p, spec.alpha
    out = []
    for f in snapshots:
        lp = dg.lp_integral(f, p + 2)
        if spec.variant is Variant.PSEUDO_CONFORMAL:
            out.append(f.time**a * dg.kinetic(f) + 2.0 / (p + 2) * lp)
        elif spec.variant is Variant.LENS:
            out.append(math.cos(2 * f.time) ** a * dg.sigma_norm(f) ** 2 + lp / (p + 2))
        else:
            raise ValueError("monitored functional is defined for the weighted variants")
    return np.array(out)
