"""Scenario configuration: INI documents with fixed sections.

Sections are ``scenario``, ``grid``, ``exponent``, ``datum``,
``schedule``, ``tolerances`` and ``output``.  Values override the
shipped template of the named scenario, so a config file only needs the
keys it changes.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .exponents import ExponentData, Regime, classify_exponent
from .field import WaveField
from .grid import Grid, GridError, make_grid

SCENARIOS = ("free-check", "conservation", "scatter-shortrange", "longrange-contrast",
             "pseudoconformal-limit", "lens-roundtrip", "moments", "theorem13",
             "identity51", "fk-lemma", "rates")

SECTIONS = ("scenario", "grid", "exponent", "datum", "schedule", "tolerances", "output")


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration (exit status 2)."""


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def parse_number(text: str) -> Fraction | float:
    """Rationals stay exact (``"4/3"``, ``"2"``); anything else is a float."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


@dataclass(frozen=True)
class GaussianDatum:
    """``amplitude * exp(-|x - center|^2 / (2 width^2)) * exp(i velocity . x)``."""

    amplitude: float = 1.0
    width: float = 1.0
    center: tuple[float, ...] = (0.0,)
    velocity: tuple[float, ...] = (0.0,)

    def _per_axis(self, values, dim):
        vals = tuple(values)
        if len(vals) == 1:
            return vals * dim
        if len(vals) != dim:
            raise ConfigError(f"expected 1 or {dim} components, got {len(vals)}")
        return vals

    def sample(self, grid: Grid, time: float = 0.0) -> WaveField:
        c = self._per_axis(self.center, grid.dim)
        v = self._per_axis(self.velocity, grid.dim)
        vals = np.full(grid.shape, complex(self.amplitude))
        for ax, x in enumerate(grid.x_mesh):
            vals = vals * np.exp(-((x - c[ax]) ** 2) / (2 * self.width**2) + 1j * v[ax] * x)
        return WaveField(grid, vals, time)

    def free_solution(self, grid: Grid, t: float) -> WaveField:
        """Closed-form ``exp(i t Lap)`` of the datum (Galilean-boosted Gaussian)."""
        c = self._per_axis(self.center, grid.dim)
        v = self._per_axis(self.velocity, grid.dim)
        s2 = self.width**2
        z = 1 + 2j * t / s2
        vals = np.full(grid.shape, complex(self.amplitude))
        for ax, x in enumerate(grid.x_mesh):
            y = x - c[ax] - 2 * v[ax] * t
            vals = vals * z**-0.5 * np.exp(-(y**2) / (2 * s2 * z)
                                           + 1j * (v[ax] * x - v[ax] ** 2 * t))
        return WaveField(grid, vals, t)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    dim: int
    points: int
    half_width: float
    aux_points: int
    aux_half_width: float
    n: int
    p: Fraction | float
    datum: GaussianDatum
    dt: float
    horizon: float
    times: tuple[float, ...]
    tolerances: Mapping[str, float]
    schedule: Mapping[str, str]
    out_dir: str = "runs"
    seed: int = 0
    write_snapshots: bool = True
    plots: bool = True
    raw: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return make_grid(self.dim, self.points, self.half_width)

    @property
    def aux_grid(self) -> Grid:
        return make_grid(self.dim, self.aux_points, self.aux_half_width)

    @property
    def exponents(self) -> ExponentData:
        return classify_exponent(self.n, self.p)

    def tol(self, key: str) -> float:
        try:
            return float(self.tolerances[key])
        except KeyError:
            raise ConfigError(f"scenario {self.scenario!r} needs tolerances.{key}") from None

    def schedule_floats(self, key: str) -> tuple[float, ...]:
        try:
            return _floats(self.schedule[key])
        except KeyError:
            raise ConfigError(f"scenario {self.scenario!r} needs schedule.{key}") from None

    def schedule_float(self, key: str) -> float:
        vals = self.schedule_floats(key)
        if len(vals) != 1:
            raise ConfigError(f"schedule.{key} must be a single number")
        return vals[0]

    def echo(self) -> dict:
        return {sec: dict(vals) for sec, vals in self.raw.items()}


def template_path(name: str) -> Path:
    return Path(str(resources.files("nlscatter") / "templates" / f"{name}.ini"))


def available_templates() -> list[str]:
    folder = resources.files("nlscatter") / "templates"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".ini"))


def _read(parser: configparser.ConfigParser, source: str | Path) -> None:
    try:
        with open(source) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {source}: {exc}") from exc


def load_document(source: str | Path) -> dict[str, dict[str, str]]:
    """Merge the template of the named scenario with ``source``."""
    path = Path(source)
    if not path.exists() and not path.suffix and template_path(str(source)).exists():
        path = template_path(str(source))
    user = configparser.ConfigParser(interpolation=None)
    _read(user, path)
    if not user.has_option("scenario", "name"):
        raise ConfigError("config must set scenario.name")
    name = user.get("scenario", "name").strip()
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    merged = configparser.ConfigParser(interpolation=None)
    if template_path(name).exists():
        _read(merged, template_path(name))
    merged.read_dict({s: dict(user[s]) for s in user.sections()})
    unknown = set(merged.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    return {s: dict(merged[s]) for s in merged.sections()}


def apply_overrides(doc: dict, overrides: Mapping[str, str]) -> dict:
    doc = {s: dict(v) for s, v in doc.items()}
    for dotted, value in overrides.items():
        if "." not in dotted:
            raise ConfigError(f"override {dotted!r} must look like section.key")
        sec, key = dotted.split(".", 1)
        if sec not in SECTIONS:
            raise ConfigError(f"unknown section {sec!r} in override")
        doc.setdefault(sec, {})[key] = str(value)
    return doc


def _get(doc, sec, key, conv, default=None):
    try:
        raw = doc[sec][key]
    except KeyError:
        if default is None:
            raise ConfigError(f"missing {sec}.{key}") from None
        return default
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {sec}.{key}: {raw!r}") from exc


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def build_config(doc: Mapping[str, Mapping[str, str]]) -> ScenarioConfig:
    name = doc["scenario"]["name"].strip()
    datum_family = doc.get("datum", {}).get("family", "gaussian").strip()
    if datum_family != "gaussian":
        raise ConfigError(f"unsupported datum family {datum_family!r}")
    datum = GaussianDatum(
        amplitude=_get(doc, "datum", "amplitude", float, 1.0),
        width=_get(doc, "datum", "width", float, 1.0),
        center=_get(doc, "datum", "center", _floats, (0.0,)),
        velocity=_get(doc, "datum", "velocity", _floats, (0.0,)),
    )
    if not datum.width > 0:
        raise ConfigError("datum.width must be positive")
    cfg = ScenarioConfig(
        scenario=name,
        dim=_get(doc, "grid", "dim", int, 1),
        points=_get(doc, "grid", "points", int),
        half_width=_get(doc, "grid", "half_width", float),
        aux_points=_get(doc, "grid", "aux_points", int, 0) or _get(doc, "grid", "points", int),
        aux_half_width=(_get(doc, "grid", "aux_half_width", float, 0.0)
                        or _get(doc, "grid", "half_width", float)),
        n=_get(doc, "exponent", "n", int, 1),
        p=_get(doc, "exponent", "p", parse_number, 3),
        datum=datum,
        dt=_get(doc, "schedule", "dt", float, 1e-3),
        horizon=_get(doc, "schedule", "horizon", float, 1.0),
        times=_get(doc, "schedule", "times", _floats, ()),
        tolerances={k: float(v) for k, v in doc.get("tolerances", {}).items()},
        schedule=dict(doc.get("schedule", {})),
        out_dir=doc.get("output", {}).get("dir", "runs"),
        seed=_get(doc, "scenario", "seed", int, 0),
        write_snapshots=_get(doc, "output", "snapshots", _bool, True),
        plots=_get(doc, "output", "plots", _bool, True),
        raw={s: dict(v) for s, v in doc.items()},
    )
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    try:
        cfg.grid, cfg.aux_grid
    except GridError as exc:
        raise ConfigError(f"grid: {exc}") from exc
    if cfg.n != cfg.dim:
        raise ConfigError(f"exponent.n={cfg.n} must equal grid.dim={cfg.dim}")
    if not cfg.p > 0:
        raise ConfigError("exponent.p must be positive")
    if not (cfg.dt > 0 and math.isfinite(cfg.dt)):
        raise ConfigError("schedule.dt must be positive")
    regime = cfg.exponents.regime
    needs_short = ("scatter-shortrange", "pseudoconformal-limit", "moments",
                   "theorem13", "identity51", "rates")
    if cfg.scenario in needs_short and regime is not Regime.SHORT_RANGE:
        raise ConfigError(
            f"scenario {cfg.scenario} needs a short-range exponent 2/n < p < 4/n; "
            f"p={cfg.p} with n={cfg.n} is {regime.value}")
    if cfg.scenario == "longrange-contrast" and regime is not Regime.LONG_RANGE:
        raise ConfigError(
            f"scenario longrange-contrast needs p <= 2/n; p={cfg.p} with n={cfg.n} "
            f"is {regime.value}")


def load_config(source: str | Path, overrides: Mapping[str, str] | None = None,
                seed: int | None = None) -> ScenarioConfig:
    doc = apply_overrides(load_document(source), overrides or {})
    if seed is not None:
        doc.setdefault("scenario", {})["seed"] = str(seed)
    return build_config(doc)


def with_out_dir(cfg: ScenarioConfig, out_dir: str | Path) -> ScenarioConfig:
    raw = {s: dict(v) for s, v in cfg.raw.items()}
    raw.setdefault("output", {})["dir"] = str(out_dir)
    return replace(cfg, out_dir=str(out_dir), raw=raw)
