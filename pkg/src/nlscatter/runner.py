"""Execute a scenario, persist its artifacts and build the run manifest."""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from . import io
from .config import ScenarioConfig
from .propagators import NumericalInstabilityError, WrapAroundError
from .resample import ResolutionError
from .scenarios import SCENARIO_RUNNERS

log = logging.getLogger(__name__)

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_NUMERIC, EXIT_WRAP = 0, 1, 2, 3, 4

PLOT_SCRIPT = '''\
"""Plot every CSV in this folder: first column on x, the rest on y.

Usage: python plot.py  (needs matplotlib)
"""
import csv
import glob
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    if header[:3] == ["time", "quantity", "value"]:
        series = {}
        for t, q, v in data:
            if v:
                series.setdefault(q, ([], []))
                series[q][0].append(float(t))
                series[q][1].append(float(v))
    else:
        xs = [float(r[0]) for r in data]
        series = {name: (xs, [float(r[j]) if r[j] else float("nan") for r in data])
                  for j, name in enumerate(header[1:], start=1)}
    fig, ax = plt.subplots()
    for name, (x, y) in series.items():
        ax.plot(x, y, marker="o", label=name)
    ax.set_xlabel(header[0])
    ax.legend()
    fig.savefig(path[:-4] + ".png", dpi=120)
    plt.close(fig)
'''


@dataclass
class RunManifest:
    scenario: str
    config: dict
    version: str
    status: int = EXIT_OK
    message: str = ""
    started: float = 0.0
    elapsed: float = 0.0
    verdicts: list = field(default_factory=list)
    files: dict = field(default_factory=dict)   # relative path -> sha256
    out_dir: str = ""

    @property
    def passed(self) -> bool:
        return self.status == EXIT_OK

    def add_file(self, path: Path) -> None:
        self.files[str(path.relative_to(self.out_dir))] = io.sha256_file(path)

    def to_dict(self) -> dict:
        return asdict(self)


def emit_plots(manifest: RunManifest) -> list[Path]:
    """Plot-ready CSVs plus a matplotlib script under ``plots/``; nothing is rendered."""
    base = Path(manifest.out_dir)
    inputs = [name for name in manifest.files
              if name.endswith(".csv") and (name == "diagnostics.csv" or name.startswith("table_"))]
    if not inputs:
        log.warning("manifest lists no tabular outputs; no plot files written")
        return []
    missing = [name for name in inputs if not (base / name).exists()]
    if missing:
        raise FileNotFoundError(f"manifest references missing files: {missing}")
    folder = base / "plots"
    folder.mkdir(exist_ok=True)
    written = []
    for name in sorted(inputs):
        src = base / name
        if name == "diagnostics.csv":
            records = io.read_records(src)
            rows = []
            for rec in records:
                for col, val in zip(io.CSV_COLUMNS[1:], rec.as_row()[1:]):
                    rows.append((rec.time, col, val))
            written.append(io.write_long_csv(folder / "diagnostics_long.csv",
                                             ("time", "quantity", "value"), rows))
        else:
            dest = folder / name[len("table_"):]
            dest.write_bytes(src.read_bytes())
            written.append(dest)
    script = folder / "plot.py"
    script.write_text(PLOT_SCRIPT)
    written.append(script)
    return written


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path | None = None,
                 quiet: bool = True) -> RunManifest:
    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(cfg.scenario, cfg.echo(), __version__, started=time.time(),
                           out_dir=str(out))
    t0 = time.perf_counter()
    try:
        outcome = SCENARIO_RUNNERS[cfg.scenario](cfg)
    except WrapAroundError as exc:
        manifest.status, manifest.message = EXIT_WRAP, str(exc)
    except (NumericalInstabilityError, ResolutionError, FloatingPointError) as exc:
        manifest.status, manifest.message = EXIT_NUMERIC, str(exc)
    else:
        manifest.verdicts = [asdict(v) for v in outcome.verdicts]
        if not all(v.passed for v in outcome.verdicts):
            manifest.status = EXIT_VERDICT
            manifest.message = "failed: " + ", ".join(v.name for v in outcome.verdicts
                                                      if not v.passed)
        if outcome.records:
            manifest.add_file(io.write_records(out / "diagnostics.csv", outcome.records))
        report = dict(outcome.report)
        report.setdefault("schema_version", "1.0")
        report["scenario"] = cfg.scenario
        report["verdicts"] = {v.name: asdict(v) for v in outcome.verdicts}
        manifest.add_file(io.write_json(out / "report.json", report))
        for name, (cols, rows) in outcome.tables.items():
            manifest.add_file(io.write_long_csv(out / f"table_{name}.csv", cols, rows))
        if cfg.write_snapshots:
            for stem, fields in outcome.snapshots.items():
                manifest.add_file(io.write_snapshots(out / f"{stem}.csv", fields))
        if cfg.plots:
            for path in emit_plots(manifest):
                manifest.add_file(path)
    manifest.elapsed = time.perf_counter() - t0
    io.write_json(out / "manifest.json", manifest.to_dict())
    if not quiet:
        for v in manifest.verdicts:
            mark = "PASS" if v["passed"] else "FAIL"
            print(f"[{mark}] {v['name']}: {v['value']:.6g} {v['comparator']} "
                  f"{v['threshold']:.6g}  ({v['operation']})")
        if manifest.message:
            print(manifest.message)
        print(f"{cfg.scenario}: status {manifest.status}, {manifest.elapsed:.1f} s, "
              f"artifacts in {out}")
    return manifest
