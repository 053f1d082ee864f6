"""Portable persistence: diagnostics CSV, field snapshots, JSON reports.

Floats are written with ``repr`` so a re-run with the same inputs gives
byte-identical files.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diagnostics import CSV_COLUMNS, DiagnosticRecord
from .field import WaveField
from .grid import Grid, make_grid


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_records(path: str | Path, records: Iterable[DiagnosticRecord]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.as_row())
    return path


def read_records(path: str | Path) -> list[DiagnosticRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected diagnostics header {header}")
        return [DiagnosticRecord.from_row(row) for row in reader]


def snapshot_header(grid: Grid) -> list[str]:
    """``time`` then ``re_j, im_j`` for each sample in C order."""
    cols = ["time"]
    for j in range(int(np.prod(grid.shape))):
        cols += [f"re_{j}", f"im_{j}"]
    return cols


def write_snapshots(path: str | Path, snapshots: Sequence[WaveField]) -> Path:
    """One row per snapshot.  A leading comment line records the grid."""
    if not snapshots:
        raise ValueError("no snapshots to write")
    grid = snapshots[0].grid
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# dim={grid.dim} points_per_axis={grid.points_per_axis} "
                 f"half_width={grid.half_width!r}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(snapshot_header(grid))
        for snap in snapshots:
            if snap.grid != grid:
                raise ValueError("all snapshots in one file must share a grid")
            flat = snap.values.ravel()
            inter = np.empty(2 * flat.size)
            inter[0::2], inter[1::2] = flat.real, flat.imag
            writer.writerow([repr(float(snap.time))] + [repr(float(v)) for v in inter])
    return path


def read_snapshots(path: str | Path) -> list[WaveField]:
    with open(path, newline="") as fh:
        meta = dict(item.split("=") for item in fh.readline()[1:].split())
        grid = make_grid(int(meta["dim"]), int(meta["points_per_axis"]),
                         float(meta["half_width"]))
        reader = csv.reader(fh)
        next(reader)
        out = []
        for row in reader:
            vals = np.array(row[1:], dtype=float)
            z = (vals[0::2] + 1j * vals[1::2]).reshape(grid.shape)
            out.append(WaveField(grid, z, float(row[0])))
    return out


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(_clean(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_long_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                             for v in row])
    return path
