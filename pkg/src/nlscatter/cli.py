"""Command line: ``nlscatter run <config> [--out DIR] [--sweep k=a,b] [--seed N] [--quiet]``."""
from __future__ import annotations

import argparse
import itertools
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, available_templates, load_config, with_out_dir
from .runner import EXIT_CONFIG, run_scenario


def _parse_sweeps(items: list[str]) -> list[tuple[str, list[str]]]:
    sweeps = []
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--sweep expects section.key=a,b,c, got {item!r}")
        key, values = item.split("=", 1)
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"--sweep {key} has no values")
        sweeps.append((key.strip(), vals))
    return sweeps


def _run_one(args):
    cfg, out, quiet = args
    return run_scenario(cfg, out, quiet=quiet).status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlscatter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario from an INI config or template name")
    run.add_argument("config", help="path to an INI file, or the name of a shipped template")
    run.add_argument("--out", help="output directory (overrides output.dir)")
    run.add_argument("--sweep", action="append", default=[], metavar="SECTION.KEY=A,B,C",
                     help="run once per value; repeat for a cartesian product")
    run.add_argument("--seed", type=int, help="seed for randomized scenarios")
    run.add_argument("--quiet", action="store_true", help="suppress the verdict summary")
    run.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps")
    sub.add_parser("templates", help="list the shipped scenario templates")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "templates":
        print("\n".join(available_templates()))
        return 0
    try:
        sweeps = _parse_sweeps(args.sweep)
        jobs = []
        keys = [k for k, _ in sweeps]
        for combo in itertools.product(*[v for _, v in sweeps]) if sweeps else [()]:
            overrides = dict(zip(keys, combo))
            cfg = load_config(args.config, overrides, seed=args.seed)
            base = Path(args.out or cfg.out_dir)
            out = base
            if overrides:
                tag = "_".join(f"{k.replace('.', '-')}={v}" for k, v in overrides.items())
                out = base / tag
            jobs.append((with_out_dir(cfg, out), out, args.quiet))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            statuses = list(pool.map(_run_one, jobs))
    else:
        statuses = [_run_one(job) for job in jobs]
    return max(statuses)


if __name__ == "__main__":
    sys.exit(main())
