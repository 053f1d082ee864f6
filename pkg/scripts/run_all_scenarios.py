"""Run every shipped scenario template in one process and summarize the verdicts.

The long scenarios share a cached reference trajectory, so running them
together costs roughly one reference run (about a minute) plus the
long-range contrast pair.

    python scripts/run_all_scenarios.py --out runs/all
"""
import argparse
from pathlib import Path

from nlscatter.config import SCENARIOS, load_config
from nlscatter.runner import run_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/all")
    ap.add_argument("--only", nargs="*", choices=SCENARIOS, help="subset of scenarios")
    args = ap.parse_args()
    worst = 0
    for name in args.only or SCENARIOS:
        man = run_scenario(load_config(name), Path(args.out) / name)
        failed = [v["name"] for v in man.verdicts if not v["passed"]]
        note = man.message if man.status not in (0, 1) else ", ".join(failed)
        print(f"{name:24s} status {man.status}  {man.elapsed:7.1f} s  {note}")
        worst = max(worst, man.status)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
