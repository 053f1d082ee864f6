"""H^1 Cauchy increments of the pulled-back state on doubling extraction times.

Shows how slowly the increments shrink for the cubic 1-d problem: each
doubling of T divides the increment by roughly sqrt(2), the signature
of a T^(-1/2) tail.  Uses the reference trajectory of the
``scatter-shortrange`` template (about 30 s on a laptop).

    python scripts/extraction_study.py
"""
import argparse

import numpy as np

from nlscatter.config import load_config
from nlscatter.scattering import extract_scattering_state
from nlscatter.scenarios import physical_run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--times", type=float, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--amplitude", type=str, default=None, help="override datum.amplitude")
    args = ap.parse_args()
    overrides = {"schedule.times": ",".join(str(t) for t in args.times)}
    if args.amplitude:
        overrides["datum.amplitude"] = args.amplitude
    cfg = load_config("scatter-shortrange", overrides)
    traj = physical_run(cfg)
    snaps = {s.time: s for s in traj.snapshots}
    rep = extract_scattering_state(snaps, args.times, s=1.0)
    inc = np.array(rep.increments)
    print(f"{'T':>8s} {'increment':>12s} {'ratio':>8s}")
    for j, (T, d) in enumerate(zip(args.times[1:], inc)):
        ratio = inc[j - 1] / d if j else float("nan")
        print(f"{T:8g} {d:12.4e} {ratio:8.3f}")
    if inc.size > 1:
        slope = np.polyfit(np.log(args.times[1:]), np.log(inc), 1)[0]
        print(f"log-log slope of increments vs T: {slope:.3f}")


if __name__ == "__main__":
    main()
