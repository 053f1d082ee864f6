"""Self-convergence order of the split-step integrator for each equation variant.

Prints the estimated order for a range of base steps, so the asymptotic
regime (order 2) and the roundoff floor are both visible.

    python scripts/convergence_study.py --p 3 --dts 0.04 0.02 0.01 0.005
"""
import argparse
import math

from nlscatter.config import GaussianDatum
from nlscatter.exponents import classify_exponent
from nlscatter.grid import make_grid
from nlscatter.propagators import EquationSpec, Variant, self_convergence_order

SPANS = {Variant.PHYSICAL: (0.0, 1.0), Variant.PSEUDO_CONFORMAL: (0.5, 1.0),
         Variant.LENS: (0.0, math.pi / 8)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=3.0)
    ap.add_argument("--points", type=int, default=512)
    ap.add_argument("--half-width", type=float, default=20.0)
    ap.add_argument("--dts", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005])
    args = ap.parse_args()
    grid = make_grid(1, args.points, args.half_width)
    exps = classify_exponent(1, args.p)
    f0 = GaussianDatum().sample(grid)
    print(f"p={args.p:g}  alpha={float(exps.alpha):g}  regime={exps.regime.value}")
    print(f"{'variant':18s}" + "".join(f"{dt:>12g}" for dt in args.dts))
    for variant, (a, b) in SPANS.items():
        spec = EquationSpec(variant, exps)
        start = f0.with_values(f0.values, time=a)
        orders = [self_convergence_order(spec, start, a, b, dt).order for dt in args.dts]
        print(f"{variant.value:18s}" + "".join(f"{o:12.4f}" for o in orders))


if __name__ == "__main__":
    main()
