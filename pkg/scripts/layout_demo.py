"""Nozzle counts for a sweep of surface sizes and thresholds.

    python3 scripts/layout_demo.py --lcsgdt-mm 131.4
"""
import argparse

from coldjet.layout import plan_grid, plan_line
from coldjet.model import MM


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--lcsgdt-mm", type=float, nargs="+", default=[100.0, 131.4, 160.0])
    args = p.parse_args()
    lengths = (100, 200, 262.8, 300, 400, 600)
    print("length_mm " + " ".join(f"{d:>9g}" for d in args.lcsgdt_mm))
    for L in lengths:
        print(f"{L:9g} " + " ".join(f"{plan_line(L * MM, d * MM).count:9d}" for d in args.lcsgdt_mm))
    d = args.lcsgdt_mm[0] * MM
    plan = plan_grid(400 * MM, 300 * MM, d)
    print(f"\n400 x 300 mm at {d / MM:g} mm: {plan.count} nozzles, spacing "
          f"{plan.spacing[0] / MM:.1f} x {plan.spacing[1] / MM:.1f} mm")
    for x, y in plan.positions:
        print(f"  ({x / MM:.1f}, {y / MM:.1f})")


if __name__ == "__main__":
    main()
