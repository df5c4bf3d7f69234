"""Tabulate how the published coefficient set behaves across H and r.

    python3 scripts/published_diagnostics.py
"""
import numpy as np

from coldjet.diagnostics import diagnose
from coldjet.model import (MM, FluidSpec, ThermalEnvironment, nu_center, nu_radial,
                           paper_coefficients)


def main():
    fluid, env = FluidSpec(), ThermalEnvironment()
    c = paper_coefficients()
    rep = diagnose(c, fluid, env)
    g = rep.continuity
    print(f"centre value jumps {g.below:.2f} -> {g.at:.2f} at H = {g.h_switch / MM:.1f} mm")

    print("\nH_mm  Nu(0,H)")
    for h in np.arange(10, 52, 4):
        print(f"{h:4.0f}  {nu_center(c, fluid, h * MM):.4g}")

    rs = np.array([10, 25, 50, 78.7, 90, 96, 100, 131.4 / 2, 150, 250, 500])
    print("\nr_mm   " + "  ".join(f"H={h}mm".rjust(11) for h in (10, 30, 50)))
    for r in np.sort(rs):
        vals = [nu_radial(c, fluid, r * MM, h * MM) for h in (10, 30, 50)]
        print(f"{r:6.1f} " + "  ".join(f"{v:11.4g}" for v in vals))

    print("\nH_mm  status       Nu@measured   table")
    for row in rep.threshold_rows:
        print(f"{row['h_mm'] / MM:4.0f}  {row['status']:11s}  {row['nu_at_paper_lcsgdt']:11.4g}"
              f"   {row['paper_table1_value']}")
    print("\nH_mm  tail starts (mm)")
    for t in rep.tails:
        print(f"{t.H / MM:4.0f}  {'none' if t.empty else f'{t.r_lo / MM:.2f}'}")
    print("\nH_mm  predicted_dT  measured_dT")
    for row in rep.center_rows:
        print(f"{row['h'] / MM:4.0f}  {row['predicted_dt']:12.5g}  {row['measured_dt']}")


if __name__ == "__main__":
    main()
