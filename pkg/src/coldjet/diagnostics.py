"""Consistency checks of a coefficient set against published measurements.

The published fitted coefficients do not reproduce the published Nusselt
values at the measured thresholds, nor the measured centre cooling; this
module lays the comparisons side by side without asserting agreement.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .model import (MM, FluidSpec, ModelCoefficients, ThermalEnvironment,
                    check_monotone_tail, nu_center, predict_delta_t, reynolds)
from .threshold import (DEFAULT_NU_STAR, DEFAULT_R_MAX, lcsgdt_table,
                        nu_at_measured_lcsgdt, status_of)

MEASURED_H = tuple(h * MM for h in (10, 20, 30, 40, 50))
MEASURED_MEAN_LCSGDT = 131.4 * MM
TABLE1_NU = (0.923, 0.925, 0.924, 0.920, 0.919)
MEASURED_CENTER_DT = (0.73, 0.71, 0.58, 0.48, 0.39)  # degC after 4 s


@dataclass(frozen=True)
class ContinuityGap:
    h_switch: float  # n * d0, m
    below: float  # near-field centre value (H < n d0)
    at: float  # far-field centre value at H = n d0

    @property
    def gap(self) -> float:
        return self.at - self.below


@dataclass
class DiagnosticReport:
    continuity: ContinuityGap
    threshold_rows: list  # dicts in threshold-CSV form plus comparison columns
    tails: list  # TailReport per measured H
    center_rows: list  # dicts: h, predicted_dt, measured_dt


def continuity_gap(coeffs: ModelCoefficients, fluid: FluidSpec) -> ContinuityGap:
    h = coeffs.n * fluid.d0
    near = coeffs.beta * fluid.prandtl ** 0.4 * reynolds(fluid) ** 0.5
    return ContinuityGap(h, near, nu_center(coeffs, fluid, h))


def diagnose(coeffs: ModelCoefficients, fluid: FluidSpec, env: ThermalEnvironment,
             nu_star: float = DEFAULT_NU_STAR, r_max: float = DEFAULT_R_MAX) -> DiagnosticReport:
    rows = []
    solved = lcsgdt_table(coeffs, fluid, MEASURED_H, nu_star, r_max)
    for H, entry, table_nu in zip(MEASURED_H, solved, TABLE1_NU):
        try:
            nu_meas = nu_at_measured_lcsgdt(coeffs, fluid, H, MEASURED_MEAN_LCSGDT)
        except DomainError:
            nu_meas = float("nan")
        row = {"h_mm": H, "nu_star": nu_star, "status": status_of(entry),
               "nu_at_paper_lcsgdt": nu_meas, "paper_table1_value": table_nu}
        if status_of(entry) == "ok":
            row["r_star_mm"] = entry.r_star
            row["lcsgdt_mm"] = entry.lcsgdt
        else:
            row["detail"] = str(entry)
        rows.append(row)
    tails = [check_monotone_tail(coeffs, fluid, H, r_max) for H in MEASURED_H]
    centers = [{"h": H, "predicted_dt": predict_delta_t(coeffs, fluid, env, 0.0, H),
                "measured_dt": m}
               for H, m in zip(MEASURED_H, MEASURED_CENTER_DT)]
    return DiagnosticReport(continuity_gap(coeffs, fluid), rows, tails, centers)
