"""Cold-airflow heat-transfer model, coefficient fitting and threshold planning."""

__version__ = "0.1.0"

from .errors import DomainError, FitFailure, InputError, ParseError
from .model import (FluidSpec, ModelCoefficients, ThermalEnvironment, airflow_temperature,
                    check_monotone_tail, conventional_coefficients, nu_center, nu_radial,
                    paper_coefficients, predict_delta_t, reynolds)
from .fit import FitOptions, FitResult, Observation, fit, goodness, residuals
from .threshold import (LimitsRun, ThresholdResult, lcsgdt_table, limits_estimate,
                        nu_at_measured_lcsgdt, solve_radius)
from .layout import LayoutPlan, Region, plan_grid, plan_line
