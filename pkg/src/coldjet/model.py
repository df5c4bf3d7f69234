"""Forward model of cold-airflow heat transfer onto a flat surface.

All quantities are SI (metres, m^3/s, degrees Celsius). Every evaluation
function accepts either scalars or numpy arrays for the geometric arguments
``r`` and ``H`` and returns a float for scalar input.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DomainError, InputError

LPM = 1e-3 / 60.0  # one litre per minute in m^3/s
MM = 1e-3

# calibrated so 25 L/min through a 6 mm nozzle gives Re = 5851
DEFAULT_KINEMATIC_VISCOSITY = 1.5112e-5

# radius where the linear core region hands over to the decaying wall-jet form
CORE_RADIUS_FACTOR = 2.5


def _finite(name, value):
    if not math.isfinite(value):
        raise InputError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class FluidSpec:
    """Nozzle geometry and air properties."""

    volume_flow_rate: float = 25.0 * LPM  # m^3/s
    d0: float = 6.0 * MM  # nozzle inner diameter, m
    kinematic_viscosity: float = DEFAULT_KINEMATIC_VISCOSITY  # m^2/s
    prandtl: float = 0.7

    def __post_init__(self):
        for name in ("volume_flow_rate", "d0", "kinematic_viscosity", "prandtl"):
            _finite(name, getattr(self, name))
        if self.d0 <= 0:
            raise InputError(f"nozzle diameter d0 must be > 0, got {self.d0}")
        if self.kinematic_viscosity <= 0:
            raise InputError(
                f"kinematic viscosity must be > 0, got {self.kinematic_viscosity}")
        if self.prandtl <= 0:
            raise InputError(f"Prandtl number must be > 0, got {self.prandtl}")
        if self.volume_flow_rate < 0:
            raise InputError(
                f"volume flow rate must be >= 0, got {self.volume_flow_rate}")

    @classmethod
    def from_lab_units(cls, flow_lpm=25.0, d0_mm=6.0,
                       nu=DEFAULT_KINEMATIC_VISCOSITY, pr=0.7):
        return cls(flow_lpm * LPM, d0_mm * MM, nu, pr)

    @property
    def reynolds(self) -> float:
        return reynolds(self)


@dataclass(frozen=True)
class ThermalEnvironment:
    """Initial surface, initial airflow and ambient temperatures in degC."""

    surface_initial: float = 33.0
    airflow_initial: float = 0.0
    ambient: float = 25.0

    def __post_init__(self):
        for name in ("surface_initial", "airflow_initial", "ambient"):
            _finite(name, getattr(self, name))

    def require_cooling(self):
        if not self.surface_initial > self.airflow_initial:
            raise InputError(
                "surface must start warmer than the airflow "
                f"(Ts0={self.surface_initial}, Ta0={self.airflow_initial})")


COEFFICIENT_NAMES = ("alpha", "beta", "gamma", "n", "a", "b", "c", "f", "g")


@dataclass(frozen=True)
class ModelCoefficients:
    """The nine free parameters of the modified Nusselt model.

    ``n`` is a multiple of the nozzle diameter, ``g`` is in 1/m, the rest
    are dimensionless. ``alpha`` may be zero (a model that predicts no
    cooling); every other scale parameter must be strictly positive.
    """

    alpha: float
    beta: float
    gamma: float
    n: float
    a: float
    b: float
    c: float
    f: float
    g: float

    def __post_init__(self):
        for name in COEFFICIENT_NAMES:
            _finite(name, getattr(self, name))
        if self.alpha < 0:
            raise InputError(f"alpha must be >= 0, got {self.alpha}")
        for name in ("beta", "gamma", "n", "f", "g"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be > 0, got {getattr(self, name)}")

    def as_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> "ModelCoefficients":
        return replace(self, **changes)


def conventional_coefficients() -> ModelCoefficients:
    """Literature water-jet correlation constants.

    The literature formulas carry no temperature scale or air-warming rate,
    so ``alpha = 1`` and ``g = 1.72 /m`` are placeholders; ``n = 10`` puts
    the far-field centre form exactly where the correlation claims validity.
    """
    return ModelCoefficients(alpha=1.0, beta=0.94, gamma=11.6, n=10.0,
                             a=1.1, b=0.1, c=6.0, f=200.0, g=1.72)


def paper_coefficients() -> ModelCoefficients:
    """Published fitted values for a 6 mm nozzle at 25 L/min."""
    return ModelCoefficients(alpha=7.41, beta=0.921, gamma=141.0, n=4.00,
                             a=7.87, b=0.145, c=9.33e-4, f=2.63e-10, g=1.72)


PRESETS = {
    "conventional": conventional_coefficients,
    "paper": paper_coefficients,
}


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def reynolds(fluid: FluidSpec) -> float:
    """Nozzle-exit Reynolds number 4Q / (pi d0 nu)."""
    return 4.0 * fluid.volume_flow_rate / (math.pi * fluid.d0 * fluid.kinematic_viscosity)


def _h_array(H):
    H = np.asarray(H, dtype=float)
    if np.any(H < 0) or not np.all(np.isfinite(H)):
        raise InputError("presentation distance H must be finite and >= 0")
    return H


def _r_array(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise InputError("radius r must be finite and >= 0")
    return r


def _center(coeffs, fluid, H):
    re = reynolds(fluid)
    pr = fluid.prandtl
    near = coeffs.beta * pr ** 0.4 * re ** 0.5
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        far = coeffs.gamma * pr ** 0.5 * re ** 0.5 * (fluid.d0 / H)
    return np.where(H < coeffs.n * fluid.d0, near, far)


def _wall_jet(coeffs, fluid, r, H):
    """Outer-region G(r,H) F(Re) Pr^0.42 and its denominator, unchecked."""
    re = reynolds(fluid)
    d0 = fluid.d0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = d0 / r
        den = 1.0 + coeffs.b * (H / d0 - coeffs.c) * x
        shape = x * (1.0 - coeffs.a * x) / den
    spread = 2.0 * re ** 0.5 * (1.0 + re ** 0.55 / coeffs.f) ** 0.5
    return shape * spread * fluid.prandtl ** 0.42, den


def _singular_radius(coeffs, fluid, H):
    return -coeffs.b * (H / fluid.d0 - coeffs.c) * fluid.d0


def _radial(coeffs, fluid, r, H, strict):
    r25 = CORE_RADIUS_FACTOR * fluid.d0
    r, H = np.broadcast_arrays(r, H)
    nu0 = _center(coeffs, fluid, H)
    nu25, den25 = _wall_jet(coeffs, fluid, r25, H)
    outer, den = _wall_jet(coeffs, fluid, r, H)
    inside = r < r25
    if strict:
        bad = (inside & (den25 == 0)) | (~inside & (den == 0))
        if np.any(bad):
            h_bad = float(np.asarray(H)[bad].flat[0])
            rs = _singular_radius(coeffs, fluid, h_bad)
            raise DomainError(
                f"radial shape denominator vanishes at r = {rs:.6g} m "
                f"(H = {h_bad:.6g} m)")
    slope = (nu25 - nu0) / r25
    core = slope * r + nu0
    return np.where(inside, core, outer)


def nu_center(coeffs: ModelCoefficients, fluid: FluidSpec, H):
    """Stagnation-point Nusselt number Nu(0, H).

    Below ``n*d0`` it is independent of H; at and beyond it falls as d0/H.
    """
    return _out(_center(coeffs, fluid, _h_array(H)))


def nu_radial(coeffs: ModelCoefficients, fluid: FluidSpec, r, H):
    """Local Nusselt number Nu(r, H).

    Linear interpolation between the stagnation value and the outer form
    inside ``2.5*d0``; outer wall-jet form beyond. Negative values of the
    outer form are returned as-is.

    Raises DomainError where the outer-form denominator is exactly zero.
    """
    r = _r_array(r)
    H = _h_array(H)
    with np.errstate(invalid="ignore"):
        return _out(_radial(coeffs, fluid, r, H, strict=True))


def airflow_temperature(env: ThermalEnvironment, g: float, H):
    """Air temperature on arrival after warming towards ambient over distance H."""
    H = _h_array(H)
    if not g > 0:
        raise InputError(f"g must be > 0, got {g}")
    warm = -np.expm1(-g * H)
    return _out(env.airflow_initial + (env.ambient - env.airflow_initial) * warm)


def predict_delta_t(coeffs: ModelCoefficients, fluid: FluidSpec,
                    env: ThermalEnvironment, r, H):
    """Predicted surface temperature drop alpha (Ts0 - Ta(H)) Nu(r, H)."""
    nu = nu_radial(coeffs, fluid, r, H)
    drive = env.surface_initial - airflow_temperature(env, coeffs.g, H)
    return _out(coeffs.alpha * drive * nu)


def validity_window(fluid: FluidSpec) -> dict:
    """Ranges over which the literature correlation was established.

    Reported for information; evaluation is never restricted to them.
    """
    d0 = fluid.d0
    return {
        "r": (CORE_RADIUS_FACTOR * d0, 7.5 * d0),
        "re": (2e3, 4e5),
        "h": (2.0 * d0, 12.0 * d0),
    }


def validity_warnings(fluid: FluidSpec, r=None, H=None) -> list[str]:
    win = validity_window(fluid)
    out = []
    re = reynolds(fluid)
    lo, hi = win["re"]
    if not lo <= re <= hi:
        out.append(f"Re = {re:.1f} outside correlation range [{lo:g}, {hi:g}]")
    if r is not None:
        lo, hi = win["r"]
        if not lo <= r <= hi:
            out.append(f"r = {r:.6g} m outside correlation range [{lo:g}, {hi:g}] m")
    if H is not None:
        lo, hi = win["h"]
        if not lo < H < hi:
            out.append(f"H = {H:.6g} m outside correlation range ({lo:g}, {hi:g}) m")
    return out


@dataclass(frozen=True)
class TailReport:
    """Suffix ``[r_lo, r_max]`` of the outer region where Nu is positive and
    strictly decreasing. ``r_lo`` is None when no such suffix exists."""

    H: float
    r_lo: float | None
    r_max: float
    samples: int = field(default=0, compare=False)

    @property
    def empty(self) -> bool:
        return self.r_lo is None

    @property
    def interval(self):
        return None if self.empty else (self.r_lo, self.r_max)


def _raw_radial(coeffs, fluid, r, H):
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        v = _radial(coeffs, fluid, np.asarray(r, float), np.asarray(H, float),
                    strict=False)
    return np.where(np.isfinite(v), v, np.nan)


def _refine(pred, lo, hi, tol):
    """Shrink [lo, hi] around the point where ``pred`` switches False -> True."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_monotone_tail(coeffs: ModelCoefficients, fluid: FluidSpec, H: float,
                        r_max: float, samples: int = 1024) -> TailReport:
    """Find where the outer Nusselt profile turns into a positive, strictly
    decreasing tail that runs out to ``r_max``.

    Scans a geometric grid from ``2.5*d0``; an interior maximum or a
    sign/singularity boundary ahead of the tail is then refined by bisection
    so that the returned start never precedes the true turning point.
    """
    r_min = CORE_RADIUS_FACTOR * fluid.d0
    if not r_max > r_min:
        raise InputError(f"r_max must exceed 2.5*d0 = {r_min:g} m, got {r_max}")
    samples = max(int(samples), 512)
    grid = np.geomspace(r_min, r_max, samples)
    vals = _raw_radial(coeffs, fluid, grid, H)
    good = np.isfinite(vals) & (vals > 0)
    last = samples - 1
    if not good[last]:
        return TailReport(H, None, r_max, samples)
    j = last
    while j > 0 and good[j - 1] and vals[j - 1] > vals[j]:
        j -= 1
    if j == last:
        return TailReport(H, None, r_max, samples)
    if j == 0:
        return TailReport(H, r_min, r_max, samples)

    def nu(r):
        return float(_raw_radial(coeffs, fluid, r, H))

    tol = 1e-12 * r_max
    if not good[j - 1]:
        # boundary of positivity / finiteness between grid[j-1] and grid[j]
        def ok(r):
            v = nu(r)
            return math.isfinite(v) and v > 0
        r_lo = _refine(ok, grid[j - 1], grid[j], tol)
    else:
        # interior maximum inside (grid[j-1], grid[j+1]); locate where the
        # forward difference turns negative
        h = 1e-9 * grid[j]

        def falling(r):
            return nu(r + h) < nu(r)
        r_lo = _refine(falling, grid[j - 1], grid[j + 1], tol)
        r_lo = min(r_lo + h, grid[j + 1])
    return TailReport(H, float(r_lo), r_max, samples)
