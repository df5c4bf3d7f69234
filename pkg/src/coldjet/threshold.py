"""Threshold radius and discrimination distance from a critical Nusselt number.

The discrimination threshold between two jets is taken as twice the radius
at which one jet's Nusselt number has fallen to ``nu_star``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .model import FluidSpec, ModelCoefficients, check_monotone_tail, nu_radial

DEFAULT_NU_STAR = 0.92
DEFAULT_R_MAX = 0.5  # m
RADIUS_TOL = 1e-9  # m


class IllPosedError(InputError):
    """No positive, strictly decreasing tail to solve on."""


class NoCrossingError(InputError):
    """``nu_star`` lies outside the Nusselt range attainable on the tail."""

    def __init__(self, message, nu_range):
        super().__init__(message)
        self.nu_range = nu_range


@dataclass(frozen=True)
class ThresholdResult:
    H: float
    nu_star: float
    r_star: float
    lcsgdt: float
    bracket: tuple
    solver_iterations: int


@dataclass(frozen=True)
class LimitsRun:
    """One ascending/descending pair from a method-of-limits session (m)."""

    ascending_yes_distance: float
    descending_no_distance: float

    def __post_init__(self):
        for name in ("ascending_yes_distance", "descending_no_distance"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InputError(f"{name} must be a positive distance, got {v}")


def solve_radius(coeffs: ModelCoefficients, fluid: FluidSpec, H: float,
                 nu_star: float, r_max: float = DEFAULT_R_MAX,
                 grid_points: int = 512) -> ThresholdResult:
    """Radius on the decreasing outer tail where Nu(r, H) equals ``nu_star``.

    Crossings ahead of the tail (from non-monotone fitted shapes) are never
    considered.
    """
    if not (math.isfinite(nu_star) and nu_star > 0):
        raise InputError(f"nu_star must be > 0, got {nu_star}")
    tail = check_monotone_tail(coeffs, fluid, H, r_max)
    if tail.empty:
        raise IllPosedError(
            f"Nu(r, H={H:g} m) has no positive decreasing tail up to r_max={r_max:g} m")
    lo, hi = tail.r_lo, tail.r_max

    def nu(r):
        return nu_radial(coeffs, fluid, r, H)

    top, bottom = nu(lo), nu(hi)
    if not bottom < nu_star < top:
        raise NoCrossingError(
            f"nu_star={nu_star:g} outside attainable range ({bottom:.6g}, {top:.6g}) "
            f"on r in [{lo:.6g}, {hi:.6g}] m at H={H:g} m", (bottom, top))

    grid = np.geomspace(lo, hi, grid_points)
    vals = np.asarray(nu(grid))
    # vals[0] > nu_star > vals[-1], so the first index below nu_star is >= 1
    k = int(np.argmax(vals < nu_star))
    r_lo, r_hi = float(grid[k - 1]), float(grid[k])
    if vals[k - 1] == nu_star:
        r_lo = lo if k == 1 else float(grid[k - 2])
    iterations = 0
    r_mid = 0.5 * (r_lo + r_hi)
    while r_hi - r_lo > RADIUS_TOL and r_lo < r_mid < r_hi:
        iterations += 1
        v = nu(r_mid)
        if v == nu_star:
            break
        if v > nu_star:
            r_lo = r_mid
        else:
            r_hi = r_mid
        r_mid = 0.5 * (r_lo + r_hi)
    return ThresholdResult(H=H, nu_star=nu_star, r_star=r_mid, lcsgdt=2.0 * r_mid,
                           bracket=(r_lo, r_hi), solver_iterations=iterations)


def lcsgdt_table(coeffs, fluid, Hs, nu_star=DEFAULT_NU_STAR, r_max=DEFAULT_R_MAX):
    """Solve for each H; a failing entry is returned as its exception instance."""
    out = []
    for H in Hs:
        try:
            out.append(solve_radius(coeffs, fluid, H, nu_star, r_max))
        except (InputError, DomainError) as exc:
            out.append(exc)
    return out


def status_of(entry) -> str:
    if isinstance(entry, ThresholdResult):
        return "ok"
    if isinstance(entry, NoCrossingError):
        return "no-crossing"
    if isinstance(entry, IllPosedError):
        return "ill-posed"
    if isinstance(entry, DomainError):
        return "domain-error"
    return "invalid-input"


def nu_at_measured_lcsgdt(coeffs, fluid, H, lcsgdt):
    """Nusselt number at half a measured discrimination distance."""
    if not lcsgdt > 0:
        raise InputError(f"lcsgdt must be > 0, got {lcsgdt}")
    return nu_radial(coeffs, fluid, lcsgdt / 2.0, H)


def limits_estimate(runs) -> float:
    """Mean midpoint of ascending "yes" and descending "no" distances."""
    runs = list(runs)
    if not runs:
        raise InputError("need at least one method-of-limits run")
    mids = [(run.ascending_yes_distance + run.descending_no_distance) / 2.0
            for run in runs]
    return math.fsum(mids) / len(mids)
