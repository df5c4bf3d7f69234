"""Coefficient estimation from (r, H, dT) observations.

Damped Gauss-Newton (Levenberg-Marquardt) over eight continuous parameters
with a finite-difference Jacobian, wrapped in a discrete search over ``n``
(the centre-branch switch makes the objective piecewise constant in ``n``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FitFailure, InputError
from .model import (FluidSpec, ModelCoefficients, ThermalEnvironment,
                    predict_delta_t)

# optimisation order; True marks parameters fitted in log space
FREE_PARAMETERS = (("alpha", True), ("beta", True), ("gamma", True),
                   ("a", False), ("b", False), ("c", False),
                   ("f", True), ("g", True))

DEFAULT_N_GRID = tuple(2.0 + 0.5 * i for i in range(21))


@dataclass(frozen=True)
class Observation:
    r: float  # m
    H: float  # m
    delta_t: float  # degC, positive for cooling

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise InputError(f"observation radius must be finite and >= 0, got {self.r}")
        if not (math.isfinite(self.H) and self.H > 0):
            raise InputError(f"observation distance must be finite and > 0, got {self.H}")
        if not math.isfinite(self.delta_t):
            raise InputError(f"observation delta_t must be finite, got {self.delta_t}")


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 200
    convergence_tol: float = 1e-10
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 10.0
    fd_step: float = 1e-6
    n_grid: tuple = DEFAULT_N_GRID
    max_damping_retries: int = 16

    def __post_init__(self):
        if self.max_iterations < 1:
            raise InputError("max_iterations must be >= 1")
        if not self.convergence_tol > 0:
            raise InputError("convergence_tol must be > 0")
        if not self.fd_step > 0:
            raise InputError("fd_step must be > 0")
        if not self.initial_damping > 0:
            raise InputError("initial_damping must be > 0")
        if not (self.damping_up > 1 and self.damping_down > 1):
            raise InputError("damping factors must be > 1")
        grid = tuple(float(v) for v in self.n_grid)
        if not grid or any(not (math.isfinite(v) and v > 0) for v in grid):
            raise InputError("n_grid must be non-empty with all values > 0")
        object.__setattr__(self, "n_grid", grid)


@dataclass
class CandidateFit:
    n: float
    coefficients: ModelCoefficients | None
    sse: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


@dataclass
class FitResult:
    coefficients: ModelCoefficients
    r_squared: float
    rmse: float
    iterations: int
    converged: bool
    residuals: np.ndarray
    sse: float
    history: list
    candidates: list

    @property
    def n(self) -> float:
        return self.coefficients.n


class UndefinedRSquared(InputError):
    """Observed values have zero variance; ``rmse`` is still available."""

    def __init__(self, rmse):
        super().__init__("R^2 undefined: observed delta_t has zero variance")
        self.rmse = rmse


def _arrays(obs):
    if len(obs) == 0:
        raise InputError("need at least one observation")
    r = np.array([o.r for o in obs], dtype=float)
    H = np.array([o.H for o in obs], dtype=float)
    dt = np.array([o.delta_t for o in obs], dtype=float)
    return r, H, dt


def residuals(coeffs: ModelCoefficients, fluid: FluidSpec, env: ThermalEnvironment,
              obs) -> np.ndarray:
    """Observed minus predicted delta_t, in observation order."""
    r, H, dt = _arrays(obs)
    try:
        return dt - np.asarray(predict_delta_t(coeffs, fluid, env, r, H))
    except DomainError:
        for i, o in enumerate(obs):
            try:
                predict_delta_t(coeffs, fluid, env, o.r, o.H)
            except DomainError as exc:
                raise DomainError(f"observation {i}: {exc}") from exc
        raise


def goodness(res, obs) -> tuple[float, float]:
    """Return ``(r_squared, rmse)``."""
    res = np.asarray(res, dtype=float)
    if len(res) != len(obs):
        raise InputError(f"{len(res)} residuals for {len(obs)} observations")
    if len(res) == 0:
        raise InputError("no residuals")
    rmse = math.sqrt(float(np.mean(res * res)))
    dt = np.array([o.delta_t for o in obs], dtype=float)
    ss_tot = float(np.sum((dt - dt.mean()) ** 2))
    if len(obs) < 2 or ss_tot == 0:
        raise UndefinedRSquared(rmse)
    return 1.0 - float(res @ res) / ss_tot, rmse


def check_identifiable(obs):
    if len(obs) < 9:
        raise InputError(f"need at least 9 observations to fit 9 coefficients, got {len(obs)}")
    if len({o.H for o in obs}) < 2:
        raise InputError("observations must span at least 2 distinct H values")
    if len({o.r for o in obs}) < 3:
        raise InputError("observations must span at least 3 distinct r values")
    if len({o.delta_t for o in obs}) < 2:
        raise InputError("all observed delta_t are identical; nothing to fit")


def _encode(coeffs):
    return np.array([math.log(getattr(coeffs, k)) if log else getattr(coeffs, k)
                     for k, log in FREE_PARAMETERS])


def _decode(theta, n):
    vals = {k: (math.exp(t) if log else float(t))
            for (k, log), t in zip(FREE_PARAMETERS, theta)}
    return ModelCoefficients(n=n, **vals)


class _Problem:
    def __init__(self, obs, fluid, env, n):
        self.r, self.H, self.dt = _arrays(obs)
        self.fluid = fluid
        self.env = env
        self.n = n

    def residual(self, theta):
        """Residual vector, or None where the model is undefined."""
        try:
            coeffs = _decode(theta, self.n)
            with np.errstate(all="ignore"):
                pred = predict_delta_t(coeffs, self.fluid, self.env, self.r, self.H)
        except (InputError, DomainError, OverflowError):
            return None
        res = self.dt - pred
        if not np.all(np.isfinite(res)):
            return None
        return res

    def jacobian(self, theta, res0, step):
        cols = []
        for i in range(len(theta)):
            h = step * max(1.0, abs(theta[i]))
            up = theta.copy()
            dn = theta.copy()
            up[i] += h
            dn[i] -= h
            r_up = self.residual(up)
            r_dn = self.residual(dn)
            # residual = data - model, so dr/dtheta = -dmodel/dtheta
            if r_up is not None and r_dn is not None:
                cols.append((r_up - r_dn) / (2 * h))
            elif r_up is not None:
                cols.append((r_up - res0) / h)
            elif r_dn is not None:
                cols.append((res0 - r_dn) / h)
            else:
                cols.append(np.zeros_like(res0))
        return np.column_stack(cols)


def _lm(problem, theta, opts):
    res = problem.residual(theta)
    if res is None:
        return CandidateFit(problem.n, None, math.inf, 0, False)
    sse = float(res @ res)
    history = [sse]
    lam = opts.initial_damping
    # residuals at rounding level of the data: nothing left to fit
    floor = (64 * np.finfo(float).eps) ** 2 * float(problem.dt @ problem.dt)
    converged = sse <= floor
    it = 0
    while not converged and it < opts.max_iterations:
        it += 1
        J = problem.jacobian(theta, res, opts.fd_step)
        scale = np.einsum("ij,ij->j", J, J)
        scale = np.where(scale > 0, scale, 1.0)
        accepted = False
        for _ in range(opts.max_damping_retries):
            A = np.vstack([J, np.diag(np.sqrt(lam * scale))])
            rhs = np.concatenate([-res, np.zeros(len(theta))])
            # J = d(res)/d(theta); minimise |res + J delta|^2 + lam |D delta|^2
            delta = np.linalg.lstsq(A, rhs, rcond=None)[0]
            trial = theta + delta
            res_t = problem.residual(trial)
            if res_t is not None:
                sse_t = float(res_t @ res_t)
                if sse_t < sse:
                    accepted = True
                    break
            lam *= opts.damping_up
        if not accepted:
            # no descent even with heavy damping: stationary to working precision
            converged = True
            break
        rel = (sse - sse_t) / sse
        theta, res, sse = trial, res_t, sse_t
        history.append(sse)
        lam = max(lam / opts.damping_down, 1e-15)
        if rel < opts.convergence_tol or sse <= floor:
            converged = True
    return CandidateFit(problem.n, _decode(theta, problem.n), sse, it, converged, history)


def fit(obs, fluid: FluidSpec, env: ThermalEnvironment, init: ModelCoefficients,
        options: FitOptions | None = None) -> FitResult:
    """Least-squares estimate of all nine coefficients.

    Every ``n`` in ``options.n_grid`` gets its own LM solve started from
    ``init``; the candidate with the smallest final sum of squares wins.
    Raises FitFailure if no candidate has a finite objective.
    """
    options = options or FitOptions()
    obs = list(obs)
    check_identifiable(obs)
    if init.alpha <= 0:
        raise InputError("initial alpha must be > 0 (fitted in log space)")
    theta0 = _encode(init)
    candidates = [_lm(_Problem(obs, fluid, env, n), theta0.copy(), options)
                  for n in options.n_grid]
    finite = [c for c in candidates if c.coefficients is not None and math.isfinite(c.sse)]
    if not finite:
        raise FitFailure("objective is non-finite for every candidate n", partial=None)
    best = min(finite, key=lambda c: c.sse)
    res = residuals(best.coefficients, fluid, env, obs)
    r2, rmse = goodness(res, obs)
    return FitResult(coefficients=best.coefficients, r_squared=r2, rmse=rmse,
                     iterations=best.iterations, converged=best.converged,
                     residuals=res, sse=best.sse, history=best.history,
                     candidates=candidates)
