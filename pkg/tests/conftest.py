import numpy as np
import pytest

from coldjet.fit import Observation
from coldjet.model import (FluidSpec, ThermalEnvironment, conventional_coefficients,
                           predict_delta_t)

MM = 1e-3

# n = 4 puts the centre switch at 24 mm; H = 22 and 25 mm pin it between grid neighbours
SYNTH_H = tuple(h * MM for h in (10, 16, 22, 25, 30, 40, 50))
SYNTH_R = tuple(np.linspace(0.0, 80 * MM, 33))


def planted_coefficients():
    return conventional_coefficients().replace(alpha=0.002, n=4.0)


def perturbed(coeffs, seed=7, frac=0.2):
    """Every continuous parameter moved by +/- frac (sign drawn per parameter)."""
    rng = np.random.default_rng(seed)
    keys = ("alpha", "beta", "gamma", "a", "b", "c", "f", "g")
    signs = rng.choice([-1.0, 1.0], size=len(keys))
    return coeffs.replace(**{k: getattr(coeffs, k) * (1 + s * frac) for k, s in zip(keys, signs)})


def synthetic_observations(coeffs, fluid, env, Hs=SYNTH_H, rs=SYNTH_R, sigma=0.0, seed=0):
    rng = np.random.default_rng(seed)
    obs = []
    for H in Hs:
        dt = predict_delta_t(coeffs, fluid, env, np.asarray(rs), H)
        if sigma:
            dt = dt + rng.normal(0.0, sigma, len(rs))
        obs.extend(Observation(float(r), H, float(v)) for r, v in zip(rs, dt))
    return obs


@pytest.fixture
def fluid():
    return FluidSpec()


@pytest.fixture
def env():
    return ThermalEnvironment()


@pytest.fixture
def planted():
    return planted_coefficients()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
