"""Nozzle placement with adjacent spacing no wider than the discrimination distance."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Region:
    kind: str  # "line" or "rectangle"
    width: float
    height: float | None = None

    def __post_init__(self):
        if self.kind not in ("line", "rectangle"):
            raise InputError(f"region kind must be 'line' or 'rectangle', got {self.kind!r}")
        if not (math.isfinite(self.width) and self.width > 0):
            raise InputError(f"region extent must be > 0, got {self.width}")
        if self.kind == "rectangle":
            if self.height is None or not (math.isfinite(self.height) and self.height > 0):
                raise InputError(f"rectangle height must be > 0, got {self.height}")


@dataclass(frozen=True)
class LayoutPlan:
    positions: tuple  # floats for a line, (x, y) pairs for a rectangle; m
    spacing: tuple  # one entry per axis, m
    count: int
    lcsgdt_used: float


def _positive(name, v):
    if not (math.isfinite(v) and v > 0):
        raise InputError(f"{name} must be > 0, got {v}")


def nozzle_count(length: float, lcsgdt: float) -> int:
    """Fewest nozzles whose uniform spacing ``length/k`` stays within ``lcsgdt``."""
    _positive("length", length)
    _positive("lcsgdt", lcsgdt)
    k = max(1, math.ceil(length / lcsgdt))
    # the rounded quotient can land one either side of an exact multiple
    while length / k > lcsgdt:
        k += 1
    while k > 1 and length / (k - 1) <= lcsgdt:
        k -= 1
    return k


def _axis(length, lcsgdt):
    k = nozzle_count(length, lcsgdt)
    step = length / k
    return [(i + 0.5) * step for i in range(k)], step


def plan_line(length: float, lcsgdt: float) -> LayoutPlan:
    """Evenly spaced nozzles along ``[0, length]``.

    Each nozzle covers ``lcsgdt/2`` either side, so the count is minimal;
    among minimal plans, uniform spacing leaves the largest margin.
    """
    xs, step = _axis(length, lcsgdt)
    return LayoutPlan(tuple(xs), (step,), len(xs), lcsgdt)


def plan_grid(width: float, height: float, lcsgdt: float) -> LayoutPlan:
    """Per-axis line plans combined as a Cartesian product, sorted by (x, y)."""
    xs, sx = _axis(width, lcsgdt)
    ys, sy = _axis(height, lcsgdt)
    pts = tuple((x, y) for x in xs for y in ys)
    return LayoutPlan(pts, (sx, sy), len(pts), lcsgdt)


def plan_region(region: Region, lcsgdt: float) -> LayoutPlan:
    if region.kind == "line":
        return plan_line(region.width, lcsgdt)
    return plan_grid(region.width, region.height, lcsgdt)
