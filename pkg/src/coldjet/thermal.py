"""Thermal frames: loading, differencing, centre detection, radial profiles.

Frames are row-major grids in degC; ``x`` indexes columns and ``y`` rows,
both in pixels. Physical radii come from the pixel pitch in m/pixel.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParseError
from .fit import Observation
from .model import FluidSpec, ModelCoefficients, ThermalEnvironment, predict_delta_t

DEFAULT_NOISE_SIGMA = 0.025  # degC, camera resolution scale
CENTER_LEVEL = 0.95

DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _grid(values, pitch, what):
    values = np.array(values, dtype=float)
    if values.ndim != 2 or values.shape[0] < 3 or values.shape[1] < 3:
        raise InputError(f"{what} must be a 2-D grid of at least 3x3, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise InputError(f"{what} contains non-finite values")
    if not (math.isfinite(pitch) and pitch > 0):
        raise InputError(f"pixel pitch must be > 0, got {pitch}")
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ThermalFrame:
    temperatures: np.ndarray  # (height, width) degC
    pitch: float  # m / pixel

    def __post_init__(self):
        object.__setattr__(self, "temperatures", _grid(self.temperatures, self.pitch, "frame"))

    @property
    def height(self) -> int:
        return self.temperatures.shape[0]

    @property
    def width(self) -> int:
        return self.temperatures.shape[1]


@dataclass(frozen=True, eq=False)
class DeltaField:
    values: np.ndarray  # before - after, degC
    pitch: float

    def __post_init__(self):
        object.__setattr__(self, "values", _grid(self.values, self.pitch, "delta field"))

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class RadialProfile:
    direction: tuple
    samples: tuple  # ((r, delta_t), ...) with r = k * pitch


def load_frame(source, pitch: float) -> ThermalFrame:
    """Read a headerless CSV grid of temperatures.

    ``source`` is a path or an open text stream. Blank lines are skipped.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return load_frame(fh, pitch)
    rows = []
    width = None
    for lineno, row in enumerate(csv.reader(source), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        vals = []
        for col, cell in enumerate(row, start=1):
            try:
                vals.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", line=lineno, column=col) from None
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(f"row has {len(vals)} columns, expected {width} (row {len(rows) + 1})",
                             line=lineno)
        rows.append(vals)
    if not rows:
        raise ParseError("empty frame")
    return ThermalFrame(np.array(rows), pitch)


def frame_to_csv(frame: ThermalFrame) -> str:
    buf = io.StringIO()
    for row in frame.temperatures:
        buf.write(",".join(repr(float(v)) for v in row))
        buf.write("\n")
    return buf.getvalue()


def save_frame(frame: ThermalFrame, path):
    with open(path, "w", newline="") as fh:
        fh.write(frame_to_csv(frame))


def delta_field(before: ThermalFrame, after: ThermalFrame) -> DeltaField:
    """Cellwise ``before - after``; cooling is positive."""
    if before.temperatures.shape != after.temperatures.shape:
        raise InputError(f"frame shapes differ: {before.temperatures.shape} "
                         f"vs {after.temperatures.shape}")
    if before.pitch != after.pitch:
        raise InputError(f"frame pitches differ: {before.pitch} vs {after.pitch}")
    return DeltaField(before.temperatures - after.temperatures, before.pitch)


def find_center(field: DeltaField) -> tuple[float, float]:
    """Value-weighted centroid of pixels at or above 95 % of the peak."""
    v = field.values
    peak = float(v.max())
    if not peak > 0:
        raise InputError("no cooling stimulus in field (maximum delta_t <= 0)")
    mask = v >= CENTER_LEVEL * peak
    ys, xs = np.nonzero(mask)
    w = v[mask]
    total = w.sum()
    return float((xs * w).sum() / total), float((ys * w).sum() / total)


def _nearest_pixel(center, shape):
    cx, cy = center
    ix, iy = math.floor(cx + 0.5), math.floor(cy + 0.5)
    h, w = shape
    if not (0 <= ix < w and 0 <= iy < h):
        raise InputError(f"center {center} lies outside the {w}x{h} grid")
    return ix, iy


def radial_profiles(field: DeltaField, center) -> list[RadialProfile]:
    """Axis-aligned profiles (+x, -x, +y, -y) out to the grid edge."""
    ix, iy = _nearest_pixel(center, field.shape)
    h, w = field.shape
    out = []
    for dx, dy in DIRECTIONS:
        samples = []
        k = 0
        x, y = ix, iy
        while 0 <= x < w and 0 <= y < h:
            samples.append((k * field.pitch, float(field.values[y, x])))
            k += 1
            x += dx
            y += dy
        out.append(RadialProfile((dx, dy), tuple(samples)))
    return out


def extract_profiles(field: DeltaField, center, H: float) -> list[Observation]:
    """Observations along the four axis directions; the centre appears once."""
    profiles = radial_profiles(field, center)
    r0, dt0 = profiles[0].samples[0]
    obs = [Observation(r0, H, dt0)]
    for prof in profiles:
        obs.extend(Observation(r, H, dt) for r, dt in prof.samples[1:])
    return obs


def synthesize_frames(coeffs: ModelCoefficients, fluid: FluidSpec, env: ThermalEnvironment,
                      H: float, pitch: float, size: int,
                      noise_sigma: float = DEFAULT_NOISE_SIGMA, seed: int = 0,
                      center=None) -> tuple[ThermalFrame, ThermalFrame]:
    """Before/after frames from the forward model plus i.i.d. Gaussian noise.

    ``center`` defaults to the grid centre ``((size-1)/2, (size-1)/2)``.
    """
    if size < 3:
        raise InputError(f"size must be >= 3, got {size}")
    if not (math.isfinite(noise_sigma) and noise_sigma >= 0):
        raise InputError(f"noise_sigma must be >= 0, got {noise_sigma}")
    if not (math.isfinite(pitch) and pitch > 0):
        raise InputError(f"pixel pitch must be > 0, got {pitch}")
    if center is None:
        center = ((size - 1) / 2.0, (size - 1) / 2.0)
    cx, cy = center
    ys, xs = np.mgrid[0:size, 0:size]
    r = np.hypot(xs - cx, ys - cy) * pitch
    dt = np.asarray(predict_delta_t(coeffs, fluid, env, r, H))
    ts0 = env.surface_initial
    before = np.full((size, size), ts0)
    after = ts0 - dt
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        before = before + rng.normal(0.0, noise_sigma, before.shape)
        after = after + rng.normal(0.0, noise_sigma, after.shape)
    return ThermalFrame(before, pitch), ThermalFrame(after, pitch)
