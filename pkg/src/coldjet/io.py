"""Readers and writers for the on-disk formats.

Files use lab units (mm, L/min, degC); everything returned from here is SI.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

from .errors import InputError, ParseError
from .fit import Observation
from .model import (COEFFICIENT_NAMES, DEFAULT_KINEMATIC_VISCOSITY, LPM, MM,
                    FluidSpec, ModelCoefficients, ThermalEnvironment)

OBS_HEADER = ("r_mm", "h_mm", "delta_t_c")
THRESHOLD_HEADER = ("h_mm", "nu_star", "r_star_mm", "lcsgdt_mm", "status")
DIAGNOSTIC_EXTRA = ("nu_at_paper_lcsgdt", "paper_table1_value")

FLUID_KEYS = ("flow_lpm", "d0_mm", "nu", "pr")
ENV_KEYS = ("ts0_c", "ta0_c", "te_c")

FLUID_DEFAULTS = {"flow_lpm": 25.0, "d0_mm": 6.0, "nu": DEFAULT_KINEMATIC_VISCOSITY, "pr": 0.7}
ENV_DEFAULTS = {"ts0_c": 33.0, "ta0_c": 0.0, "te_c": 25.0}


def num(v) -> str:
    """Shortest text that reads back to the same float."""
    return repr(float(v))


def fluid_from_lab(values: dict) -> FluidSpec:
    v = {**FLUID_DEFAULTS, **values}
    return FluidSpec(v["flow_lpm"] * LPM, v["d0_mm"] * MM, v["nu"], v["pr"])


def fluid_to_lab(fluid: FluidSpec) -> dict:
    return {"flow_lpm": fluid.volume_flow_rate / LPM, "d0_mm": fluid.d0 / MM,
            "nu": fluid.kinematic_viscosity, "pr": fluid.prandtl}


def env_from_lab(values: dict) -> ThermalEnvironment:
    v = {**ENV_DEFAULTS, **values}
    return ThermalEnvironment(v["ts0_c"], v["ta0_c"], v["te_c"])


def env_to_lab(env: ThermalEnvironment) -> dict:
    return {"ts0_c": env.surface_initial, "ta0_c": env.airflow_initial, "te_c": env.ambient}


@dataclass
class CoefficientFile:
    coefficients: ModelCoefficients
    fluid: dict = field(default_factory=dict)  # lab units, possibly partial
    env: dict = field(default_factory=dict)


def _number(where, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}{key!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise InputError(f"{where}{key!r} must be finite")
    return float(value)


def _block(doc, name, keys):
    block = doc.get(name, {})
    if not isinstance(block, dict):
        raise InputError(f"{name!r} must be an object")
    unknown = sorted(set(block) - set(keys))
    if unknown:
        raise InputError(f"unknown key(s) in {name!r}: {', '.join(unknown)}")
    return {k: _number(f"{name}.", k, block[k]) for k in keys if k in block}


def parse_coefficients(text: str) -> CoefficientFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise InputError("coefficient file must be a JSON object")
    unknown = sorted(set(doc) - set(COEFFICIENT_NAMES) - {"fluid", "env"})
    if unknown:
        raise InputError(f"unknown key(s) in coefficient file: {', '.join(unknown)}")
    missing = [k for k in COEFFICIENT_NAMES if k not in doc]
    if missing:
        raise InputError(f"coefficient file missing key(s): {', '.join(missing)}")
    coeffs = ModelCoefficients(**{k: _number("", k, doc[k]) for k in COEFFICIENT_NAMES})
    return CoefficientFile(coeffs, _block(doc, "fluid", FLUID_KEYS), _block(doc, "env", ENV_KEYS))


def load_coefficients(path) -> CoefficientFile:
    with open(path) as fh:
        return parse_coefficients(fh.read())


def dump_coefficients(coeffs: ModelCoefficients, fluid: FluidSpec | None = None,
                      env: ThermalEnvironment | None = None) -> str:
    doc = {k: getattr(coeffs, k) for k in COEFFICIENT_NAMES}
    if fluid is not None:
        doc["fluid"] = fluid_to_lab(fluid)
    if env is not None:
        doc["env"] = env_to_lab(env)
    return json.dumps(doc, indent=2) + "\n"


def read_observations(source) -> list[Observation]:
    """Parse the ``r_mm,h_mm,delta_t_c`` CSV into SI observations."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return read_observations(fh)
    header_seen = False
    out = []
    for lineno, row in enumerate(csv.reader(source), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != OBS_HEADER:
                raise ParseError(f"expected header {','.join(OBS_HEADER)}, got {','.join(cells)}",
                                 line=lineno)
            header_seen = True
            continue
        if len(cells) != 3:
            raise ParseError(f"expected 3 fields, got {len(cells)}", line=lineno)
        vals = []
        for col, cell in enumerate(cells, start=1):
            try:
                vals.append(float(cell))
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", line=lineno, column=col) from None
        try:
            out.append(Observation(vals[0] * MM, vals[1] * MM, vals[2]))
        except InputError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if not header_seen:
        raise ParseError("empty observation file")
    return out


def observations_csv(obs) -> str:
    buf = io.StringIO()
    buf.write(",".join(OBS_HEADER) + "\n")
    for o in obs:
        buf.write(f"{num(o.r / MM)},{num(o.H / MM)},{num(o.delta_t)}\n")
    return buf.getvalue()


def threshold_csv(rows, diagnostic=False) -> str:
    """``rows`` are dicts keyed by the header names (SI values for lengths)."""
    header = THRESHOLD_HEADER + (DIAGNOSTIC_EXTRA if diagnostic else ())
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        cells = []
        for key in header:
            v = row.get(key)
            if v is None:
                cells.append("")
            elif isinstance(v, str):
                cells.append(v)
            elif key.endswith("_mm"):
                cells.append(num(v / MM))
            else:
                cells.append(num(v))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def plan_csv(plan) -> str:
    two_d = len(plan.spacing) == 2
    buf = io.StringIO()
    buf.write("x_mm,y_mm\n" if two_d else "x_mm\n")
    for p in plan.positions:
        if two_d:
            buf.write(f"{num(p[0] / MM)},{num(p[1] / MM)}\n")
        else:
            buf.write(f"{num(p / MM)}\n")
    summary = f"# count={plan.count} spacing_x={num(plan.spacing[0] / MM)}"
    if two_d:
        summary += f" spacing_y={num(plan.spacing[1] / MM)}"
    buf.write(summary + "\n")
    return buf.getvalue()
