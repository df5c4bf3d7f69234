"""Batch command-line front end.

Exit codes: 0 success, 2 bad input, 3 fit did not converge.
Lengths on the command line are mm, flow is L/min, temperatures degC.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .diagnostics import MEASURED_H, MEASURED_MEAN_LCSGDT, TABLE1_NU, diagnose
from .errors import DomainError, FitFailure, InputError
from .fit import DEFAULT_N_GRID, FitOptions, fit
from .io import (ENV_KEYS, FLUID_KEYS, CoefficientFile, dump_coefficients, env_from_lab,
                 fluid_from_lab, load_coefficients, observations_csv, plan_csv,
                 read_observations, threshold_csv, num)
from .layout import plan_grid, plan_line
from .model import (MM, PRESETS, nu_radial, predict_delta_t, reynolds,
                    validity_warnings, validity_window)
from .thermal import (DEFAULT_NOISE_SIGMA, delta_field, extract_profiles, find_center,
                      load_frame, save_frame, synthesize_frames)
from .threshold import (DEFAULT_NU_STAR, DEFAULT_R_MAX, lcsgdt_table, nu_at_measured_lcsgdt,
                        status_of)

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 2, 3

FORMATS = """\
file formats:
  coefficients  JSON object with exactly alpha, beta, gamma, n, a, b, c, f, g
                (g in 1/m) plus optional "fluid" {flow_lpm, d0_mm, nu, pr} and
                "env" {ts0_c, ta0_c, te_c}; unknown keys are rejected.
                --coeffs/--init also accept the preset names 'paper' and
                'conventional'.
  observations  CSV with header r_mm,h_mm,delta_t_c
  frames        headerless CSV grid of degC, rows top to bottom
  threshold     CSV h_mm,nu_star,r_star_mm,lcsgdt_mm,status
                (--diagnostic adds nu_at_paper_lcsgdt,paper_table1_value)
  plan          CSV x_mm[,y_mm] followed by '# count=K spacing_x=S [spacing_y=S]'
"""


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_conditions(p):
    g = p.add_argument_group("fluid / environment overrides")
    g.add_argument("--flow-lpm", type=float, help="volume flow rate [L/min] (default 25)")
    g.add_argument("--d0-mm", type=float, help="nozzle inner diameter [mm] (default 6)")
    g.add_argument("--nu", type=float, help="kinematic viscosity [m^2/s] (default 1.5112e-5)")
    g.add_argument("--pr", type=float, help="Prandtl number (default 0.7)")
    g.add_argument("--ts0-c", type=float, help="initial surface temperature [degC] (default 33)")
    g.add_argument("--ta0-c", type=float, help="initial airflow temperature [degC] (default 0)")
    g.add_argument("--te-c", type=float, help="ambient temperature [degC] (default 25)")


def _conditions(args, source: CoefficientFile | None = None):
    fluid = dict(source.fluid) if source else {}
    env = dict(source.env) if source else {}
    for key in FLUID_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            fluid[key] = v
    for key in ENV_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            env[key] = v
    return fluid_from_lab(fluid), env_from_lab(env)


def _coefficients(spec) -> CoefficientFile:
    if spec in PRESETS and not os.path.exists(spec):
        return CoefficientFile(PRESETS[spec]())
    if not os.path.exists(spec):
        raise InputError(f"coefficient file not found: {spec}")
    return load_coefficients(spec)


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def cmd_props(args):
    fluid, _ = _conditions(args)
    win = validity_window(fluid)
    print(f"re={num(reynolds(fluid))}")
    print(f"pr={num(fluid.prandtl)}")
    print(f"d0_mm={num(fluid.d0 / MM)}")
    print(f"valid_r_mm={num(win['r'][0] / MM)}..{num(win['r'][1] / MM)}")
    print(f"valid_re={win['re'][0]:g}..{win['re'][1]:g}")
    print(f"valid_h_mm={num(win['h'][0] / MM)}..{num(win['h'][1] / MM)} (exclusive)")
    for w in validity_warnings(fluid):
        _warn(w)
    return EXIT_OK


def cmd_predict(args):
    src = _coefficients(args.coeffs)
    fluid, env = _conditions(args, src)
    lines = ["h_mm,r_mm,nu,delta_t_c\n"]
    for h in args.h_mm:
        for r in args.r_mm:
            nu = nu_radial(src.coefficients, fluid, r * MM, h * MM)
            dt = predict_delta_t(src.coefficients, fluid, env, r * MM, h * MM)
            lines.append(f"{num(h)},{num(r)},{num(nu)},{num(dt)}\n")
    _emit("".join(lines), args.out)
    return EXIT_OK


def cmd_fit(args):
    obs = []
    for path in args.obs:
        obs.extend(read_observations(path))
    src = _coefficients(args.init)
    fluid, env = _conditions(args, src)
    opts = FitOptions(max_iterations=args.max_iter, convergence_tol=args.tol,
                      initial_damping=args.damping, fd_step=args.fd_step,
                      n_grid=tuple(args.n_grid))
    try:
        result = fit(obs, fluid, env, src.coefficients, opts)
    except FitFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    with open(args.out, "w") as fh:
        fh.write(dump_coefficients(result.coefficients, fluid, env))
    print(f"r_squared={result.r_squared:.6f}")
    print(f"rmse_c={result.rmse:.6e}")
    print(f"iterations={result.iterations}")
    print(f"n={num(result.n)}")
    print(f"converged={str(result.converged).lower()}")
    if not result.converged:
        print("error: fit did not converge within --max-iter", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_threshold(args):
    src = _coefficients(args.coeffs)
    fluid, _ = _conditions(args, src)
    if not args.nu_star > 0:
        raise InputError(f"--nu-star must be > 0, got {args.nu_star}")
    Hs = [h * MM for h in args.h_mm]
    entries = lcsgdt_table(src.coefficients, fluid, Hs, args.nu_star, args.r_max_mm * MM)
    table = dict(zip(MEASURED_H, TABLE1_NU))
    rows = []
    for H, entry in zip(Hs, entries):
        row = {"h_mm": H, "nu_star": args.nu_star, "status": status_of(entry)}
        if row["status"] == "ok":
            row["r_star_mm"] = entry.r_star
            row["lcsgdt_mm"] = entry.lcsgdt
        else:
            _warn(f"H={num(H / MM)} mm: {entry}")
        if args.diagnostic:
            try:
                row["nu_at_paper_lcsgdt"] = nu_at_measured_lcsgdt(
                    src.coefficients, fluid, H, args.lcsgdt_mm * MM)
            except DomainError:
                row["nu_at_paper_lcsgdt"] = float("nan")
            match = [v for h, v in table.items() if abs(h - H) < 1e-12]
            row["paper_table1_value"] = match[0] if match else None
        rows.append(row)
    _emit(threshold_csv(rows, diagnostic=args.diagnostic), args.out)
    return EXIT_OK


def cmd_plan(args):
    if args.length_mm is not None:
        if args.width_mm is not None or args.height_mm is not None:
            raise InputError("give either --length-mm or --width-mm/--height-mm")
        plan = plan_line(args.length_mm * MM, args.lcsgdt_mm * MM)
    elif args.width_mm is not None and args.height_mm is not None:
        plan = plan_grid(args.width_mm * MM, args.height_mm * MM, args.lcsgdt_mm * MM)
    else:
        raise InputError("need --length-mm, or both --width-mm and --height-mm")
    _emit(plan_csv(plan), args.out)
    return EXIT_OK


def cmd_ingest(args):
    pitch = args.pitch_mm * MM
    before = load_frame(args.before, pitch)
    after = load_frame(args.after, pitch)
    field = delta_field(before, after)
    center = find_center(field)
    print(f"center_px={center[0]:.4f},{center[1]:.4f}", file=sys.stderr)
    obs = extract_profiles(field, center, args.h_mm * MM)
    _emit(observations_csv(obs), args.out)
    return EXIT_OK


def cmd_synth(args):
    src = _coefficients(args.coeffs)
    fluid, env = _conditions(args, src)
    center = None
    if args.center_x is not None or args.center_y is not None:
        c = (args.size - 1) / 2.0
        center = (args.center_x if args.center_x is not None else c,
                  args.center_y if args.center_y is not None else c)
    before, after = synthesize_frames(src.coefficients, fluid, env, args.h_mm * MM,
                                      args.pitch_mm * MM, args.size, args.sigma,
                                      args.seed, center)
    save_frame(before, f"{args.out}_before.csv")
    save_frame(after, f"{args.out}_after.csv")
    return EXIT_OK


def cmd_diagnose(args):
    src = _coefficients(args.coeffs)
    fluid, env = _conditions(args, src)
    rep = diagnose(src.coefficients, fluid, env, args.nu_star, args.r_max_mm * MM)
    c = rep.continuity
    out = ["[continuity]\n",
           f"h_switch_mm={num(c.h_switch / MM)}\n",
           f"nu_center_below={num(c.below)}\n",
           f"nu_center_at={num(c.at)}\n",
           f"gap={num(c.gap)}\n",
           f"[table1] lcsgdt_mm={num(MEASURED_MEAN_LCSGDT / MM)}\n",
           threshold_csv(rep.threshold_rows, diagnostic=True),
           "[tails]\n",
           "h_mm,r_lo_mm,r_max_mm\n"]
    for t in rep.tails:
        lo = "" if t.empty else num(t.r_lo / MM)
        out.append(f"{num(t.H / MM)},{lo},{num(t.r_max / MM)}\n")
    out.append("[center_dt]\n")
    out.append("h_mm,predicted_dt_c,measured_dt_c\n")
    for row in rep.center_rows:
        out.append(f"{num(row['h'] / MM)},{num(row['predicted_dt'])},{num(row['measured_dt'])}\n")
    _emit("".join(out), args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="coldjet", description=__doc__, epilog=FORMATS,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        sp = sub.add_parser(name, help=help, description=help, epilog=FORMATS,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        _add_conditions(sp)
        return sp

    sp = command("props", cmd_props, "Reynolds number and correlation validity ranges")

    sp = command("predict", cmd_predict, "evaluate Nu and delta_t on an (H, r) grid")
    sp.add_argument("--coeffs", required=True, help="coefficient file or preset name")
    sp.add_argument("--h-mm", type=_floats, required=True, help="comma-separated H values [mm]")
    sp.add_argument("--r-mm", type=_floats, required=True, help="comma-separated r values [mm]")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = command("fit", cmd_fit, "fit coefficients to observation CSVs")
    sp.add_argument("--obs", nargs="+", required=True, help="observation CSV file(s)")
    sp.add_argument("--init", default="conventional",
                    help="initial coefficients: preset name or file (default conventional)")
    sp.add_argument("--max-iter", type=int, default=200, help="LM iterations per n (default 200)")
    sp.add_argument("--tol", type=float, default=1e-10,
                    help="relative objective decrease for convergence (default 1e-10)")
    sp.add_argument("--damping", type=float, default=1e-3, help="initial LM damping (default 1e-3)")
    sp.add_argument("--fd-step", type=float, default=1e-6,
                    help="relative finite-difference step (default 1e-6)")
    sp.add_argument("--n-grid", type=_floats, default=list(DEFAULT_N_GRID),
                    help="comma-separated candidate n values (default 2,2.5,...,12)")
    sp.add_argument("--out", required=True, help="fitted coefficient file to write")

    sp = command("threshold", cmd_threshold, "solve Nu(r, H) = nu_star for r and the LCSGDT")
    sp.add_argument("--coeffs", required=True, help="coefficient file or preset name")
    sp.add_argument("--h-mm", type=_floats, default=[10, 20, 30, 40, 50],
                    help="comma-separated H values [mm] (default 10,20,30,40,50)")
    sp.add_argument("--nu-star", type=float, default=DEFAULT_NU_STAR,
                    help="critical Nusselt number (default 0.92)")
    sp.add_argument("--r-max-mm", type=float, default=DEFAULT_R_MAX / MM,
                    help="search ceiling [mm] (default 500)")
    sp.add_argument("--diagnostic", action="store_true",
                    help="add Nu at a measured LCSGDT and the published Table I value")
    sp.add_argument("--lcsgdt-mm", type=float, default=MEASURED_MEAN_LCSGDT / MM,
                    help="measured LCSGDT for --diagnostic [mm] (default 131.4)")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = command("plan", cmd_plan, "place nozzles with spacing within the LCSGDT")
    sp.add_argument("--length-mm", type=float, help="segment length [mm]")
    sp.add_argument("--width-mm", type=float, help="rectangle width [mm]")
    sp.add_argument("--height-mm", type=float, help="rectangle height [mm]")
    sp.add_argument("--lcsgdt-mm", type=float, required=True, help="threshold distance [mm]")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = command("ingest", cmd_ingest, "turn a before/after frame pair into observations")
    sp.add_argument("--before", required=True, help="frame CSV at t = 0")
    sp.add_argument("--after", required=True, help="frame CSV after the stimulus")
    sp.add_argument("--pitch-mm", type=float, required=True, help="pixel pitch [mm/pixel]")
    sp.add_argument("--h-mm", type=float, required=True, help="presentation distance [mm]")
    sp.add_argument("--out", help="observation CSV (default stdout)")

    sp = command("synth", cmd_synth, "synthesize a before/after frame pair from the model")
    sp.add_argument("--coeffs", required=True, help="coefficient file or preset name")
    sp.add_argument("--h-mm", type=float, required=True, help="presentation distance [mm]")
    sp.add_argument("--pitch-mm", type=float, default=1.0, help="pixel pitch [mm] (default 1)")
    sp.add_argument("--size", type=int, default=101, help="frame side [pixels] (default 101)")
    sp.add_argument("--sigma", type=float, default=DEFAULT_NOISE_SIGMA,
                    help="per-pixel noise sigma [degC] (default 0.025)")
    sp.add_argument("--seed", type=int, default=0, help="noise seed (default 0)")
    sp.add_argument("--center-x", type=float, help="jet centre column [pixels]")
    sp.add_argument("--center-y", type=float, help="jet centre row [pixels]")
    sp.add_argument("--out", required=True, help="output prefix; writes PREFIX_before.csv, PREFIX_after.csv")

    sp = command("diagnose", cmd_diagnose, "compare a coefficient set with published results")
    sp.add_argument("--coeffs", required=True, help="coefficient file or preset name")
    sp.add_argument("--nu-star", type=float, default=DEFAULT_NU_STAR,
                    help="critical Nusselt number (default 0.92)")
    sp.add_argument("--r-max-mm", type=float, default=DEFAULT_R_MAX / MM,
                    help="search ceiling [mm] (default 500)")
    sp.add_argument("--out", help="report file (default stdout)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
