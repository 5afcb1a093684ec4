"""orbits: command-line front end.

    orbits cm|turning|simulate|period|sweep --config run.json [--out PATH]
           [--svg PATH] [--allow-escape] [--interval INDEX]

Data (CSV or JSON) goes to --out, or to stdout when --out is absent.  A short
JSON summary is printed to stdout when the data went to a file.  Exit codes:
0 ok, 2 configuration, 3 physics domain, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace

from . import __version__
from .config import RunConfig, load_config
from .dynamics import (CMState, StepControl, cm_orbit, cm_points, cm_residual,
                       initial_state_at_perihelion, initial_state_at_radius, integrate_relative)
from .emit import csv_text, json_text, svg_polyline, write_text
from .errors import ConfigError, OrbitsError, PhysicsDomainError
from .potentials import PARAM_NAMES, MotionConstants, classify_boundedness, make_params
from .quadrature import apsidal_angle, radial_period
from .turning import BOUNDED, turning_points, well_structure
from .units import derive_scales, redimensionalize

COMMANDS = ("cm", "turning", "simulate", "period", "sweep")

TRAJECTORY_HEADER = ("t", "x", "y", "gamma", "theta_unwrapped", "H_drift", "ptheta_drift")
SWEEP_RESULT_COLUMNS = ("classification", "n_turning", "turning_points", "n_intervals",
                        "delta_theta", "alpha", "p", "q", "error")


class PartialOutput(Exception):
    """Carries whatever was produced before a domain error aborted a run."""

    def __init__(self, error: OrbitsError, data: str, svg: str | None, summary: dict):
        super().__init__(str(error))
        self.error = error
        self.data = data
        self.svg = svg
        self.summary = summary


# -- commands -------------------------------------------------------------


def cmd_cm(cfg: RunConfig):
    if cfg.cm is None:
        raise ConfigError("the cm command needs a 'cm' section")
    s = CMState(cfg.cm.H_cm, cfg.cm.p_theta_cm, cfg.cm.theta0)
    circle = cm_orbit(s)
    n = 1 if circle.radius == 0.0 else cfg.cm.n_points
    xs, ys = cm_points(circle, n, phase=cfg.cm.theta0)
    res = cm_residual(s, xs, ys)
    rows = [(float(x), float(y), float(r)) for x, y, r in zip(xs, ys, res)]
    summary = {"center": list(circle.center), "radius": circle.radius,
               "angular_rate": circle.angular_rate, "n_points": n,
               "max_residual": float(res.max())}
    return csv_text(("x", "y", "residual"), rows), summary, (xs, ys)


def _domain_json(domain):
    return {"turning_points": list(domain.turning_points),
            "double": list(domain.double),
            "intervals": [[lo, hi] for lo, hi in domain.intervals],
            "classification": domain.classification}


def cmd_turning(cfg: RunConfig):
    p, c = cfg.require_potential()
    domain = turning_points(p, c)
    report = classify_boundedness(p, c)
    out = {"potential": {"kind": p.kind, **{k: getattr(p, k) for k in PARAM_NAMES[p.kind]}},
           "motion": asdict(c), **_domain_json(domain),
           "conditions": asdict(report),
           "critical_points": [asdict(cp) for cp in well_structure(p, c).points]}
    if cfg.physical:
        s = derive_scales(cfg.system)
        out["scales"] = asdict(s)
        out["turning_points_physical"] = [redimensionalize(g, "length", s)
                                          for g in domain.turning_points]
    return out


def cmd_simulate(cfg: RunConfig, allow_escape=False, interval=None):
    p, c = cfg.require_potential()
    opt = cfg.simulate
    if interval is not None:
        opt = replace(opt, interval=interval)
    if opt.gamma0 is not None:
        state = initial_state_at_radius(p, c, opt.gamma0)
    else:
        state = initial_state_at_perihelion(p, c, opt.interval)
    g0 = state.gamma
    cls = turning_points(p, c, gamma_start=g0).classification
    stop = opt.escape_radius
    if cls != BOUNDED and not allow_escape and stop is None:
        stop = 10.0 * g0
    traj = integrate_relative(p, state, opt.t_end,
                              StepControl(tol=opt.tol, sample_dt=opt.sample_dt, gamma_stop=stop))
    g = traj.gamma
    rows = zip(traj.t.tolist(), traj.x.tolist(), traj.y.tolist(), g.tolist(),
               traj.theta.tolist(), traj.H_drift.tolist(), traj.p_theta_drift.tolist())
    data = csv_text(TRAJECTORY_HEADER, rows)
    svg = svg_polyline(traj.x, traj.y)
    summary = {"classification": cls, "n_samples": int(len(traj.t)), "t_last": float(traj.t[-1]),
               "gamma_min": float(g.min()), "gamma_max": float(g.max()),
               "H0": traj.H0, "p_theta0": traj.p_theta0,
               "max_H_drift": float(traj.H_drift.max()),
               "max_ptheta_drift": float(traj.p_theta_drift.max()),
               "escaped": traj.escaped, "steps": traj.n_steps, "rejected": traj.n_rejected}
    if traj.escaped and not allow_escape:
        err = PhysicsDomainError(f"orbit escaped past radius {stop!r} at t={float(traj.t[-1])!r} "
                                 "(rerun with --allow-escape)")
        raise PartialOutput(err, data, svg, summary)
    return data, svg, summary


def _pick_interval(domain, index):
    if index is not None:
        if not 0 <= index < len(domain.intervals):
            raise ConfigError(f"interval index {index} out of range ({len(domain.intervals)} intervals)")
        return domain.intervals[index]
    if len(domain.intervals) != 1:
        raise ConfigError(f"{len(domain.intervals)} allowed intervals; choose one with --interval")
    return domain.intervals[0]


def cmd_period(cfg: RunConfig, interval=None):
    p, c = cfg.require_potential()
    opt = cfg.period
    idx = opt.interval if interval is None else interval
    domain = turning_points(p, c)
    iv = _pick_interval(domain, idx)
    r = apsidal_angle(p, c, iv, tol=opt.tol, Q_max=opt.Q_max, tol_rat=opt.tol_rat)
    T, T_err = radial_period(p, c, iv, tol=opt.tol)
    match = None
    if r.rational_match is not None:
        match = {"p": r.rational_match[0], "q": r.rational_match[1], "residual": r.rational_residual}
    return {"interval": list(iv), "delta_theta": r.delta_theta,
            "estimated_error": r.estimated_error, "alpha": r.alpha,
            "rational_match": match, "Q_max": opt.Q_max, "tol_rat": opt.tol_rat,
            "radial_period": T, "radial_period_error": T_err}


def sweep_point(kind, base, H, p_theta, names, point, want_alpha, period):
    """One sweep row (result columns only); pure in its arguments."""
    vals = dict(base)
    motion = {"H": H, "p_theta": p_theta}
    for name, v in zip(names, point):
        (motion if name in motion else vals)[name] = v
    p = make_params(kind, **vals)
    c = MotionConstants(**motion)
    try:
        domain = turning_points(p, c)
    except (OrbitsError, ValueError) as exc:
        return ("error", 0, "", 0, None, None, None, None, str(exc))
    tps = ";".join(repr(v) for v in domain.turning_points)
    head = (domain.classification, len(domain.turning_points), tps, len(domain.intervals))
    if not want_alpha or domain.classification != BOUNDED:
        return head + (None, None, None, None, "")
    iv = next((iv for iv in domain.intervals if iv[0] > 0.0 and iv[1] > iv[0]), None)
    if iv is None:
        return head + (None, None, None, None, "circular orbit")
    try:
        r = apsidal_angle(p, c, iv, tol=period.tol, Q_max=period.Q_max, tol_rat=period.tol_rat)
    except OrbitsError as exc:
        return head + (None, None, None, None, str(exc))
    pq = r.rational_match or (None, None)
    return head + (r.delta_theta, r.alpha, pq[0], pq[1], "")


def _sweep_call(args):
    row = sweep_point(*args)
    # keep the error text free of the field separator
    return row[:-1] + (row[-1].replace(",", ";"),)


def cmd_sweep(cfg: RunConfig):
    p, c = cfg.require_potential()
    if cfg.sweep is None:
        raise ConfigError("the sweep command needs a 'sweep' section")
    axes = cfg.sweep.axes
    names = [a.name for a in axes]
    header = tuple(names) + SWEEP_RESULT_COLUMNS
    if not axes or cfg.sweep.size() == 0:
        return csv_text(header, []), {"rows": 0}
    base = {k: getattr(p, k) for k in PARAM_NAMES[p.kind]}
    grid = list(itertools.product(*(a.points() for a in axes)))
    jobs = [(p.kind, base, c.H, c.p_theta, names, pt, cfg.sweep.alpha, cfg.period) for pt in grid]
    if cfg.sweep.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.sweep.workers) as pool:
            results = list(pool.map(_sweep_call, jobs, chunksize=max(1, len(jobs) // (8 * cfg.sweep.workers))))
    else:
        results = [_sweep_call(j) for j in jobs]
    rows = [tuple(pt) + tuple(res) for pt, res in zip(grid, results)]
    counts = {}
    for res in results:
        counts[res[0]] = counts.get(res[0], 0) + 1
    return csv_text(header, rows), {"rows": len(rows), "classifications": counts}


# -- entry point ------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="orbits", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="data output path (default: stdout)")
    ap.add_argument("--svg", help="SVG orbit plot (cm and simulate)")
    ap.add_argument("--allow-escape", action="store_true",
                    help="let unbounded runs continue instead of aborting at the escape radius")
    ap.add_argument("--interval", type=int, help="index of the allowed interval to use")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _emit(args, data: str, summary: dict | None):
    if args.out:
        write_text(args.out, data)
        if summary is not None:
            sys.stdout.write(json_text(summary))
    else:
        sys.stdout.write(data)


def run(args) -> int:
    cfg = load_config(args.config)
    if args.interval is not None and args.interval < 0:
        raise ConfigError("--interval must be non-negative")
    if args.command == "cm":
        data, summary, (xs, ys) = cmd_cm(cfg)
        if args.svg:
            write_text(args.svg, svg_polyline(xs, ys))
        _emit(args, data, summary)
    elif args.command == "turning":
        _emit(args, json_text(cmd_turning(cfg)), None)
    elif args.command == "simulate":
        try:
            data, svg, summary = cmd_simulate(cfg, args.allow_escape, args.interval)
        except PartialOutput as part:
            if args.svg:
                write_text(args.svg, part.svg)
            _emit(args, part.data, part.summary)
            raise part.error from None
        if args.svg:
            write_text(args.svg, svg)
        _emit(args, data, summary)
    elif args.command == "period":
        _emit(args, json_text(cmd_period(cfg, args.interval)), None)
    else:
        data, summary = cmd_sweep(cfg)
        _emit(args, data, summary)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except OrbitsError as exc:
        sys.stderr.write(f"orbits: {exc.code} error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
