"""Turning points, classically allowed radial intervals, and well structure.

Turning points are the positive zeros of ``H - V_eff``.  Clearing denominators
gives the polynomial ``G = 16 g^k (H - V_eff)`` (``k = 2`` for V1/V2, ``k = 4``
for V3), whose positive roots are the same points.  V1 is a quartic in g, V2 a
quartic in ``X = g^2``; V3 is a sextic and goes through the bracketing solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import PhysicsDomainError
from .polyroots import (RealRoots, cauchy_bound, horner, solve_quartic, solve_real_roots,
                        term_scale, trim)
from .potentials import MotionConstants, PotentialParams, classify_boundedness, eval_effective

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
MARGINAL = "marginal"
EMPTY = "empty"
CLASSIFICATIONS = (BOUNDED, UNBOUNDED, MARGINAL, EMPTY)


@dataclass(frozen=True)
class GPoly:
    coeffs: tuple[float, ...]
    prefactor_power: int
    kind: str

    def __call__(self, g: float) -> float:
        return horner(self.coeffs, g)


@dataclass(frozen=True)
class RadialDomain:
    turning_points: tuple[float, ...]
    double: tuple[bool, ...]
    intervals: tuple[tuple[float, float], ...]
    classification: str

    def finite_intervals(self):
        return tuple(iv for iv in self.intervals if math.isfinite(iv[1]))


@dataclass(frozen=True)
class CriticalPoint:
    gamma: float
    value: float
    type: str  # "min" or "max"


@dataclass(frozen=True)
class WellStructure:
    points: tuple[CriticalPoint, ...]

    @property
    def well_count(self) -> int:
        return sum(1 for cp in self.points if cp.type == "min")

    def minima(self):
        return [cp for cp in self.points if cp.type == "min"]

    def maxima(self):
        return [cp for cp in self.points if cp.type == "max"]


def g_polynomial(p: PotentialParams, c: MotionConstants) -> GPoly:
    H, pt = c.H, c.p_theta
    pt2 = pt * pt
    if p.kind == "V1":
        co = (-16 * p.B - 16 * pt2, -16.0, 16 * H + 8 * pt, -16 * p.Gamma, -1 - 16 * p.Delta)
        return GPoly(tuple(float(v) for v in co), 2, "V1")
    if p.kind == "V2":
        co = (-16 * p.A - 16 * pt2, 0.0, 16 * H + 8 * pt, 0.0, -1 - 16 * p.B,
              0.0, -16 * p.Gamma, 0.0, -16 * p.Delta)
        return GPoly(tuple(float(v) for v in co), 2, "V2")
    co = (-16 * p.A, -16 * p.B, -16 * p.Gamma - 16 * pt2, -16 * p.Delta,
          8 * pt + 16 * H, 0.0, 16 * p.E - 1)
    return GPoly(tuple(float(v) for v in co), 4, "V3")


def default_gamma_cap(c: MotionConstants) -> float:
    return 10.0 * (1.0 + 16.0 * abs(c.H) + 8.0 * abs(c.p_theta) + 2.0)


def _positive_roots(G: GPoly, gamma_cap):
    if G.kind == "V1":
        return solve_quartic(G.coeffs).positive()
    if G.kind == "V2":
        xr = solve_quartic(G.coeffs[0::2])
        vals, dbl = [], []
        for x, d in zip(xr.values, xr.double):
            if x > 0.0:
                vals.append(math.sqrt(x))
                dbl.append(d)
        return RealRoots(tuple(vals), tuple(dbl))
    co = trim(G.coeffs)
    cap = cauchy_bound(co) if gamma_cap is None else gamma_cap
    return solve_real_roots(co, 0.0, cap).positive()


def _sign_beyond(G: GPoly, last, gamma_cap):
    co = trim(G.coeffs)
    if G.kind == "V3" and gamma_cap is not None and gamma_cap > last:
        return horner(co, gamma_cap) > 0.0
    return co[-1] > 0.0


def turning_points(p: PotentialParams, c: MotionConstants, gamma_cap: float | None = None,
                   gamma_start: float | None = None, tol_marginal: float = 1e-12) -> RadialDomain:
    """Turning points and the allowed intervals between them.

    ``gamma_cap`` bounds the V3 search; by default the Cauchy bound of G is
    used, which encloses every root.  When ``gamma_start`` is given the
    classification describes only the interval containing it.
    """
    G = g_polynomial(p, c)
    roots = _positive_roots(G, gamma_cap)
    pts = list(roots.values)
    edges = [0.0] + pts + [math.inf]
    signs = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(hi):
            signs.append(_sign_beyond(G, lo, gamma_cap))
        else:
            signs.append(G(0.5 * (lo + hi)) > 0.0)

    intervals = []
    for i, ok in enumerate(signs):
        if ok:
            intervals.append((edges[i], edges[i + 1]))
    # an isolated double root with forbidden sides is a circular orbit
    for r, d in zip(roots.values, roots.double):
        if d and not any(lo <= r <= hi for lo, hi in intervals):
            intervals.append((r, r))
    intervals.sort()

    domain = RadialDomain(tuple(pts), tuple(roots.double), tuple(intervals), EMPTY)
    chosen = intervals
    if gamma_start is not None and intervals:
        chosen = [_locate(domain, gamma_start, G)]
    return RadialDomain(domain.turning_points, domain.double, domain.intervals,
                        _classify(p, c, chosen, tol_marginal))


def _classify(p, c, intervals, tol_marginal):
    if not intervals:
        return EMPTY
    if any(math.isinf(hi) for _, hi in intervals):
        report = classify_boundedness(p, c, tol_marginal)
        return MARGINAL if report.marginal and not report.upper_ok else UNBOUNDED
    if any(lo == 0.0 for lo, _ in intervals):
        return UNBOUNDED  # falls into the origin
    return BOUNDED


def _locate(domain: RadialDomain, gamma_start, G: GPoly, tol=1e-12):
    if not gamma_start > 0.0:
        raise PhysicsDomainError(f"start radius must be positive, got {gamma_start!r}")
    g_val = G(gamma_start)
    if g_val < -tol * max(1.0, term_scale(G.coeffs, gamma_start)):
        raise PhysicsDomainError(f"start radius {gamma_start!r} lies in a classically forbidden region")
    best = None
    for lo, hi in domain.intervals:
        slack = 1e-9 * (1.0 + abs(gamma_start))
        if lo - slack <= gamma_start <= hi + slack:
            dist = max(lo - gamma_start, gamma_start - hi, 0.0)
            if best is None or dist < best[0]:
                best = (dist, (lo, hi))
    if best is None:
        raise PhysicsDomainError(f"start radius {gamma_start!r} is not in any allowed interval")
    return best[1]


def allowed_interval_for(p: PotentialParams, c: MotionConstants, gamma_start: float,
                         gamma_cap: float | None = None) -> tuple[float, float]:
    domain = turning_points(p, c, gamma_cap)
    return _locate(domain, gamma_start, g_polynomial(p, c))


def _force_array(p, pt, g):
    return 2.0 * pt * pt / g ** 3 - 0.125 * g - p.slope(g)


def well_structure(p: PotentialParams, c: MotionConstants, gamma_cap: float | None = None,
                   gamma_floor: float = 1e-6, n_grid: int = 8000) -> WellStructure:
    """Critical points of V_eff on (gamma_floor, gamma_cap].

    Sign changes of the radial force on a log-spaced grid are refined by
    Brent's method.  Outward + to - is a minimum of V_eff.
    """
    cap = default_gamma_cap(c) if gamma_cap is None else gamma_cap
    grid = np.geomspace(gamma_floor, cap, n_grid)
    with np.errstate(all="ignore"):
        f = _force_array(p, c.p_theta, grid)
    pts = []
    sgn = np.sign(f)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        a, b = grid[i], grid[i + 1]
        g0 = brentq(lambda g: _force_array(p, c.p_theta, g), a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
        kind = "min" if sgn[i] > 0 else "max"
        pts.append(CriticalPoint(g0, eval_effective(p, c, g0), kind))
    for i in np.nonzero(sgn == 0)[0]:
        if 0 < i < n_grid - 1 and sgn[i - 1] * sgn[i + 1] < 0:
            g0 = float(grid[i])
            pts.append(CriticalPoint(g0, eval_effective(p, c, g0), "min" if sgn[i - 1] > 0 else "max"))
    pts.sort(key=lambda cp: cp.gamma)
    return WellStructure(tuple(pts))
