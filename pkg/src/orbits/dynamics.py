"""Center-of-mass circles and integration of the relative motion.

The relative coordinate has the dimensionless Lagrangian

    L = (x'^2 + y'^2)/4 + (x y' - y x')/4 - V(r)

(time in 1/omega_c), so the equations of motion in Cartesian form are

    x'' =  y' - 2 dV/dx
    y'' = -x' - 2 dV/dy

which are regular everywhere except the origin.  The energy
``H = r'^2/4 + (p/r - r/4)^2 + V`` and the canonical angular momentum
``p = (x y' - y x')/2 + r^2/4`` are monitored along the way, not enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BPoly
from scipy.optimize import brentq

from . import _dop853 as _T
from .errors import NumericalError, PhysicsDomainError
from .potentials import MotionConstants, PotentialParams, eval_effective
from .turning import allowed_interval_for, turning_points

# -- center of mass -------------------------------------------------------


@dataclass(frozen=True)
class CMState:
    H_cm: float
    p_theta_cm: float
    theta0: float = 0.0

    def __post_init__(self):
        if not self.H_cm >= 0.0:
            raise PhysicsDomainError(f"H_cm must be non-negative, got {self.H_cm!r}")
        if not self.H_cm + self.p_theta_cm >= 0.0:
            raise PhysicsDomainError("H_cm + p_theta_cm must be non-negative")


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float
    angular_rate: float = -1.0


def cm_orbit(s: CMState) -> Circle:
    d = math.sqrt(s.H_cm + s.p_theta_cm)
    return Circle(center=(d * math.cos(s.theta0), d * math.sin(s.theta0)),
                  radius=math.sqrt(s.H_cm), angular_rate=-1.0)


def cm_points(circle: Circle, n: int, phase: float = 0.0):
    """n points of the orbit, one full revolution, traversed clockwise."""
    t = 2.0 * math.pi * np.arange(n) / max(n, 1)
    ang = phase + circle.angular_rate * t
    return (circle.center[0] + circle.radius * np.cos(ang),
            circle.center[1] + circle.radius * np.sin(ang))


def cm_residual(s: CMState, x, y):
    """Residual of xi^2 - 2 xi sqrt(H+p) cos(theta - theta0) + p, relative to
    the magnitude of its terms (or absolute when those are below one)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = math.sqrt(s.H_cm + s.p_theta_cm)
    proj = x * math.cos(s.theta0) + y * math.sin(s.theta0)
    r2 = x * x + y * y
    res = r2 - 2.0 * d * proj + s.p_theta_cm
    scale = np.maximum(1.0, r2 + 2.0 * d * np.sqrt(r2) + abs(s.p_theta_cm))
    return np.abs(res) / scale


# -- relative motion ------------------------------------------------------


@dataclass(frozen=True)
class RelState:
    x: float
    y: float
    vx: float
    vy: float

    def __post_init__(self):
        if self.x == 0.0 and self.y == 0.0:
            raise PhysicsDomainError("relative state cannot sit at the origin")

    @property
    def gamma(self) -> float:
        return math.hypot(self.x, self.y)


def angular_momentum(x, y, vx, vy):
    return 0.5 * (x * vy - y * vx) + 0.25 * (x * x + y * y)


def energy(p: PotentialParams, x, y, vx, vy):
    """Radial kinetic term plus effective potential, evaluated from Cartesian
    variables; works elementwise on arrays."""
    g = np.hypot(x, y) if isinstance(x, np.ndarray) else math.hypot(x, y)
    pt = angular_momentum(x, y, vx, vy)
    gdot = (x * vx + y * vy) / g
    t = pt / g - 0.25 * g
    return 0.25 * gdot * gdot + t * t + p.value(g)


def initial_state_at_perihelion(p: PotentialParams, c: MotionConstants,
                                interval_index: int | None = None,
                                gamma_cap: float | None = None) -> RelState:
    """Start at the inner turning point of an allowed interval with zero
    radial velocity; the tangential velocity follows from p_theta.

    By default the innermost interval with a positive lower end is used.
    """
    domain = turning_points(p, c, gamma_cap)
    startable = [iv for iv in domain.intervals if iv[0] > 0.0]
    if not startable:
        raise PhysicsDomainError("no allowed interval with a positive inner turning point")
    if interval_index is None:
        lo, _ = startable[0]
    else:
        if not 0 <= interval_index < len(domain.intervals):
            raise PhysicsDomainError(f"interval index {interval_index} out of range "
                                     f"({len(domain.intervals)} intervals)")
        lo, _ = domain.intervals[interval_index]
        if lo <= 0.0:
            raise PhysicsDomainError("selected interval touches the origin")
    theta_dot = 2.0 * c.p_theta / (lo * lo) - 0.5
    return RelState(lo, 0.0, 0.0, lo * theta_dot)


def initial_state_at_radius(p: PotentialParams, c: MotionConstants, gamma0: float,
                            outward: bool = True) -> RelState:
    """Start on the positive x axis at radius gamma0, moving radially outward
    (or inward) with the speed fixed by H."""
    allowed_interval_for(p, c, gamma0)  # raises for a forbidden start
    kin = c.H - eval_effective(p, c, gamma0)
    gdot = 2.0 * math.sqrt(max(kin, 0.0))
    theta_dot = 2.0 * c.p_theta / (gamma0 * gamma0) - 0.5
    return RelState(gamma0, 0.0, gdot if outward else -gdot, gamma0 * theta_dot)


@dataclass(frozen=True)
class StepControl:
    tol: float = 1e-10
    sample_dt: float | None = 0.01
    h0: float | None = None
    max_steps: int = 5_000_000
    safety: float = 0.9
    beta: float = 0.04
    gamma_stop: float | None = None
    gamma_floor: float = 1e-9

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.sample_dt is not None and not self.sample_dt > 0:
            raise ValueError("sample_dt must be positive")


@dataclass(frozen=True)
class Trajectory:
    params: PotentialParams
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    theta: np.ndarray           # unwrapped polar angle
    H0: float
    p_theta0: float
    H_drift: np.ndarray
    p_theta_drift: np.ndarray
    n_steps: int
    n_rejected: int
    n_rhs: int
    escaped: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def gamma(self) -> np.ndarray:
        return np.hypot(self.x, self.y)


def _make_rhs(p: PotentialParams):
    slope = p.slope

    def rhs(s):
        x, y, vx, vy = s[0], s[1], s[2], s[3]
        g2 = x * x + y * y
        g = math.sqrt(g2)
        k = 2.0 * slope(g) / g
        return (vx, vy, vy - k * x, -vx - k * y, (x * vy - y * vx) / g2)

    return rhs


def _combine(y, h, ks, row):
    s0 = s1 = s2 = s3 = s4 = 0.0
    for j, a in row:
        k = ks[j]
        s0 += a * k[0]
        s1 += a * k[1]
        s2 += a * k[2]
        s3 += a * k[3]
        s4 += a * k[4]
    return [y[0] + h * s0, y[1] + h * s1, y[2] + h * s2, y[3] + h * s3, y[4] + h * s4]


def integrate_relative(p: PotentialParams, state0: RelState, t_end: float,
                       control: StepControl = StepControl()) -> Trajectory:
    """Adaptive Dormand-Prince 8(5,3) with a PI step-size controller.

    Samples are taken every ``control.sample_dt`` (steps are shortened to
    land on sample times) or after every accepted step when ``sample_dt`` is
    None.  Integration stops early once the radius exceeds
    ``control.gamma_stop``.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    rhs = _make_rhs(p)
    tol = control.tol
    theta0 = math.atan2(state0.y, state0.x)
    y = [state0.x, state0.y, state0.vx, state0.vy, theta0]
    t = 0.0

    def err_norm(y_old, y_new, e5, e3, h):
        a5 = a3 = 0.0
        for i in range(5):
            sc = tol + tol * max(abs(y_old[i]), abs(y_new[i]))
            a5 += (e5[i] / sc) ** 2
            a3 += (e3[i] / sc) ** 2
        den = a5 + 0.01 * a3
        return 0.0 if den == 0.0 else abs(h) * a5 / math.sqrt(5.0 * den)

    def eval_rhs(s, when):
        try:
            return rhs(s)
        except ZeroDivisionError:
            raise NumericalError("relative coordinate reached the origin", time=when) from None

    k1 = eval_rhs(y, t)
    n_rhs = 1
    h = control.h0
    if h is None:
        d0 = math.sqrt(sum((y[i] / (tol + tol * abs(y[i]))) ** 2 for i in range(5)) / 5)
        d1 = math.sqrt(sum((k1[i] / (tol + tol * abs(y[i]))) ** 2 for i in range(5)) / 5)
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, t_end)
    sample_dt = control.sample_dt
    k_out = 1
    ts, rows = [0.0], [tuple(y)]
    errold = 1e-4
    expo = 0.125 - 0.2 * control.beta
    n_steps = n_rej = 0
    escaped = False
    h_min_rel = 1e-13

    while t < t_end:
        if n_steps + n_rej >= control.max_steps:
            raise NumericalError("step budget exhausted", time=t)
        target = t_end if sample_dt is None else min(k_out * sample_dt, t_end)
        landing = t + h >= target - 1e-14 * max(1.0, target)
        h_try = target - t if landing else h
        ks = [k1]
        for st in range(1, _T.N_STAGES):
            ys = _combine(y, h_try, ks, _T.A[st])
            ks.append(eval_rhs(ys, t + _T.C[st] * h_try))
        n_rhs += _T.N_STAGES - 1
        y_new = _combine(y, h_try, ks, _T.B)
        e5 = _combine((0.0,) * 5, 1.0, ks, _T.E5)
        e3 = _combine((0.0,) * 5, 1.0, ks, _T.E3)
        err = err_norm(y, y_new, e5, e3, h_try)
        if not math.isfinite(err):
            raise NumericalError("non-finite state during integration", time=t)
        fac11 = max(err, 1e-300) ** expo
        if err > 1.0:
            h = h_try / min(3.0, fac11 / control.safety)
            n_rej += 1
            if h < h_min_rel * max(1.0, abs(t)):
                raise NumericalError("step size collapsed", time=t)
            continue
        fac = min(3.0, max(1.0 / 6.0, fac11 / errold ** control.beta / control.safety))
        h_next = h_try / fac
        errold = max(err, 1e-4)
        t = target if landing else t + h_try
        y = y_new
        k1 = eval_rhs(y, t)  # FSAL stage of the next step
        n_rhs += 1
        n_steps += 1
        # a landing step may be artificially short; it must not shrink h
        h = max(h, h_next) if landing else h_next
        g = math.hypot(y[0], y[1])
        if g < control.gamma_floor:
            raise NumericalError("relative coordinate collapsed toward the origin", time=t)
        if sample_dt is None or landing:
            ts.append(t)
            rows.append(tuple(y))
            if landing and sample_dt is not None and target < t_end:
                k_out += 1
        if control.gamma_stop is not None and g > control.gamma_stop:
            if ts[-1] != t:
                ts.append(t)
                rows.append(tuple(y))
            escaped = True
            break

    arr = np.array(rows)
    tt = np.array(ts)
    x, yy, vx, vy, th = arr.T
    H = energy(p, x, yy, vx, vy)
    pt = angular_momentum(x, yy, vx, vy)
    return Trajectory(params=p, t=tt, x=x, y=yy, vx=vx, vy=vy, theta=th,
                      H0=float(H[0]), p_theta0=float(pt[0]),
                      H_drift=np.abs(H - H[0]), p_theta_drift=np.abs(pt - pt[0]),
                      n_steps=n_steps, n_rejected=n_rej, n_rhs=n_rhs, escaped=escaped,
                      stats={"tol": tol})


# -- trajectory analysis ------------------------------------------------------


def _accelerations(p, x, y, vx, vy):
    g = np.hypot(x, y)
    k = 2.0 * p.slope(g) / g
    return vy - k * x, -vx - k * y


REFINE_ANGLE = 0.05  # max angle advance per sample when pinning down a minimum


def _hermite_minimum(p, t, x, y, vx, vy, i):
    """Radial minimum inside [t[i], t[i+1]] on the quintic Hermite
    interpolant; returns (time, angle advance from sample i)."""
    ax, ay = _accelerations(p, x[i:i + 2], y[i:i + 2], vx[i:i + 2], vy[i:i + 2])
    t0, t1 = t[i], t[i + 1]
    px = BPoly.from_derivatives([t0, t1], [[x[i], vx[i], ax[0]], [x[i + 1], vx[i + 1], ax[1]]])
    py = BPoly.from_derivatives([t0, t1], [[y[i], vy[i], ay[0]], [y[i + 1], vy[i + 1], ay[1]]])
    dpx, dpy = px.derivative(), py.derivative()

    def rd(s):
        return float(px(s) * dpx(s) + py(s) * dpy(s))

    if rd(t1) == 0.0:
        ts = t1
    elif rd(t0) * rd(t1) > 0.0:
        # the interpolant lost the sign change; keep the sampled end
        ts = t1 if abs(rd(t1)) < abs(rd(t0)) else t0
    else:
        ts = brentq(rd, t0, t1, xtol=1e-14, rtol=1e-15)
    xs, ys = float(px(ts)), float(py(ts))
    return ts, math.atan2(x[i] * ys - y[i] * xs, x[i] * xs + y[i] * ys)


def radial_minima(traj: Trajectory):
    """(time, unwrapped angle) at each interior passage through a radial minimum.

    Each passage is located on the quintic Hermite interpolant (positions,
    velocities and accelerations) through samples that are at most
    REFINE_ANGLE apart in angle.  Coarser brackets are re-integrated on finer
    grids first, so the result does not depend on the sampling interval.
    """
    rdot = traj.x * traj.vx + traj.y * traj.vy
    tol = traj.stats.get("tol", 1e-10)
    out = []
    for i in np.nonzero((rdot[:-1] < 0.0) & (rdot[1:] >= 0.0))[0]:
        # zoom in: re-integrate the bracket on a finer grid and keep the
        # sub-bracket holding the sign change, until the angle is resolved
        t, x, y, vx, vy, th = (traj.t, traj.x, traj.y, traj.vx, traj.vy, traj.theta)
        j, t_off, th_off = int(i), 0.0, 0.0
        for _ in range(30):
            n = math.ceil(abs(th[j + 1] - th[j]) / REFINE_ANGLE)
            if n <= 1:
                break
            n = min(n, 64)
            span = float(t[j + 1] - t[j])
            sub = integrate_relative(traj.params, RelState(x[j], y[j], vx[j], vy[j]), span,
                                     StepControl(tol=tol, sample_dt=span / n))
            srd = sub.x * sub.vx + sub.y * sub.vy
            hits = np.nonzero((srd[:-1] < 0.0) & (srd[1:] >= 0.0))[0]
            t_off += float(t[j])
            th_off += float(th[j] - sub.theta[0])
            t, x, y, vx, vy, th = (sub.t, sub.x, sub.y, sub.vx, sub.vy, sub.theta)
            j = int(hits[0]) if len(hits) else len(t) - 2
        ts, dth = _hermite_minimum(traj.params, t, x, y, vx, vy, j)
        out.append((t_off + ts, th_off + float(th[j]) + dth))
    return out


def measure_apsidal_angle(traj: Trajectory) -> float:
    """Half the mean angular advance per radial period, measured between
    successive passages through the inner turning point."""
    g = traj.gamma
    if g.max() - g.min() <= 1e-8 * (1.0 + g.max()):
        raise PhysicsDomainError("no radial oscillation (circular orbit)")
    mins = radial_minima(traj)
    if len(mins) < 2:
        raise PhysicsDomainError(f"need two radial minima, found {len(mins)}")
    (_, th_first), (_, th_last) = mins[0], mins[-1]
    return (th_last - th_first) / (2.0 * (len(mins) - 1))


def loop_radii(traj: Trajectory, phase: float = 0.5 * math.pi):
    """Radius at each crossing of the unwrapped angle through phase + 2 pi k."""
    th = traj.theta
    g = traj.gamma
    k = np.floor((th - phase) / (2.0 * math.pi))
    out = []
    for i in np.nonzero(k[1:] != k[:-1])[0]:
        target = phase + 2.0 * math.pi * max(k[i], k[i + 1])
        frac = (target - th[i]) / (th[i + 1] - th[i])
        out.append(g[i] + frac * (g[i + 1] - g[i]))
    return np.array(out)


def loop_spacing_cv(traj: Trajectory, last: int = 5, phase: float = 0.5 * math.pi) -> float:
    """Coefficient of variation of the last ``last`` loop-to-loop radius gaps."""
    gaps = np.diff(loop_radii(traj, phase))
    if len(gaps) < last:
        raise PhysicsDomainError(f"only {len(gaps)} complete loops, need {last}")
    tail = gaps[-last:]
    return float(np.std(tail) / abs(np.mean(tail)))
