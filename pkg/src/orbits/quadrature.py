"""Apsidal angle and radial period by quadrature, plus commensurability checks.

Between two simple turning points ``a < b`` the polynomial G factors as
``G = (g - a)(b - g) Q(g)`` with ``Q > 0`` on ``[a, b]``.  Substituting
``g = a + (b - a) sin^2 u`` turns ``dg / sqrt((g - a)(b - g))`` into ``2 du``,
so both inverse-square-root endpoint singularities disappear and what is left
is a smooth periodic-like integrand on ``[0, pi/2]``.  Gauss-Legendre rules of
doubling size are applied until two successive results agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial
from scipy.special import roots_legendre

from .errors import NumericalError, PhysicsDomainError
from .polyroots import term_scale, trim
from .potentials import MotionConstants, PotentialParams
from .turning import g_polynomial

Q_MAX = 64
TOL_RAT = 1e-6
QUAD_TOL = 1e-12
N_START = 16
N_MAX = 1 << 12
ENDPOINT_TOL = 1e-8


@dataclass(frozen=True)
class ApsidalResult:
    delta_theta: float
    estimated_error: float
    alpha: float
    rational_match: tuple[int, int] | None = None
    rational_residual: float | None = None
    n_nodes: int = 0


@lru_cache(maxsize=None)
def _gauss(n):
    x, w = roots_legendre(n)
    # map [-1, 1] -> [0, pi/2]
    u = 0.25 * math.pi * (x + 1.0)
    w = 0.25 * math.pi * w
    return np.sin(u), np.cos(u), w


def _deflate(c, r):
    """Quotient of c(x) / (x - r), coefficients ascending."""
    n = len(c) - 1
    q = [0.0] * n
    acc = c[n]
    for i in range(n - 1, -1, -1):
        q[i] = acc
        acc = c[i] + r * acc
    return q


def _cofactor(G, a, b):
    co = list(trim(G.coeffs))
    for r in (a, b):
        if abs(G(r)) > ENDPOINT_TOL * max(1.0, term_scale(co, r)):
            raise PhysicsDomainError(f"interval endpoint {r!r} is not a turning point")
    q = _deflate(_deflate(co, a), b)
    # G = (g - a)(g - b) q = (g - a)(b - g) * (-q)
    return np.array([-v for v in q])


def _check_interval(interval):
    a, b = float(interval[0]), float(interval[1])
    if not math.isfinite(b):
        raise PhysicsDomainError("interval is unbounded; no apsidal angle")
    if not a > 0.0:
        raise PhysicsDomainError("interval reaches the origin; no apsidal angle")
    if b < a:
        raise PhysicsDomainError(f"interval ({a!r}, {b!r}) is reversed")
    if b - a <= 1e-12 * (1.0 + b):
        raise PhysicsDomainError("double root: circular orbit has no apsidal angle")
    return a, b


def _segment(weight, G, a, b, lo, hi, tol, n_max):
    """Integral of weight(g) / sqrt(G(g)) over [lo, hi] inside [a, b]."""
    q = _cofactor(G, a, b)
    width = hi - lo
    prev = None
    n = N_START
    while n <= n_max:
        s, co, w = _gauss(n)
        g = lo + width * s * s
        ga = (lo - a) + width * s * s
        bg = (b - hi) + width * co * co
        qv = polynomial.polyval(g, q)
        if np.any(qv <= 0.0) or np.any(ga <= 0.0) or np.any(bg <= 0.0):
            raise PhysicsDomainError("G is not positive inside the interval (inconsistent interval)")
        vals = weight(g) * 2.0 * width * s * co / np.sqrt(ga * bg * qv)
        total = float(np.dot(w, vals))
        if prev is not None:
            err = abs(total - prev)
            if err <= tol * (1.0 + abs(total)):
                return total, err, n
        prev = total
        n *= 2
    raise NumericalError(f"quadrature did not converge with {n_max} nodes")


def _angle_weight(p: PotentialParams, pt):
    if p.kind == "V3":
        return lambda g: 4.0 * g * (pt / g - 0.25 * g)
    return lambda g: 4.0 * (pt / g - 0.25 * g)


def _time_weight(p: PotentialParams):
    if p.kind == "V3":
        return lambda g: 2.0 * g * g
    return lambda g: 2.0 * g


def angle_segment(p: PotentialParams, c: MotionConstants, interval, lo, hi,
                  tol: float = QUAD_TOL, n_max: int = N_MAX):
    """Angular advance while the radius moves from lo to hi inside ``interval``.

    Returns ``(value, estimated_error)``.  Summing adjacent segments gives the
    full apsidal angle.
    """
    a, b = _check_interval(interval)
    if not a <= lo < hi <= b:
        raise ValueError(f"segment ({lo!r}, {hi!r}) must lie inside ({a!r}, {b!r})")
    v, e, _ = _segment(_angle_weight(p, c.p_theta), g_polynomial(p, c), a, b, lo, hi, tol, n_max)
    return v, e


def apsidal_angle(p: PotentialParams, c: MotionConstants, interval,
                  tol: float = QUAD_TOL, Q_max: int = Q_MAX, tol_rat: float = TOL_RAT,
                  n_max: int = N_MAX) -> ApsidalResult:
    """Signed angular advance while the radius goes from g_min to g_max."""
    a, b = _check_interval(interval)
    v, e, n = _segment(_angle_weight(p, c.p_theta), g_polynomial(p, c), a, b, a, b, tol, n_max)
    alpha = periodicity_alpha(v)
    match = rational_approx(alpha, Q_max, tol_rat)
    resid = None if match is None else abs(alpha - match[0] / match[1])
    return ApsidalResult(delta_theta=v, estimated_error=e, alpha=alpha,
                         rational_match=match, rational_residual=resid, n_nodes=n)


def radial_period(p: PotentialParams, c: MotionConstants, interval,
                  tol: float = QUAD_TOL, n_max: int = N_MAX):
    """Time from g_min to g_max and back, with its error estimate."""
    a, b = _check_interval(interval)
    v, e, _ = _segment(_time_weight(p), g_polynomial(p, c), a, b, a, b, tol, n_max)
    return 2.0 * v, 2.0 * e


def periodicity_alpha(delta_theta: float) -> float:
    return delta_theta / math.pi - 1.0


def convergents(x: float, q_max: int):
    """Continued-fraction convergents p/q of x with q <= q_max, in order."""
    frac = Fraction(x)
    h0, h1 = 0, 1   # numerators p_{k-2}, p_{k-1}
    k0, k1 = 1, 0   # denominators
    out = []
    while True:
        a = math.floor(frac)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > q_max:
            break
        out.append((h1, k1))
        rest = frac - a
        if rest == 0:
            break
        frac = 1 / rest
    return out


def rational_approx(alpha: float, Q_max: int = Q_MAX, tol_rat: float = TOL_RAT):
    """Last convergent of alpha with denominator <= Q_max, if within tol_rat."""
    if Q_max < 1:
        raise ValueError("Q_max must be at least 1")
    if not tol_rat > 0:
        raise ValueError("tol_rat must be positive")
    if not math.isfinite(alpha):
        return None
    conv = convergents(alpha, Q_max)
    if not conv:
        return None
    p, q = conv[-1]
    return (p, q) if abs(alpha - p / q) <= tol_rat else None
