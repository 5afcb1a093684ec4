"""Real roots of low-degree polynomials.

Coefficient sequences are ascending throughout: ``c[i]`` multiplies ``x**i``.

Quartics and below are solved in closed form (Ferrari for degree four) and the
candidates are Newton-polished on the original coefficients.  Higher degrees go
through :func:`solve_real_roots`, which brackets every real root between the
critical points of the polynomial so that no root inside the search interval
can be skipped.

Double roots matter here: a circular orbit is a turning point of multiplicity
two, and floating point splits it either into two close real roots or into a
complex pair with a tiny imaginary part.  Both are collapsed into a single root
flagged ``double``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import PhysicsDomainError

TOL_IMAG = 1e-10
TOL_MERGE = 1e-8
TRIM_TOL = 1e-14
# A close pair is accepted as one double root when the polynomial at the
# critical point between them is below this fraction of its term magnitude.
TOL_DOUBLE = 1e-13
NEAR_DOUBLE = 1e-5

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class RealRoots:
    """Sorted real roots with a per-root double-multiplicity flag."""

    values: tuple[float, ...] = ()
    double: tuple[bool, ...] = ()

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def positive(self) -> "RealRoots":
        keep = [i for i, v in enumerate(self.values) if v > 0.0]
        return RealRoots(tuple(self.values[i] for i in keep),
                         tuple(self.double[i] for i in keep))


# -- coefficient utilities ---------------------------------------------------

def trim(c: Sequence[float]) -> tuple[float, ...]:
    """Drop negligible trailing (leading-degree) coefficients."""
    c = tuple(float(v) for v in c)
    if not all(math.isfinite(v) for v in c):
        raise ValueError("polynomial coefficients must be finite")
    big = max((abs(v) for v in c), default=0.0)
    if big == 0.0:
        raise ValueError("the zero polynomial has no well-defined roots")
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= TRIM_TOL * big:
        n -= 1
    return c[:n]


def degree(c: Sequence[float]) -> int:
    return len(trim(c)) - 1


def horner(c: Sequence[float], x: float) -> float:
    acc = 0.0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def horner_d(c: Sequence[float], x: float) -> tuple[float, float]:
    """Value and first derivative."""
    p = 0.0
    dp = 0.0
    for coef in reversed(c):
        dp = dp * x + p
        p = p * x + coef
    return p, dp


def derivative(c: Sequence[float]) -> tuple[float, ...]:
    return tuple(i * c[i] for i in range(1, len(c)))


def term_scale(c: Sequence[float], x: float) -> float:
    """Sum of |c_i x^i|; the natural magnitude against which P(x) is judged."""
    s = 0.0
    xp = 1.0
    ax = abs(x)
    for coef in c:
        s += abs(coef) * xp
        xp *= ax
    return s


def relative_residual(c: Sequence[float], x: float) -> float:
    scale = term_scale(c, x)
    if scale == 0.0:
        return 0.0
    return abs(horner(c, x)) / scale


def cauchy_bound(c: Sequence[float]) -> float:
    """Every root (real or complex) has modulus below this value."""
    c = trim(c)
    lead = abs(c[-1])
    return 1.0 + max((abs(v) / lead for v in c[:-1]), default=0.0)


def descartes_positive_bound(c: Sequence[float]) -> int:
    """Sign changes in the nonzero coefficients.

    Upper bound on the number of positive roots, with equal parity.
    """
    signs = [v > 0 for v in c if v != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# -- polishing and classification of candidates ------------------------------

def _polish(c, x, iters=8):
    best = x
    best_res = abs(horner(c, x))
    for _ in range(iters):
        p, dp = horner_d(c, x)
        if dp == 0.0 or p == 0.0:
            break
        x_new = x - p / dp
        if not math.isfinite(x_new):
            break
        res = abs(horner(c, x_new))
        if res < best_res:
            best, best_res = x_new, res
        if abs(x_new - x) <= 4 * _EPS * abs(x_new):
            break
        x = x_new
    return best


def _critical_point(c, x0, window):
    """Root of P' near x0 (Newton on P'), or x0 if Newton leaves the window."""
    dc = derivative(c)
    x = x0
    for _ in range(30):
        d, dd = horner_d(dc, x)
        if dd == 0.0:
            break
        step = d / dd
        x -= step
        if abs(x - x0) > window:
            return x0
        if abs(step) <= 4 * _EPS * max(1.0, abs(x)):
            break
    return x


def _is_double_at(c, x, tol_double):
    return relative_residual(c, x) <= tol_double


def _finalize(c, candidates, tol_imag=TOL_IMAG, tol_merge=TOL_MERGE,
              tol_double=TOL_DOUBLE):
    """Turn complex candidates into a RealRoots on the original coefficients."""
    pts = []  # [value, double]
    for z in candidates:
        z = complex(z)
        re, im = z.real, abs(z.imag)
        if im <= tol_imag * (1.0 + abs(re)):
            pts.append([re, False])
        elif z.imag > 0 and im <= NEAR_DOUBLE * (1.0 + abs(re)):
            # complex pair straddling a tangency: keep it if P really
            # touches zero at the nearby critical point
            xc = _critical_point(c, re, 2 * im + NEAR_DOUBLE * (1.0 + abs(re)))
            if _is_double_at(c, xc, tol_double):
                pts.append([xc, True])
    for pt in pts:
        if not pt[1]:
            pt[0] = _polish(c, pt[0])
    pts.sort(key=lambda p: p[0])

    merged = []
    for x, dbl in pts:
        if merged:
            px, pdbl = merged[-1]
            gap = x - px
            width = 1.0 + max(abs(x), abs(px))
            if gap <= tol_merge * width:
                xc = _critical_point(c, 0.5 * (x + px), max(gap, tol_merge * width) + NEAR_DOUBLE * width)
                merged[-1] = [xc, True]
                continue
            if gap <= NEAR_DOUBLE * width and not (pdbl or dbl):
                xc = _critical_point(c, 0.5 * (x + px), gap + NEAR_DOUBLE * width)
                if px <= xc <= x and _is_double_at(c, xc, tol_double):
                    merged[-1] = [xc, True]
                    continue
        merged.append([x, dbl])
    return RealRoots(tuple(m[0] for m in merged), tuple(m[1] for m in merged))


# -- closed forms --------------------------------------------------------------

def _quadratic_candidates(c0, c1, c2):
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc >= 0.0:
        sq = math.sqrt(disc)
        q = -0.5 * (c1 + math.copysign(sq, c1))
        if q == 0.0:
            return [0.0, 0.0]
        return [q / c2, c0 / q]
    re = -c1 / (2.0 * c2)
    im = math.sqrt(-disc) / (2.0 * abs(c2))
    return [complex(re, im), complex(re, -im)]


def _cbrt(x):
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _cubic_candidates(a, b, d):
    """Roots of the monic cubic x^3 + a x^2 + b x + d."""
    shift = a / 3.0
    p = b - a * shift
    q = 2.0 * shift ** 3 - b * shift + d
    half_q = 0.5 * q
    third_p = p / 3.0
    disc = half_q * half_q + third_p ** 3
    if disc < 0.0:
        # three real roots, trigonometric form
        r = math.sqrt(-third_p)
        arg = max(-1.0, min(1.0, -half_q / (r ** 3)))
        phi = math.acos(arg) / 3.0
        return [2.0 * r * math.cos(phi - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
    big = _cbrt(-half_q - math.copysign(math.sqrt(disc), half_q))
    small = -third_p / big if big != 0.0 else 0.0
    t = big + small
    re = -0.5 * t - shift
    im = 0.5 * math.sqrt(3.0) * abs(big - small)
    return [t - shift, complex(re, im), complex(re, -im)]


def _ferrari_candidates(c):
    c0, c1, c2, c3, c4 = c
    a, b, cc, d = c3 / c4, c2 / c4, c1 / c4, c0 / c4
    a2 = a * a
    p = b - 0.375 * a2
    q = cc - 0.5 * a * b + 0.125 * a2 * a
    r = d - 0.25 * a * cc + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0
    shift = 0.25 * a
    scale = max(1.0, abs(p), math.sqrt(abs(r)))
    if abs(q) <= 1e-14 * scale ** 1.5:
        zs = _quadratic_candidates(r, p, 1.0)
        ys = []
        for z in zs:
            w = cmath.sqrt(z)
            ys += [w, -w]
        return [y - shift for y in ys]
    # resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0; its real root
    # of largest magnitude is positive because the cubic is -q^2/8 < 0 at 0
    rc = (p, 0.25 * p * p - r, -0.125 * q * q)
    reals = [z.real if isinstance(z, complex) else z
             for z in _cubic_candidates(*rc) if not isinstance(z, complex)]
    m = max(reals, key=abs)
    res = (-0.125 * q * q, 0.25 * p * p - r, p, 1.0)
    m = _polish(res, m)
    if m <= 0.0:
        m = max(reals)
    s = math.sqrt(2.0 * m)
    base = 0.5 * p + m
    corr = q / (2.0 * s)
    ys = _quadratic_candidates(base + corr, -s, 1.0) + _quadratic_candidates(base - corr, s, 1.0)
    return [y - shift for y in ys]


def _zero_multiplicity(c):
    k = 0
    while k < len(c) - 1 and c[k] == 0.0:
        k += 1
    return k


def _with_zero_root(rest: RealRoots, k: int, tol_merge: float) -> RealRoots:
    """Add the exact root x = 0 of multiplicity k to ``rest``."""
    vals, dbl = [0.0], [k >= 2]
    for v, d in zip(rest.values, rest.double):
        if abs(v) <= tol_merge:
            dbl[0] = True
            continue
        vals.append(v)
        dbl.append(d)
    order = sorted(range(len(vals)), key=vals.__getitem__)
    return RealRoots(tuple(vals[i] for i in order), tuple(dbl[i] for i in order))


def solve_quadratic(c: Sequence[float]) -> RealRoots:
    c = trim(c)
    if len(c) == 1:
        return RealRoots()
    if len(c) == 2:
        return RealRoots((-c[0] / c[1],), (False,))
    return _finalize(c, _quadratic_candidates(*c))


def solve_cubic(c: Sequence[float]) -> RealRoots:
    c = trim(c)
    if len(c) < 4:
        return solve_quadratic(c)
    lead = c[3]
    return _finalize(c, _cubic_candidates(c[2] / lead, c[1] / lead, c[0] / lead))


def solve_quartic(c: Sequence[float], tol_imag: float = TOL_IMAG,
                  tol_merge: float = TOL_MERGE) -> RealRoots:
    """All real roots of a polynomial of degree at most four.

    Degree four uses Ferrari's construction through the resolvent cubic;
    lower degrees fall through to the quadratic/cubic formulas.
    """
    c = trim(c)
    if len(c) > 5:
        raise ValueError(f"solve_quartic needs degree <= 4, got {len(c) - 1}")
    k = _zero_multiplicity(c)
    if k:
        return _with_zero_root(solve_quartic(c[k:], tol_imag, tol_merge), k, tol_merge)
    if len(c) < 5:
        return solve_cubic(c)
    return _finalize(c, _ferrari_candidates(c), tol_imag, tol_merge)


# -- bracketing for arbitrary degree ---------------------------------------

def _split(u, v):
    """Bisection point of [u, v]; geometric when the ends differ by orders of
    magnitude, so tiny roots are reached in a few dozen steps."""
    if u < 0.0 < v:
        return 0.0
    a, b = abs(u), abs(v)
    lo, hi = min(a, b), max(a, b)
    if hi > 4.0 * lo:
        m = math.sqrt(max(lo, 1e-300) * hi)
        return m if v > 0.0 else -m
    return 0.5 * (u + v)


def _bracketed_root(c, u, v, fu):
    """Root of P on [u, v], where P is monotone and changes sign.

    Newton steps are kept while they land inside the bracket and shrink the
    step at least fourfold; otherwise the bracket is split.
    """
    x = _split(u, v)
    dx_old = dx = v - u
    for _ in range(400):
        p, dp = horner_d(c, x)
        if p == 0.0:
            return x
        if (p < 0.0) == (fu < 0.0):
            u = x
        else:
            v = x
        if v - u <= 2 * _EPS * max(abs(u), abs(v)) or v - u < 1e-300:
            break
        x_new = x - p / dp if dp != 0.0 else None
        if x_new is not None and u < x_new < v and abs(4.0 * p) <= abs(dx_old * dp):
            dx_old, dx = dx, abs(x_new - x)
            if dx <= 2 * _EPS * abs(x_new):
                return x_new
        else:
            dx_old, dx = dx, v - u
            x_new = _split(u, v)
        x = x_new
    return x


def _roots_in(c, lo, hi, tol_double):
    n = len(c) - 1
    if n <= 0:
        return []
    if n == 1:
        x = -c[0] / c[1]
        return [(x, False)] if lo <= x <= hi else []
    crit = [x for x, _ in _roots_in(trim(derivative(c)), lo, hi, tol_double)]
    out = []
    knots = [lo] + [x for x in crit if lo < x < hi] + [hi]
    vals = []
    for i, x in enumerate(knots):
        f = horner(c, x)
        interior = 0 < i < len(knots) - 1
        if f == 0.0 or (interior and _is_double_at(c, x, tol_double)):
            out.append((x, interior))
            f = 0.0
        vals.append(f)
    for i in range(len(knots) - 1):
        fu, fv = vals[i], vals[i + 1]
        if fu == 0.0 or fv == 0.0:
            continue
        if (fu < 0.0) != (fv < 0.0):
            out.append((_bracketed_root(c, knots[i], knots[i + 1], fu), False))
    out.sort()
    return out


def solve_real_roots(c: Sequence[float], lo: float | None = None, hi: float | None = None,
                     tol_merge: float = TOL_MERGE, tol_double: float = TOL_DOUBLE) -> RealRoots:
    """All real roots in ``[lo, hi]`` by derivative-sequence bracketing.

    The critical points of P (found recursively the same way) cut the interval
    into monotone pieces; each piece holds at most one root, found by
    safeguarded Newton.  A critical point where P vanishes to within
    ``tol_double`` of its term scale is reported as a double root.  Without
    bounds the whole real line is searched via the Cauchy bound.
    """
    c = trim(c)
    if len(c) == 1:
        return RealRoots()
    bound = cauchy_bound(c)
    lo = -bound if lo is None else float(lo)
    hi = bound if hi is None else float(hi)
    if lo > hi:
        raise ValueError("empty search interval")
    k = _zero_multiplicity(c)
    if k:
        rest = solve_real_roots(c[k:], lo, hi, tol_merge, tol_double)
        if lo <= 0.0 <= hi:
            return _with_zero_root(rest, k, tol_merge)
        return rest
    found = _roots_in(c, lo, hi, tol_double)
    merged = []
    for x, dbl in found:
        if merged and x - merged[-1][0] <= tol_merge * (1.0 + abs(x)):
            merged[-1] = [merged[-1][0] if merged[-1][1] else x, True]
            continue
        merged.append([x, dbl])
    return RealRoots(tuple(m[0] for m in merged), tuple(m[1] for m in merged))


def solve_even(c: Sequence[float]) -> RealRoots:
    """Real roots of a polynomial in even powers only, via X = x^2."""
    c = trim(c)
    odd = max((abs(v) for v in c[1::2]), default=0.0)
    if odd > TRIM_TOL * max(abs(v) for v in c):
        raise ValueError("polynomial has odd-power terms")
    xs = c[0::2]
    xroots = solve_quartic(xs) if len(xs) <= 5 else solve_real_roots(xs, 0.0, None)
    vals, dbl = [], []
    for x, d in zip(xroots.values, xroots.double):
        if x > 0.0:
            r = math.sqrt(x)
            vals += [-r, r]
            dbl += [d, d]
        elif x == 0.0 or abs(x) <= TOL_MERGE:
            vals.append(0.0)
            dbl.append(True)
    order = sorted(range(len(vals)), key=vals.__getitem__)
    return RealRoots(tuple(vals[i] for i in order), tuple(dbl[i] for i in order))


def kulkarni_restricted_A(B: float, Gamma: float, Delta: float, E: float,
                          p_theta: float, H: float) -> float:
    """Value of A for which the V3 sextic G3 = 0 becomes solvable in radicals."""
    lead = 16.0 * E - 1.0
    if lead == 0.0:
        raise PhysicsDomainError("restriction undefined at E = 1/16")
    zeta = -16.0 / lead
    s = p_theta + 2.0 * H
    t1 = 4.0 * zeta * s * s
    t2 = 64.0 * (Gamma + p_theta * p_theta)
    den = t1 - t2
    if abs(den) <= 8 * _EPS * (abs(t1) + abs(t2)):
        raise PhysicsDomainError("restriction denominator vanishes")
    num = Delta * p_theta * zeta + 2.0 * Delta * H * zeta + 4.0 * B
    return zeta * Delta * Delta / 4.0 - num * num / den
