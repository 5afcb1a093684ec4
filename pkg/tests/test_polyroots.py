import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orbits.errors import PhysicsDomainError
from orbits.polyroots import (cauchy_bound, descartes_positive_bound, kulkarni_restricted_A,
                              relative_residual, solve_cubic, solve_even, solve_quadratic,
                              solve_quartic, solve_real_roots, trim)
from orbits.potentials import MotionConstants, V1Params, V3Params
from orbits.turning import g_polynomial

from oracles import batch_scan_roots, bisect, scan_poly_roots


def expand(roots, lead=1.0):
    """Ascending coefficients of lead * prod(x - r)."""
    return tuple(np.polynomial.polynomial.polyfromroots(roots) * lead)


def test_quartic_constructed():
    r = solve_quartic(expand([1, 2, -1, -3]))
    assert r.values == pytest.approx([-3, -1, 1, 2], abs=1e-12)
    assert not any(r.double)


def test_quartic_no_real_roots():
    assert len(solve_quartic([1, 0, 0, 0, 1])) == 0


def test_quartic_fig2_g_polynomial():
    G = g_polynomial(V1Params(1, 1, 1), MotionConstants(10, 0))
    assert G.coeffs == (-16, -16, 160, -16, -17)
    got = solve_quartic(G.coeffs).positive().values
    f = lambda x: float(np.polynomial.polynomial.polyval(x, G.coeffs))
    want = scan_poly_roots(G.coeffs, 0.0, 10.0, n=100_001)
    assert len(got) == len(want) == 2
    for a, b in zip(got, want):
        assert a == pytest.approx(b, abs=1e-10)
        assert abs(f(a)) < 1e-9


def test_lower_degrees():
    assert solve_quadratic([-4, 0, 1]).values == pytest.approx([-2, 2])
    assert solve_quadratic([3, 2]).values == (-1.5,)
    assert solve_cubic(expand([-1, 0.5, 4])).values == pytest.approx([-1, 0.5, 4], abs=1e-13)
    assert solve_quartic([0, 0, 1, 1, 0]).values == pytest.approx([-1, 0], abs=1e-15)


def test_degenerate_inputs_rejected():
    with pytest.raises(ValueError):
        solve_quartic([0, 0, 0])
    with pytest.raises(ValueError):
        solve_real_roots([1, math.nan, 2])
    with pytest.raises(ValueError):
        trim([math.inf, 1])
    with pytest.raises(ValueError):
        solve_quartic([1, 2, 3, 4, 5, 6])


def test_trim_drops_tiny_leading_terms():
    assert trim([1.0, 2.0, 1e-20]) == (1.0, 2.0)


def test_double_root_merged_and_flagged():
    r = solve_quartic(expand([1.5, 1.5, -2, 3]))
    assert r.values == pytest.approx([-2, 1.5, 3], abs=1e-7)
    assert r.double == (False, True, False)


def test_sextic_doubled_roots():
    r = solve_real_roots(expand([1, 1, 2, 2, 3, 3]), 0.0, 10.0)
    assert r.values == pytest.approx([1, 2, 3], abs=1e-7)
    assert all(r.double)


def test_fig11_sextic_four_roots():
    G = g_polynomial(V3Params(3, -6, -6, 16, -0.2), MotionConstants(7.0, 0.0))
    r = solve_real_roots(G.coeffs, 0.0, 50.0).positive()
    want = scan_poly_roots(G.coeffs, 1e-6, 50.0, n=1_000_000)
    assert len(r) == len(want) == 4
    assert r.values == pytest.approx(want, abs=1e-9)


def test_random_quartics_match_scan_oracle():
    rng = np.random.default_rng(2024)
    C = rng.uniform(-10, 10, (10_000, 5))
    B = np.array([cauchy_bound(c) for c in C])
    oracle = batch_scan_roots(C, -B, B, n=20_001)
    mismatched = 0
    worst = 0.0
    for c, want in zip(C, oracle):
        got = solve_quartic(c).values
        if len(got) != len(want):
            mismatched += 1
            continue
        for a, b in zip(got, want):
            worst = max(worst, abs(a - b) / (1.0 + abs(b)))
    assert mismatched == 0
    assert worst <= 1e-9


def test_random_monic_sextics_match_fine_scan():
    rng = np.random.default_rng(11)
    C = np.hstack([rng.uniform(-10, 10, (60, 6)), np.ones((60, 1))])
    B = np.array([cauchy_bound(c) for c in C])
    oracle = batch_scan_roots(C, -B, B, n=1_000_000, chunk=4)
    for c, want in zip(C, oracle):
        got = solve_real_roots(c).values
        assert len(got) == len(want)
        assert got == pytest.approx(want, abs=1e-9, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.floats(0.5, 3))
def test_constructed_quartic_roots_recovered(roots, lead):
    roots = sorted(roots)
    assume(all(b - a > 1e-2 for a, b in zip(roots, roots[1:])))
    got = solve_quartic(expand(roots, lead)).values
    assert got == pytest.approx(roots, abs=1e-8)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_subnormal=False), min_size=3, max_size=7))
def test_residual_and_descartes(c):
    assume(any(abs(v) > 1e-3 for v in c[1:]))
    r = solve_real_roots(c)
    cc = trim(c)
    companion = np.roots(list(reversed(cc)))
    for x, dbl in zip(r.values, r.double):
        if dbl:
            # roots closer than tol_merge collapse into one, where P itself
            # need not be small; check against the companion-matrix roots
            width = 1e-8 * (1.0 + abs(x))
            assert min(abs(z.real - x) for z in companion) <= 2 * width
        else:
            assert relative_residual(cc, x) <= 1e-10
    npos = sum(1 for x in r.values if x > 0)
    bound = descartes_positive_bound(cc)
    assert npos <= bound
    # parity needs exact multiplicities, so only simple-root cases
    if not any(r.double) and cc[0] != 0.0:
        assert (bound - npos) % 2 == 0


def test_descartes_examples():
    assert descartes_positive_bound([-1, -2, -3]) == 0
    assert descartes_positive_bound([-16, -16, 24, -1, -1]) == 2
    assert descartes_positive_bound([1, -1, 1, -1]) == 3
    assert descartes_positive_bound([1, 0, 0, -1]) == 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=5))
def test_even_reduction_matches_direct(xc):
    assume(abs(xc[-1]) > 1e-2)
    # nearly repeated roots in X are ill-conditioned (error ~ eps^(1/m)), so
    # agreement to 1e-10 is only meaningful for separated roots
    zs = np.roots(xc[::-1])
    assume(all(abs(a - b) > 1e-3 for i, a in enumerate(zs) for b in zs[i + 1:]))
    c = [0.0] * (2 * len(xc) - 1)
    c[0::2] = xc
    via_x = solve_even(c)
    direct = solve_real_roots(c)
    simple = [v for v, d in zip(via_x.values, via_x.double) if not d]
    for v in simple:
        d, _, dbl = min((abs(v - w), w, dbl) for w, dbl in zip(direct.values, direct.double))
        # a tiny X root gives x = +-sqrt(X) closer than the merge tolerance,
        # which the direct solver reports as one double root
        tol = 2e-8 * (1 + abs(v)) if dbl else 1e-10 * (1 + abs(v))
        assert d <= tol


def test_kulkarni_examples():
    assert kulkarni_restricted_A(0, 1, 0, 0, 0, 1) == 0.0
    # B = p = H = 0 leaves A = zeta Delta^2 / 4
    assert kulkarni_restricted_A(0, 0.5, 2.0, 0.0, 0.0, 0.0) == pytest.approx(16 * 4 / 4, rel=1e-12)
    assert kulkarni_restricted_A(1, 1, 1, 0, 0, 1) == pytest.approx(-2.75, rel=1e-12)


def test_kulkarni_against_exact_arithmetic():
    def exact(B, G, D, E, p, H):
        B, G, D, E, p, H = map(Fraction, (B, G, D, E, p, H))
        z = Fraction(-16) / (16 * E - 1)
        num = D * p * z + 2 * D * H * z + 4 * B
        return z * D * D / 4 - num * num / (4 * z * (p + 2 * H) ** 2 - 64 * (G + p * p))
    rng = np.random.default_rng(5)
    for _ in range(200):
        args = [float(v) for v in rng.uniform(-3, 3, 6)]
        args[3] = float(rng.uniform(-1, 0.05))
        want = float(exact(*args))
        assert kulkarni_restricted_A(*args) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_kulkarni_errors():
    with pytest.raises(PhysicsDomainError):
        kulkarni_restricted_A(1, 1, 1, 1 / 16, 0, 1)
    # E = 0: zeta = 16, denominator 256 H^2 - 64 Gamma vanishes at Gamma = 4 H^2
    with pytest.raises(PhysicsDomainError):
        kulkarni_restricted_A(1, 4, 1, 0, 0, 1)
