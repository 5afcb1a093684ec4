import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbits.dynamics import (initial_state_at_perihelion, integrate_relative,
                             measure_apsidal_angle, radial_minima)
from orbits.errors import PhysicsDomainError
from orbits.potentials import MotionConstants, V1Params, eval_effective
from orbits.presets import preset
from orbits.quadrature import (angle_segment, apsidal_angle, convergents, periodicity_alpha,
                               radial_period, rational_approx)
from orbits.turning import BOUNDED, turning_points

from oracles import bisect, scan_turning_points


def ode_angle(p, c, t_end=60.0):
    s = initial_state_at_perihelion(p, c)
    return measure_apsidal_angle(integrate_relative(p, s, t_end))


def test_fig2_matches_ode():
    p, c = preset("v1-equal")
    iv = turning_points(p, c).intervals[0]
    r = apsidal_angle(p, c, iv)
    assert r.estimated_error >= 0.0
    assert r.delta_theta == pytest.approx(ode_angle(p, c), abs=1e-4)
    assert r.alpha == pytest.approx(r.delta_theta / math.pi - 1.0, abs=1e-15)


def test_fig2_angle_is_minus_quarter_period():
    # p_theta = 0: theta turns at -1/2 throughout, so the angle advance over
    # half a radial period is -T/4 (period computed by an unrelated weight)
    p, c = preset("v1-equal")
    iv = turning_points(p, c).intervals[0]
    T, _ = radial_period(p, c, iv)
    assert apsidal_angle(p, c, iv).delta_theta == pytest.approx(-T / 4, abs=1e-12)


def test_sign_changing_integrand_matches_ode():
    # p_theta > 0 so p/g - g/4 vanishes at g = 2 sqrt(p), inside the interval
    p, c = V1Params(1, 1, 1), MotionConstants(10, 0.5)
    iv = turning_points(p, c).intervals[0]
    assert iv[0] < 2 * math.sqrt(0.5) < iv[1]
    r = apsidal_angle(p, c, iv)
    assert r.delta_theta == pytest.approx(ode_angle(p, c), abs=1e-4)


def test_v3_double_well_intervals_match_ode():
    p, c = preset("v3-double-well-low")
    d = turning_points(p, c)
    for k, iv in enumerate(d.intervals):
        r = apsidal_angle(p, c, iv)
        s = initial_state_at_perihelion(p, c, interval_index=k)
        ode = measure_apsidal_angle(integrate_relative(p, s, 40.0))
        assert r.delta_theta == pytest.approx(ode, abs=1e-4)


def test_tighter_tolerance_within_error_estimate():
    p, c = preset("v2-attractive")
    iv = turning_points(p, c).intervals[0]
    loose = apsidal_angle(p, c, iv, tol=1e-8)
    tight = apsidal_angle(p, c, iv, tol=0.5e-8)
    assert abs(tight.delta_theta - loose.delta_theta) <= max(loose.estimated_error, 1e-15)


def test_interval_additivity():
    rng = random.Random(8)
    for name in ("v1-equal", "v2-equal", "v3-bounded"):
        p, c = preset(name)
        a, b = turning_points(p, c).intervals[0]
        full, e = angle_segment(p, c, (a, b), a, b)
        for _ in range(5):
            m = rng.uniform(a, b)
            left, el = angle_segment(p, c, (a, b), a, m)
            right, er = angle_segment(p, c, (a, b), m, b)
            assert left + right == pytest.approx(full, abs=e + el + er + 1e-12)


def test_integrand_regular_at_endpoints():
    # the quadrature converges quickly only if the regularized integrand is
    # smooth at both ends; a leftover 1/sqrt singularity would stall it
    p, c = preset("v1-equal")
    r = apsidal_angle(p, c, turning_points(p, c).intervals[0])
    assert r.n_nodes <= 256


def test_random_bounded_agree_with_ode():
    rng = random.Random(12)
    done = 0
    while done < 6:
        p = V1Params(rng.uniform(0, 3), rng.uniform(-3, 3), rng.uniform(0, 3))
        c = MotionConstants(rng.uniform(2, 20), rng.uniform(-1, 1))
        d = turning_points(p, c)
        if d.classification != BOUNDED or d.intervals[0][0] <= 0.0:
            continue
        r = apsidal_angle(p, c, d.intervals[0])
        assert r.delta_theta == pytest.approx(ode_angle(p, c), abs=max(1e-4, 10 * r.estimated_error))
        done += 1


def test_interval_errors():
    p, c = preset("v1-equal")
    a, b = turning_points(p, c).intervals[0]
    with pytest.raises(PhysicsDomainError, match="unbounded"):
        apsidal_angle(p, c, (a, math.inf))
    with pytest.raises(PhysicsDomainError):
        apsidal_angle(p, c, (b, a))
    with pytest.raises(PhysicsDomainError):
        apsidal_angle(p, c, (0.0, b))
    with pytest.raises(PhysicsDomainError, match="not a turning point"):
        apsidal_angle(p, c, (a, 0.5 * (a + b)))


def test_circular_orbit_rejected():
    # H at the minimum of V_eff: the interval degenerates to a double root
    p, pt = V1Params(1, 1, 1), 0.0
    grid = np.linspace(0.2, 3, 200001)
    g0 = grid[np.argmin([eval_effective(p, MotionConstants(0, pt), g) for g in grid])]
    c = MotionConstants(eval_effective(p, MotionConstants(0, pt), g0), pt)
    with pytest.raises(PhysicsDomainError, match="circular"):
        apsidal_angle(p, c, (g0, g0))


def test_inconsistent_interval_rejected():
    # endpoints that are roots but with G < 0 between them
    p, c = preset("v3-double-well-low")
    d = turning_points(p, c)
    (_, b0), (a1, _) = d.intervals
    with pytest.raises(PhysicsDomainError, match="inconsistent"):
        apsidal_angle(p, c, (b0, a1))


def test_radial_period_matches_ode():
    p, c = preset("v1-equal")
    T, _ = radial_period(p, c, turning_points(p, c).intervals[0])
    s = initial_state_at_perihelion(p, c)
    mins = radial_minima(integrate_relative(p, s, 3 * T + 0.5))
    # the start sits exactly on a minimum, so passages come at T, 2T, 3T
    assert [m[0] for m in mins] == pytest.approx([T, 2 * T, 3 * T], abs=1e-7)


# -- periodicity ----------------------------------------------------------------


@pytest.mark.parametrize("dt,alpha", [(math.pi, 0.0), (1.5 * math.pi, 0.5)])
def test_periodicity_alpha_examples(dt, alpha):
    assert periodicity_alpha(dt) == pytest.approx(alpha, abs=1e-15)


def test_periodicity_alpha_irrational():
    a = periodicity_alpha(math.pi * (1 + math.sqrt(2)))
    assert a == pytest.approx(math.sqrt(2), abs=1e-15)
    assert rational_approx(a, 64, 1e-9) is None


def test_rational_examples():
    assert rational_approx(0.5, 10, 1e-9) == (1, 2)
    assert rational_approx(0.3333333, 10, 1e-3) == (1, 3)
    x = math.sqrt(2) - 1
    assert rational_approx(x, 10, 1e-9) is None
    # no fraction at all with q <= 10 comes within 1e-9
    best = min(abs(x - p / q) for q in range(1, 11) for p in range(0, q + 1))
    assert best > 1e-9


def test_rational_bad_arguments():
    with pytest.raises(ValueError):
        rational_approx(0.5, 0, 1e-6)
    with pytest.raises(ValueError):
        rational_approx(0.5, 10, 0.0)
    assert rational_approx(math.nan) is None


def test_negative_alpha():
    assert rational_approx(-0.75, 10, 1e-12) == (-3, 4)


@settings(max_examples=300, deadline=None)
@given(st.integers(-200, 200), st.integers(1, 64))
def test_exact_rationals_recovered(num, den):
    f = Fraction(num, den)
    assert rational_approx(num / den, 64, 1e-12) == (f.numerator, f.denominator)


@settings(max_examples=300, deadline=None)
@given(st.floats(-10, 10, allow_nan=False), st.integers(1, 200))
def test_convergents_properties(x, q_max):
    conv = convergents(x, q_max)
    qs = [q for _, q in conv]
    assert all(q <= q_max for q in qs)
    assert qs == sorted(qs)
    # each convergent beats every fraction with a smaller denominator
    for p, q in conv[1:]:
        err = abs(x - p / q)
        for qq in range(1, q):
            pp = round(x * qq)
            assert err <= abs(x - pp / qq) + 1e-15


def test_near_commensurable_case_found_by_sweeping_h():
    # alpha drifts slowly with H (about -1.1097 at H=5, -1.1159 at H=40);
    # bisect on H to land on alpha = -10/9
    p = V1Params(1, 1, 1)

    def alpha(H):
        c = MotionConstants(H, 0.0)
        return apsidal_angle(p, c, turning_points(p, c).intervals[0]).alpha

    lo, hi = 5.0, 40.0
    target = -10 / 9
    f = lambda H: alpha(H) - target
    assert (f(lo) > 0) != (f(hi) > 0)
    H = bisect(f, lo, hi, iters=80)
    c = MotionConstants(H, 0.0)
    r = apsidal_angle(p, c, turning_points(p, c).intervals[0])
    assert r.rational_match == (-10, 9)
    assert r.rational_residual <= 1e-6


def test_turning_points_used_are_oracle_roots():
    p, c = preset("v2-equal")
    iv = turning_points(p, c).intervals[0]
    assert iv == pytest.approx(scan_turning_points(p, c), rel=1e-9)
