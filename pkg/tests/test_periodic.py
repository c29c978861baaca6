import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tractrix import curves
from tractrix.geometry import LeadingCurve, resample_polyline
from tractrix.ode import Mode
from tractrix.periodic import (
    ConditionWarning,
    PeriodMap,
    SlackError,
    closure_error,
    contraction_rate,
    curvature_condition,
    find_periodic,
    gap_profile,
    gronwall_bound,
    period_map,
    sweep_T,
)

HALF_PI = 0.5 * math.pi


@pytest.fixture(scope="module")
def ellipse():
    return curves.ellipse(2.0, 1.0)


@pytest.fixture(scope="module")
def square():
    return resample_polyline([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)


def test_circle_fixed_point():
    # radius 2, leash 1: sin nu* = K T
    sol = find_periodic(curves.circle(0.5), 1.0)
    assert sol.converged and sol.theorem_regime
    assert_allclose(sol.nu_star, math.pi / 6, atol=1e-10)
    r = np.hypot(sol.trace_one_period.x - (-2.0), sol.trace_one_period.y)
    assert_allclose(r, math.sqrt(3.0), atol=1e-8)


def test_period_map_at_fixed_point():
    c = curves.circle(0.5)
    assert_allclose(period_map(c, 1.0, math.pi / 6), math.pi / 6, atol=1e-10)


def test_straight_line_with_artificial_period():
    ln = LeadingCurve(lambda l: (l, 0.0, 0.0, 0.0), period=1.0, max_curvature=0.0)
    sol = find_periodic(ln, 0.5, nu_start=1.0)
    assert abs(sol.nu_star) < 1e-10


def test_map_sends_interval_into_itself(ellipse):
    pm = PeriodMap(ellipse, 0.4)
    lo, hi = pm(-HALF_PI + 1e-9), pm(HALF_PI - 1e-9)
    sol = find_periodic(ellipse, 0.4)
    assert -HALF_PI < lo < sol.nu_star < hi < HALF_PI


def test_ellipse_closes(ellipse):
    sol = find_periodic(ellipse, 0.4, tol=1e-12)
    dpos, dang = closure_error(ellipse, sol.trace_one_period)
    assert dpos < 1e-8 and dang < 1e-8
    assert sol.residual < 1e-10


def test_residual_decreases_geometrically(ellipse):
    T = 0.45
    sol = find_periodic(ellipse, T, tol=1e-14)
    rate = contraction_rate(ellipse, T)
    h = [r for r in sol.history if r > 1e-13]
    assert len(h) >= 2
    for a, b in zip(h, h[1:]):
        assert b <= 2.0 * rate * a


def test_sinusoid_below_bound_closes():
    sin = curves.sinusoid(1.0, 2.0 * math.pi)
    T = 0.6
    assert curvature_condition(sin, T) < 1.0
    sol = find_periodic(sin, T, tol=1e-11)
    dpos, dang = closure_error(sin, sol.trace_one_period)
    assert dpos < 1e-8 and dang < 1e-8


def test_sweep_monotone():
    c = curves.circle(0.5)
    sols = sweep_T(c, [0.2, 0.4, 0.6, 1.0, 1.5])
    nus = [s.nu_star for s in sols]
    assert np.all(np.diff(nus) > 0)
    assert_allclose(nus, np.arcsin(0.5 * np.array([0.2, 0.4, 0.6, 1.0, 1.5])), atol=1e-9)


def test_contraction_rate_small_and_vanishing():
    c = curves.circle(0.5)
    r1 = contraction_rate(c, 1.0)
    assert 0.0 < r1 < 1e-3
    assert contraction_rate(c, 0.01) < 1e-12


def test_contraction_within_gronwall_bound(ellipse):
    g = gronwall_bound(ellipse, 0.4, -1.2, 1.2)
    assert 0.0 < g["factor"] <= g["bound_factor"] * (1 + 1e-9)
    assert g["bound_factor"] < 1.0


def test_gap_profile_shrinks(ellipse):
    l, a, b = gap_profile(ellipse, 0.4, -1.0, 1.0)
    gap = b - a
    assert np.all(gap > 0)
    assert np.all(np.diff(gap) < 0)
    assert l[0] == 0.0 and l[-1] == pytest.approx(ellipse.period)


def test_violation_raises(ellipse):
    with pytest.raises(ValueError):
        find_periodic(ellipse, 1.5)


def test_corners_violate_condition(square):
    assert curvature_condition(square, 0.01) == math.inf
    with pytest.raises(ValueError):
        find_periodic(square, 0.3)


def test_square_pushpull_closes(square):
    with pytest.warns(ConditionWarning):
        sol = find_periodic(square, 0.3, allow_violation=True)
    assert sol.converged and not sol.theorem_regime
    dpos, dang = closure_error(square, sol.trace_one_period)
    assert dpos < 1e-9 and dang < 1e-9


def test_nonconvergence_warns(square):
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        sol = find_periodic(square, 0.8, allow_violation=True, max_iter=5)
    assert not sol.converged
    assert sum(issubclass(r.category, ConditionWarning) for r in rec) == 2


def test_slack_in_pull_mode(square):
    with pytest.raises(SlackError):
        PeriodMap(square, 0.3, mode=Mode.PULL_ONLY)(0.0)


def test_aperiodic_curve_rejected():
    with pytest.raises(ValueError):
        find_periodic(curves.line(), 1.0)


def test_phase_matches_nu_when_pulling(ellipse):
    pm = PeriodMap(ellipse, 0.4)
    assert_allclose(pm.phase(0.3), pm(0.3), atol=1e-14)
