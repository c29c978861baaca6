import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from tractrix import circle_family as cf
from tractrix.circle_family import LeashParams, TractrixClass

# Positions at matched arc length from a 40-digit quadrature of dl/ds = 1/sin(xi)
# and the leading-point-plus-leash construction (frozen).
FROZEN_POSITIONS = [
    # (w, T, s, l, x, y)
    (0.5, 1.0, 2.0, 2.4391962085978253395, -0.51753385900175721557, 1.2705533598450142604),
    (3.0, 1.0, 0.5, 0.6621380290740853922, 0.51300994767127151117, 0.11058595921948705798),
    (-0.5, 1.0, 3.0, 4.7130169823057310395, 2.4417076837435051065, 1.644785756682681086),
    (1.0, 1.0, 1.5, 1.8659284740680883941, -0.33311466006644883998, 0.6691670822563160348),
    (0.0, 1.0, 2.0, 2.6885364973074748431, 0.13533528323661269189, 1.6977366380466522693),
]

w_pos = st.floats(min_value=0.05, max_value=8.0)
w_any = st.floats(min_value=-0.95, max_value=8.0)
T_pos = st.floats(min_value=0.1, max_value=5.0)


# ---------------------------------------------------------------- classify

@pytest.mark.parametrize("w, cls", [(2.0, "T1"), (1.0, "T2"), (0.5, "T3"), (0.0, "T4"), (-0.5, "T5")])
def test_classify_examples(w, cls):
    assert cf.classify(w, 1.0) is TractrixClass(cls)


def test_classify_reverse_and_rejections():
    assert cf.classify(-2.0, -1.0) is TractrixClass.REVERSE
    for w, T in [(-1.0, 1.0), (-2.0, 1.0), (0.5, -1.0), (1.0, 0.0)]:
        with pytest.raises(ValueError):
            cf.classify(w, T)


def test_leash_params_branches():
    p = LeashParams.from_w(0.5, 2.0)
    assert p.K == 0.25 and p.R == 4.0 and p.w == 0.5
    m = LeashParams.from_w(0.5, 2.0, sign_branch=-1)
    assert m.K == -0.25 and m.w == 0.5
    with pytest.raises(ValueError):
        LeashParams(T=1.0, K=0.1, sign_branch=0)
    with pytest.raises(ValueError):
        LeashParams.from_w(-1.5, 1.0)


# -------------------------------------------------------- natural equation

def test_curvature_start_is_minus_infinity():
    for w in (-0.5, 0.0, 0.5, 1.0, 3.0):
        assert cf.kplus(0.0, w, 1.0) == -math.inf
        assert cf.kplus(1e-12, w, 1.0) < -1e5


def test_curvature_line_value():
    # k4(s) = -1/(T sqrt(e^{2s/T} - 1)); at e^{2s/T} = 4 this is -1/sqrt(3)
    assert cf.kplus(math.log(2.0), 0.0, 1.0) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    s = np.linspace(0.1, 5, 50)
    assert_allclose(cf.kplus(s, 0.0, 2.0), -1 / (2.0 * np.sqrt(np.exp(s) - 1)), rtol=1e-13)


@pytest.mark.parametrize("w", [0.5, 1.0, 2.0, 5.0])
def test_inflection_zero(w):
    s0 = cf.inflection_arc(w, 1.0)
    assert s0 == pytest.approx(math.log((w + 1) / w))
    assert abs(cf.kplus(s0, w, 1.0)) < 1e-14
    assert cf.kplus(s0 - 1e-6, w, 1.0) < 0 < cf.kplus(s0 + 1e-6, w, 1.0)


def test_no_inflection_for_nonpositive_w():
    assert cf.inflection_arc(0.0, 1.0) is None
    assert cf.inflection_arc(-0.5, 1.0) is None


def test_arc_limit_examples():
    assert cf.arc_limit(3.0, 1.0) == pytest.approx(math.log(2.0), abs=1e-15)
    assert cf.arc_limit(1.0, 1.0) == math.inf
    assert cf.arc_limit(LeashParams.from_w(0.5, 2.0)) == math.inf
    # the radicand of the natural equation vanishes at S1
    w = 3.0
    S1 = cf.arc_limit(w, 1.0)
    assert cf.kplus(S1, w, 1.0) == math.inf
    assert cf.kplus(S1 * (1 - 1e-12), w, 1.0) > 1e4


def test_curvature_domain_errors():
    with pytest.raises(ValueError):
        cf.kplus(-0.1, 0.5, 1.0)
    with pytest.raises(ValueError):
        cf.kplus(1.0, 3.0, 1.0)  # beyond S1 = ln 2


@given(w_any, T_pos)
@settings(max_examples=60, deadline=None)
def test_curvature_strictly_increasing(w, T):
    S1 = cf.arc_limit(w, T)
    hi = min(S1, 12 * T)
    s = np.linspace(0, hi, 400)[1:-1]
    k = cf.kplus(s, w, T)
    d = np.diff(k)
    # far out on unbounded tractrices the curvature saturates in floating point
    assert np.all(d[np.abs(k[1:]) > 1e-6 / T] > 0) or np.all(d >= 0)
    assert np.all(d >= -1e-12 * np.abs(k[1:]))


@given(w_pos, T_pos)
@settings(max_examples=40, deadline=None)
def test_inflection_sign_change(w, T):
    s0 = cf.inflection_arc(w, T)
    eps = 1e-6 * T
    assert cf.kplus(s0 - eps, w, T) < 0 < cf.kplus(s0 + eps, w, T)


def test_mirror_branch_negates_curvature():
    s = np.linspace(0.1, 3, 20)
    p, m = LeashParams.from_w(0.5, 1.0), LeashParams.from_w(0.5, 1.0, sign_branch=-1)
    assert_allclose(cf.natural_curvature(s, m), -cf.natural_curvature(s, p))


# ----------------------------------------------------------- xi, t, l, psi

def test_xi_and_t_examples():
    p0 = LeashParams.from_w(0.0, 1.0)
    assert cf.xi_of_s(0.0, p0) == 0.0 and cf.t_of_s(0.0, p0) == 0.0
    assert cf.xi_of_s(math.log(2.0), p0) == pytest.approx(math.pi / 3, abs=1e-15)
    assert cf.t_of_s(math.log(2.0), p0) == pytest.approx(math.tan(math.pi / 6), abs=1e-15)
    p3 = LeashParams.from_w(3.0, 1.0)
    S1 = cf.arc_limit(p3)
    assert cf.xi_of_s(S1, p3) == pytest.approx(math.pi)
    assert cf.t_of_s(S1, p3) > 1e7


@given(w_any, T_pos, st.floats(min_value=0.01, max_value=0.99))
@settings(max_examples=50, deadline=None)
def test_s_of_xi_inverts(w, T, frac):
    p = LeashParams.from_w(w, T)
    s = frac * min(cf.arc_limit(p), 6 * T)
    assert cf.s_of_xi(cf.xi_of_s(s, p), p) == pytest.approx(s, rel=1e-9, abs=1e-12)


def test_leading_arc_quadrature_oracle():
    p = LeashParams.from_w(0.5, 1.0)
    assert cf.leading_arc(1.0, p) == pytest.approx(1.4220366002262822817, abs=1e-14)
    # independent double-precision quadrature of the same integrand
    val, _ = quad(lambda s: 1.0 / math.sin(cf.xi_of_s(s, p)), 0.0, 1.0, limit=200)
    assert cf.leading_arc(1.0, p) == pytest.approx(val, abs=1e-8)


def test_leading_arc_special_branches():
    assert cf.leading_arc(0.0, LeashParams.from_w(0.7, 1.0)) == 0.0
    p = LeashParams.from_w(1.0, 2.0)
    s = np.linspace(0.1, 5, 20)
    assert_allclose(cf.leading_arc(s, p), 2.0 * cf.t_of_s(s, p), rtol=1e-13)
    p0 = LeashParams.from_w(0.0, 1.5)
    assert_allclose(cf.leading_arc(s, p0), 2 * 1.5 * np.arctanh(cf.t_of_s(s, p0)), rtol=1e-12)


@pytest.mark.parametrize("w0", [1.0, 0.0])
def test_leading_arc_continuous_across_branches(w0):
    s = np.linspace(0.05, 3.0, 30)
    exact = cf.leading_arc(s, LeashParams.from_w(w0, 1.0))
    for dw in (1e-6, -1e-6):
        near = cf.leading_arc(s, LeashParams.from_w(w0 + dw, 1.0))
        assert np.max(np.abs(near - exact)) < 1e-4


def test_leading_arc_far_out_stays_finite():
    # evaluated in s rather than t, so the approach to the asymptote cannot overflow;
    # far out the leading point runs ahead at the rate 1/cos(nu*)
    p = LeashParams.from_w(0.5, 1.0)
    a, b = cf.leading_arc(np.array([1e3, 1e4]), p)
    assert (b - a) / 9e3 == pytest.approx(1 / math.sqrt(1 - 0.25), rel=1e-12)
    with pytest.raises(ValueError):
        cf.leading_arc(math.inf, p)


def test_psi_examples():
    s = np.linspace(0.0, 4.0, 40)
    assert np.all(cf.psi_of_s(s, LeashParams.from_w(0.0, 1.0)) == 0.0)
    assert cf.psi_of_s(0.0, LeashParams.from_w(0.6, 1.0)) == 0.0
    psi5 = cf.psi_of_s(s[1:], LeashParams.from_w(-0.5, 1.0))
    assert np.all(psi5 < 0) and np.all(np.diff(psi5) < 0)


# --------------------------------------------------------------- cartesian

@pytest.mark.parametrize("w, T, s, l, x, y", FROZEN_POSITIONS)
def test_trace_cartesian_frozen(w, T, s, l, x, y):
    tr = cf.trace_cartesian(LeashParams.from_w(w, T), [s])
    assert_allclose([tr.l[0], tr.x[0], tr.y[0]], [l, x, y], atol=1e-12)


@pytest.mark.parametrize("w", [3.0, 1.0, 0.5, 0.0, -0.5])
def test_trace_start_pose(w):
    tr = cf.trace_cartesian(LeashParams.from_w(w, 2.0), [0.0, 0.1])
    assert (tr.x[0], tr.y[0]) == (2.0, 0.0)
    assert tr.tau[0] == pytest.approx(math.pi)
    assert tr.k[0] == -math.inf


@given(w_any, T_pos)
@settings(max_examples=40, deadline=None)
def test_leash_constraint_and_tangent(w, T):
    p = LeashParams.from_w(w, T)
    s = np.linspace(0, min(cf.arc_limit(p), 8 * T), 60)
    tr = cf.trace_cartesian(p, s)
    ax, ay = tr.meta["leading_x"], tr.meta["leading_y"]
    d = np.hypot(tr.x - ax, tr.y - ay)
    assert np.max(np.abs(d - T)) <= 1e-10 * max(1.0, T)
    # the tangent points along the leash, from B to A
    ok = np.hypot(ax - tr.x, ay - tr.y) > 0
    ang = np.arctan2(ay - tr.y, ax - tr.x)[ok]
    dev = np.abs(np.angle(np.exp(1j * (ang - tr.tau[ok]))))
    assert np.max(dev) < 1e-9


def test_line_tractrix_parametric_agrees():
    p = LeashParams.from_w(0.0, 1.0)
    s = np.linspace(0.0, 4.0, 30)
    tr = cf.trace_cartesian(p, s)
    x, y = cf.line_tractrix_parametric(cf.t_of_s(s, p), 1.0)
    assert_allclose(tr.x, x, atol=1e-12)
    assert_allclose(tr.y, y, atol=1e-12)


def test_line_tractrix_explicit():
    assert cf.line_tractrix_explicit(1.0, 1.0) == 0.0
    assert cf.line_tractrix_explicit(0.5, 1.0) == pytest.approx(0.45093249314037806186, abs=1e-15)
    assert cf.line_tractrix_explicit(1e-12, 1.0) > 25
    tr = cf.trace_cartesian(LeashParams.from_w(0.0, 2.0), np.linspace(0.01, 5, 40))
    assert_allclose(cf.line_tractrix_explicit(tr.x, 2.0), tr.y, atol=1e-9)
    for bad in (0.0, -1.0, 1.5):
        with pytest.raises(ValueError):
            cf.line_tractrix_explicit(bad, 1.0)


def test_trace_cartesian_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        cf.trace_cartesian(LeashParams.from_w(0.5, 1.0), [0.0, 2.0, 1.0])


def test_finite_tractrix_terminates():
    p = LeashParams.from_w(2.0, 1.0)
    tr = cf.trace_cartesian(p, np.linspace(0, cf.arc_limit(p), 10))
    assert tr.termination.value == "stopped"
    assert tr.k[-1] == math.inf


@pytest.mark.parametrize("w", [0.3, 0.8, -0.6])
def test_asymptotic_approach_to_trivial_circle(w):
    p = LeashParams.from_w(w, 1.0)
    triv = cf.trivial_tractrix(p)
    tr = cf.trace_cartesian(p, np.array([5.0, 10.0, 20.0]))
    d = np.abs(np.hypot(tr.x - triv.center.x, tr.y - triv.center.y) - triv.radius)
    assert d[0] > d[1] > d[2] and d[2] < 1e-6


def test_line_asymptote():
    tr = cf.trace_cartesian(LeashParams.from_w(0.0, 1.0), np.array([5.0, 10.0, 20.0]))
    assert tr.x[0] > tr.x[1] > tr.x[2] > 0 and tr.x[2] < 1e-8


def test_mirror_branch_is_reflection():
    s = np.linspace(0, 3, 20)
    a = cf.trace_cartesian(LeashParams.from_w(0.5, 1.0), s)
    b = cf.trace_cartesian(LeashParams.from_w(0.5, 1.0, sign_branch=-1), s)
    assert_allclose(b.x, a.x) and assert_allclose(b.y, -a.y)


# ------------------------------------------------------------------- polar

@pytest.mark.parametrize("w", [2.0, 1.0, 0.5, -0.5])
def test_polar_matches_cartesian(w):
    p = LeashParams.from_w(w, 1.0)
    S1 = cf.arc_limit(p)
    s = np.linspace(0.0, min(0.999 * S1, 8.0), 80)
    tr = cf.trace_cartesian(p, s)
    pts = np.array([pp.to_cartesian() for pp in cf.trace_polar(p, cf.t_of_s(s, p))])
    assert np.max(np.hypot(pts[:, 0] - tr.x, pts[:, 1] - tr.y)) < 1e-8


def test_polar_examples():
    p = LeashParams.from_w(0.5, 1.0)
    pp = cf.trace_polar(p, [0.0])[0]
    assert pp.p == pytest.approx(p.R * 1.5) and pp.phi == 0.0
    t = np.linspace(0, 5, 11)
    assert_allclose([q.phi for q in cf.trace_polar(LeashParams.from_w(1.0, 1.0), t)], t - np.arctan(t))
    with pytest.raises(ValueError):
        cf.trace_polar(p, [cf._t_limit(0.5)])
    with pytest.raises(ValueError):
        cf.trace_polar(LeashParams.from_w(0.0, 1.0), [0.1])


def test_hyperbolic_form_agrees_at_t1():
    w = 2.0
    p = LeashParams.from_w(w, 1.0)
    pp = cf.trace_polar(p, [1.0])[0]
    ph, phih = cf.polar_t1_hyperbolic(1.0, w, 1.0)
    assert abs(ph - pp.p) < 1e-12 and abs(phih - pp.phi) < 1e-12


@pytest.mark.parametrize("w", [0.3, 0.7, -0.4])
def test_trigonometric_form_agrees(w):
    p = LeashParams.from_w(w, 1.0)
    t = np.linspace(0, 0.95 * cf._t_limit(w), 20)
    pts = cf.trace_polar(p, t)
    pr, phr = cf.polar_t35_trigonometric(t, w, 1.0)
    assert_allclose(pr, [q.p for q in pts], atol=1e-12)
    assert_allclose(phr, [q.phi for q in pts], atol=1e-12)


def test_spiral_polar_explicit():
    assert cf.spiral_polar_explicit(2.0, 1.0) == 0.0
    assert cf.spiral_polar_explicit(math.sqrt(2.0), 1.0) == pytest.approx(1 - math.pi / 4, abs=1e-15)
    assert cf.spiral_polar_explicit(1e-9, 1.0) > 1e8
    with pytest.raises(ValueError):
        cf.spiral_polar_explicit(2.5, 1.0)


def test_spiral_explicit_matches_parametric():
    p = LeashParams.from_w(1.0, 1.0)
    pts = cf.trace_polar(p, np.linspace(0.01, 30, 200))
    r = np.array([q.p for q in pts])
    assert_allclose(cf.spiral_polar_explicit(r, 1.0), [q.phi for q in pts], atol=1e-8)


def test_sector_width():
    assert cf.sector_width(2.0) == pytest.approx(0.48600607487864246273, abs=1e-15)
    assert cf.sector_width(2.0) == pytest.approx(float(cf._polar_phi(1e12, 2.0)), abs=1e-10)
    assert cf.sector_width(1e8) == pytest.approx(math.pi / 2 * 1e-16, rel=1e-12)
    assert cf.sector_width(1 + 1e-12) > 1e5
    with pytest.raises(ValueError):
        cf.sector_width(1.0)


def test_star_shape_parameter():
    assert cf.star_shape_parameter(Fraction(1, 2)) == pytest.approx(2 / math.sqrt(3))
    assert cf.star_shape_parameter(1e-9) > 1e3
    with pytest.raises(ValueError):
        cf.star_shape_parameter(0)


@given(st.fractions(min_value=Fraction(1, 40), max_value=3, max_denominator=40))
def test_star_round_trip(r):
    assert cf.sector_width(cf.star_shape_parameter(r)) == pytest.approx(2 * math.pi * float(r), abs=1e-12)


@pytest.mark.parametrize("r", [Fraction(1, 5), Fraction(2, 5), Fraction(1, 3)])
def test_star_closes(r):
    gap, n = cf.star_closure_gap(r)
    assert gap < 1e-9 and n >= 1


# ---------------------------------------------------------------- reversal

def test_reverse_identity_examples():
    w = 3.0
    S1 = cf.arc_limit(w, 1.0)
    assert cf.reverse_identity_check(w, 1.0, [S1 / 2]) <= 1e-15
    assert cf.reverse_identity_check(2.0, 1.0, np.linspace(0, cf.arc_limit(2.0, 1.0), 102)[1:-1]) <= 1e-10
    assert cf.reverse_identity_check(1.5, 0.7) <= 1e-10
    with pytest.raises(ValueError):
        cf.reverse_identity_check(0.5, 1.0)


# ----------------------------------------------------------------- trivial

def test_trivial_tractrix():
    p = LeashParams(T=3.0, K=0.2)
    tt = cf.trivial_tractrix(p)
    assert tt.radius == pytest.approx(4.0)
    assert tt.curvature == pytest.approx(1 / math.sqrt(25 - 9))
    assert cf.trivial_tractrix(LeashParams(T=1e-8, K=0.2)).radius == pytest.approx(5.0)
    assert cf.trivial_tractrix(LeashParams(T=1.0, K=0.0)).is_line
    with pytest.raises(ValueError):
        cf.trivial_tractrix(LeashParams.from_w(2.0, 1.0))


def test_circle_tractrix_descriptor():
    ct = cf.circle_tractrix(LeashParams.from_w(2.0, 1.0))
    assert ct.tractrix_class is TractrixClass.T1
    assert ct.S1 == pytest.approx(math.log(3.0))
    assert ct.center == (-0.5, 0.0)
    assert cf.circle_tractrix(LeashParams.from_w(0.0, 1.0)).center is None
    lead = ct.leading_curve()
    assert lead.at(0.0).theta == pytest.approx(math.pi / 2)
