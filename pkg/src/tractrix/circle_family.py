"""Closed-form tractrices of circles and straight lines.

Everything here follows one canonical placement: the leading circle (or line)
leaves the origin heading north (+y), the followed point starts at ``(T, 0)``
with tangent direction ``pi``.  Other placements are rigid motions of this one.

The curves are indexed by the shape parameter ``w = +-K T`` and, along the
curve, by the tractrix arc length ``s``.  The auxiliary angle ``xi = nu + pi/2``
and ``t = tan(xi / 2)`` both start at zero.

All evaluators accept scalars or numpy arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .geometry import Point2, Termination, Trace, wrap_angles
from . import curves

__all__ = [
    "LeashParams",
    "TractrixClass",
    "CircleTractrix",
    "PolarPoint",
    "TrivialTractrix",
    "classify",
    "circle_tractrix",
    "kplus",
    "natural_curvature",
    "arc_limit",
    "inflection_arc",
    "xi_of_s",
    "t_of_s",
    "leading_arc",
    "psi_of_s",
    "nu_of_l",
    "s_of_xi",
    "trace_cartesian",
    "line_tractrix_explicit",
    "line_tractrix_parametric",
    "trace_polar",
    "polar_t1_hyperbolic",
    "polar_t35_trigonometric",
    "spiral_polar_explicit",
    "sector_width",
    "star_shape_parameter",
    "star_points",
    "star_closure_gap",
    "reverse_identity_check",
    "trivial_tractrix",
]

# below this distance from w = 1 the arc function switches to its series
_SERIES_BAND = 1e-8


class TractrixClass(enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    TRIVIAL = "Trivial"
    REVERSE = "Reverse"

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    TractrixClass.T1: "external, long leash",
    TractrixClass.T2: "polar/spiral",
    TractrixClass.T3: "external, short leash",
    TractrixClass.T4: "tractrix of a line",
    TractrixClass.T5: "internal",
    TractrixClass.TRIVIAL: "trivial",
    TractrixClass.REVERSE: "reverse",
}


def classify(w: float, T: float = 1.0) -> TractrixClass:
    """Type of the circle tractrix with shape parameter ``w`` and signed leash ``T``."""
    w = float(w)
    T = float(T)
    if not (math.isfinite(w) and math.isfinite(T)) or T == 0.0:
        raise ValueError("w and T must be finite and T non-zero")
    if T < 0.0:
        if w < -1.0:
            return TractrixClass.REVERSE
        raise ValueError(f"a negative leash requires w < -1 (reverse tractrix), got w={w}")
    if w <= -1.0:
        raise ValueError(f"w must satisfy w > -1 for a positive leash, got w={w}")
    if w > 1.0:
        return TractrixClass.T1
    if w == 1.0:
        return TractrixClass.T2
    if w > 0.0:
        return TractrixClass.T3
    if w == 0.0:
        return TractrixClass.T4
    return TractrixClass.T5


@dataclass(frozen=True)
class LeashParams:
    """Leash length ``T``, leading curvature ``K`` and the curvature branch.

    ``sign_branch=+1`` selects the increasing-curvature solution (``w = K T``),
    ``-1`` the mirrored one (``w = -K T``).  ``T < 0`` is only meaningful for
    the reverse tractrix (``w < -1``).
    """

    T: float
    K: float
    sign_branch: int = 1

    def __post_init__(self):
        if self.sign_branch not in (1, -1):
            raise ValueError("sign_branch must be +1 or -1")
        classify(self.w, self.T)

    @classmethod
    def from_w(cls, w: float, T: float = 1.0, sign_branch: int = 1) -> "LeashParams":
        return cls(T=float(T), K=sign_branch * float(w) / float(T), sign_branch=sign_branch)

    @property
    def w(self) -> float:
        w = self.sign_branch * self.K * self.T
        return 0.0 if w == 0.0 else w

    @property
    def R(self) -> float:
        return math.inf if self.K == 0.0 else 1.0 / abs(self.K)

    @property
    def tractrix_class(self) -> TractrixClass:
        return classify(self.w, self.T)


def arc_limit(params: LeashParams | float, T: float | None = None) -> float:
    """Length of the tractrix: finite only for ``|w| > 1``."""
    w, T = _wT(params, T)
    classify(w, T)
    if abs(w) > 1.0:
        return T * math.log((w + 1.0) / (w - 1.0))
    return math.inf


def inflection_arc(params: LeashParams | float, T: float | None = None) -> float | None:
    """Arc length of the inflection point, present for ``w > 0``."""
    w, T = _wT(params, T)
    classify(w, T)
    if w > 0.0 and T > 0.0:
        return T * math.log((w + 1.0) / w)
    return None


def _wT(params, T):
    if isinstance(params, LeashParams):
        return params.w, params.T
    if T is None:
        raise TypeError("T is required when w is given directly")
    return float(params), float(T)


class _Xi(NamedTuple):
    one_minus_cos: np.ndarray
    one_plus_cos: np.ndarray
    cos: np.ndarray
    sin: np.ndarray
    e: np.ndarray


def _xi_parts(s, w, T, check=True) -> _Xi:
    s = np.asarray(s, dtype=float)
    if check:
        if np.any(~np.isfinite(s)) or np.any(s < 0.0):
            raise ValueError("arc length s must be finite and non-negative")
        S1 = arc_limit(w, T)
        if np.any(s > S1 * (1.0 + 1e-12)):
            raise ValueError(f"arc length beyond the end of the curve (S1={S1})")
    with np.errstate(over="ignore"):
        e = np.exp(-s / T)
    om = (1.0 + w) * -np.expm1(-s / T)
    op = (1.0 - w) + (1.0 + w) * e
    op = np.where(op < 0.0, 0.0, op)
    om = np.where(om < 0.0, 0.0, om)
    cos = 0.5 * (op - om)
    sin = np.sqrt(om * op)
    return _Xi(om, op, cos, sin, e)


def kplus(s, w: float, T: float):
    """Increasing branch of the natural equation, ``k+(s; w, T)``.

    The denominator uses ``|T|``: with a negative (pushing) leash the
    leash-angle cosine is negative as well.
    """
    X = _xi_parts(s, w, T)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = -X.cos / (abs(T) * X.sin)
    k = np.where(X.sin == 0.0, np.copysign(np.inf, -X.cos), k)
    return k if k.ndim else float(k)


def natural_curvature(s, params: LeashParams):
    """Signed curvature of the tractrix at arc length ``s``."""
    return params.sign_branch * kplus(s, params.w, params.T)


def xi_of_s(s, params: LeashParams):
    X = _xi_parts(s, params.w, params.T)
    xi = np.arctan2(X.sin, X.cos)
    return xi if xi.ndim else float(xi)


def t_of_s(s, params: LeashParams):
    X = _xi_parts(s, params.w, params.T)
    with np.errstate(divide="ignore"):
        t = np.sqrt(X.one_minus_cos / X.one_plus_cos)
    return t if t.ndim else float(t)


def s_of_xi(xi, params: LeashParams):
    """Inverse of :func:`xi_of_s`."""
    w, T = params.w, params.T
    xi = np.asarray(xi, dtype=float)
    c = np.cos(xi)
    s = -T * np.log((c + w) / (1.0 + w))
    s = np.where(xi == 0.0, 0.0, s)
    return s if s.ndim else float(s)


def _arc_from_parts(X: _Xi, w: float, T: float, s):
    """Leading arc length as a function of the tractrix arc."""
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.sqrt(X.one_minus_cos / X.one_plus_cos)
    if abs(w - 1.0) < _SERIES_BAND:
        eps = 1.0 - w
        t2 = t * t
        series_ok = np.abs(eps) * (1.0 + t2) < 1e-3
        h = 0.5 * eps
        series = T * (t + h * (t + t2 * t / 3.0) + h * h * (t + 2.0 * t2 * t / 3.0 + t2 * t2 * t / 5.0))
        if w == 1.0:
            return series
        exact = _arc_general(X, w, T, t, s)
        return np.where(series_ok, series, exact)
    if w == 1.0:
        return T * t
    return _arc_general(X, w, T, t, s)


def _arc_general(X: _Xi, w, T, t, s):
    if abs(w) > 1.0:
        r = math.sqrt(w * w - 1.0)
        with np.errstate(invalid="ignore"):
            return 2.0 * T / r * np.arctan((w - 1.0) / r * t)
    # |w| < 1: artanh written so that it stays accurate as t approaches its limit
    s = np.asarray(s, dtype=float)
    D = X.one_plus_cos
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.sqrt((1.0 - w) / (1.0 + w) * X.one_minus_cos / D)
        ath = np.log1p(a) - 0.5 * (math.log(2.0) - s / T - np.log(D))
    ath = np.where(s == 0.0, 0.0, ath)
    return 2.0 * T / math.sqrt(1.0 - w * w) * ath


def leading_arc(s, params: LeashParams):
    """Arc length ``l`` travelled by the leading point while the tractrix covers ``s``."""
    w, T = params.w, params.T
    X = _xi_parts(s, w, T)
    l = _arc_from_parts(X, w, T, s)
    l = np.asarray(l, dtype=float)
    if np.any(~np.isfinite(l)):
        raise OverflowError("leading arc overflowed: s is too close to the asymptotic limit")
    return l if l.ndim else float(l)


def psi_of_s(s, params: LeashParams):
    """Angle swept by the leading point about the circle centre, ``(w / T) l(s)``."""
    psi = np.asarray(params.w / params.T * np.asarray(leading_arc(s, params)))
    return psi if psi.ndim else float(psi)


def nu_of_l(l, params: LeashParams):
    """Exact leash angle as a function of the leading arc (k+ placement)."""
    w, T = params.w, params.T
    l = np.asarray(l, dtype=float)
    if w == 1.0:
        t = l / T
    elif abs(w) > 1.0:
        r = math.sqrt(w * w - 1.0)
        t = np.tan(0.5 * l * r / T) * r / (w - 1.0)
    else:
        r = math.sqrt(1.0 - w * w)
        t = np.tanh(0.5 * l * r / T) * math.sqrt((1.0 + w) / (1.0 - w))
    nu = 2.0 * np.arctan(t) - 0.5 * math.pi
    return nu if nu.ndim else float(nu)


@dataclass(frozen=True)
class CircleTractrix:
    params: LeashParams
    tractrix_class: TractrixClass
    S1: float
    s0: float | None

    def trace(self, s_grid) -> Trace:
        return trace_cartesian(self.params, s_grid)

    def leading_curve(self):
        """The leading circle or line in the canonical placement."""
        p = self.params
        if p.sign_branch == 1:
            return curves.circle(p.K)
        return curves.circle(p.K, heading=-0.5 * math.pi)

    @property
    def center(self) -> Point2 | None:
        """Centre of the leading circle (``None`` for a line)."""
        if self.params.w == 0.0:
            return None
        return Point2(-self.params.T / self.params.w, 0.0)


def circle_tractrix(params: LeashParams) -> CircleTractrix:
    return CircleTractrix(params, params.tractrix_class, arc_limit(params), inflection_arc(params))


def trace_cartesian(params: LeashParams, s_grid) -> Trace:
    """Exact trace in the canonical placement, sampled at the given arc lengths."""
    w, T = params.w, params.T
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    if s.size > 1 and np.any(np.diff(s) <= 0.0):
        raise ValueError("s_grid must be strictly increasing")
    X = _xi_parts(s, w, T)
    l = np.asarray(_arc_from_parts(X, w, T, s), dtype=float)
    xi = np.arctan2(X.sin, X.cos)
    if w == 0.0:
        psi = np.zeros_like(s)
        with np.errstate(divide="ignore"):
            log_term = np.log1p(X.sin) - np.log(X.cos)
        x = T * X.cos
        y = -T * X.sin + T * log_term
        ux, uy = np.zeros_like(s), l
    elif w >= 1.0:
        # about the centre: B - C = T e^{i psi} (1/w + e^{-i xi}); the modulus stays
        # accurate even when l (hence psi) has grown beyond double precision
        psi = w / T * l
        c, sn = np.cos(psi), np.sin(psi)
        re = X.one_plus_cos + (1.0 / w - 1.0)
        im = -X.sin
        cx = -T / w
        ux, uy = cx + T / w * c, T / w * sn
        x = cx + T * (c * re - sn * im)
        y = T * (sn * re + c * im)
    else:
        psi = w / T * l
        half = 0.5 * psi
        sinc_half = np.sinc(half / np.pi)
        g1 = -0.5 * w * (l / T) ** 2 * sinc_half ** 2      # (cos psi - 1) / w
        g2 = (l / T) * np.sinc(psi / np.pi)                 # sin psi / w
        ux, uy = T * g1, T * g2
        x = ux + T * np.cos(psi - xi)
        y = uy + T * np.sin(psi - xi)
    tau = np.pi + psi - xi
    nu = xi - 0.5 * np.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        k = -X.cos / (abs(T) * X.sin)
    k = np.where(X.sin == 0.0, np.copysign(np.inf, -X.cos), k)
    if params.sign_branch == -1:
        y, uy, tau, nu, k = -y, -uy, -tau, -nu, -k
    S1 = arc_limit(params)
    term = Termination.STOPPED if math.isfinite(S1) and s[-1] >= S1 else Termination.REACHED_LENGTH
    return Trace(
        l=l, s=s, nu=nu, x=x, y=y, tau=tau, k=k,
        leash=np.full_like(s, T),
        termination=term,
        meta={
            "class": params.tractrix_class.value,
            "w": w,
            "T": T,
            "S1": S1,
            "s0": inflection_arc(params),
            "leading_x": ux,
            "leading_y": uy,
            "psi": psi,
        },
    )


def line_tractrix_explicit(x, T: float):
    """``y(x)`` of the line tractrix whose asymptote is the y-axis."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x > T):
        raise ValueError("x must lie in (0, T]")
    r = np.sqrt(1.0 - (x / T) ** 2)
    with np.errstate(divide="ignore"):
        y = T * (np.arctanh(r) - r)
    return y if y.ndim else float(y)


def line_tractrix_parametric(t, T: float):
    """Line tractrix in the parameter ``t = tan(xi / 2)``, ``0 <= t < 1``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t >= 1.0):
        raise ValueError("t must lie in [0, 1)")
    x = T * (1.0 - t * t) / (1.0 + t * t)
    y = T * np.log((1.0 + t) / (1.0 - t)) - 2.0 * T * t / (1.0 + t * t)
    return x, y


class PolarPoint(NamedTuple):
    """Polar sample about ``pole``; ``flipped`` adds the half-turn used for internal tractrices."""

    p: float
    phi: float
    pole: Point2
    flipped: bool = False

    def to_cartesian(self) -> Point2:
        a = self.phi + (math.pi if self.flipped else 0.0)
        return Point2(self.pole.x + self.p * math.cos(a), self.pole.y + self.p * math.sin(a))


def _t_limit(w: float) -> float:
    if w >= 1.0:
        return math.inf
    return math.sqrt((1.0 + w) / (1.0 - w))


def _polar_phi(t, w):
    if w == 1.0:
        return t - np.arctan(t)
    if w > 1.0:
        c = (w - 1.0) / (w + 1.0)
        return (2.0 * w / math.sqrt(w * w - 1.0) * np.arctan(math.sqrt(c) * t)
                - np.arctan(c * t) - np.arctan(t))
    c = (1.0 - w) / (1.0 + w)
    return (2.0 * w / math.sqrt(1.0 - w * w) * np.arctanh(math.sqrt(c) * t)
            + np.arctan(c * t) - np.arctan(t))


def polar_radius(t, params: LeashParams):
    w = params.w
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        cos_xi = np.where(np.isinf(t), -1.0, (1.0 - t * t) / (1.0 + t * t))
    return params.R * np.sqrt(1.0 + 2.0 * w * cos_xi + w * w)


def trace_polar(params: LeashParams, t_grid) -> list[PolarPoint]:
    """Polar samples about the centre of the leading circle."""
    w = params.w
    if w == 0.0:
        raise ValueError("the line tractrix has no polar form about a centre")
    if params.T < 0.0:
        raise ValueError("polar forms are given for positive leashes only")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    lim = _t_limit(w)
    if np.any(t < 0.0) or (w <= 1.0 and np.any(t >= lim)):
        raise ValueError(f"t outside the branch domain [0, {_t_limit(w)})")
    p = polar_radius(t, params)
    phi = _polar_phi(t, w)
    pole = Point2(-params.T / w, 0.0)
    if params.sign_branch == -1:
        phi = -phi
    flipped = w < 0.0
    return [PolarPoint(float(a), float(b), pole, flipped) for a, b in zip(p, phi)]


def polar_t1_hyperbolic(t, w: float, T: float = 1.0):
    """External long-leash tractrix with ``w = cosh(omega)``, ``q = tanh(omega / 2)``."""
    if w <= 1.0:
        raise ValueError("requires w > 1")
    t = np.asarray(t, dtype=float)
    q = math.tanh(0.5 * math.acosh(w))
    R = T / w
    p = 2.0 * R / (1.0 - q * q) * np.sqrt((1.0 + q ** 4 * t * t) / (1.0 + t * t))
    phi = (q + 1.0 / q) * np.arctan(q * t) - np.arctan(q * q * t) - np.arctan(t)
    return p, phi


def polar_t35_trigonometric(t, w: float, T: float = 1.0):
    """Short-leash tractrices with ``w = cos(omega)``, ``q = tan(omega / 2)``."""
    if not (-1.0 < w < 1.0) or w == 0.0:
        raise ValueError("requires 0 < |w| < 1")
    t = np.asarray(t, dtype=float)
    q = math.tan(0.5 * math.acos(w))
    R = abs(T / w)
    p = 2.0 * R / (1.0 + q * q) * np.sqrt((1.0 + q ** 4 * t * t) / (1.0 + t * t))
    phi = (1.0 / q - q) * np.arctanh(q * t) + np.arctan(q * q * t) - np.arctan(t)
    return p, phi


def spiral_polar_explicit(p, T: float):
    """Polar angle of the spiral tractrix (``w = 1``) as a function of radius."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p > 2.0 * T):
        raise ValueError("p must lie in (0, 2T]")
    r = np.sqrt(np.maximum(4.0 * T * T - p * p, 0.0))
    phi = -np.arccos(np.minimum(p / (2.0 * T), 1.0)) + r / p
    return phi if phi.ndim else float(phi)


def sector_width(w: float) -> float:
    """Polar sector spanned by the finite tractrix (``w > 1``)."""
    if not w > 1.0:
        raise ValueError("sector width is defined for w > 1")
    if math.isinf(w):
        return 0.0
    # w / sqrt(w^2 - 1) - 1 without cancellation for large w
    return math.pi * math.expm1(-0.5 * math.log1p(-1.0 / (w * w)))


def star_shape_parameter(ratio) -> float:
    """``w`` whose sector width equals ``2 pi * ratio``."""
    r = Fraction(ratio) if not isinstance(ratio, float) else ratio
    if r <= 0:
        raise ValueError("ratio must be positive")
    m = 1.0 + 2.0 * float(r)
    return m / math.sqrt(m * m - 1.0)


def star_points(w: float, T: float, n_periods: int, per_branch: int = 200) -> np.ndarray:
    """Push-pull continuation of the finite tractrix, about the circle centre.

    One period covers ``xi`` in ``[-pi, pi]``: the reversed mirror branch
    followed by the branch itself; consecutive periods are rotated by twice
    the sector width.
    """
    params = LeashParams.from_w(w, T)
    R = params.R
    dphi = sector_width(w)
    pts = []
    for k in range(n_periods):
        xi = np.linspace(-np.pi, np.pi, 2 * per_branch + 1)
        if k:
            xi = xi[1:]
        t = np.tan(0.5 * xi)
        phi = np.where(np.abs(xi) == np.pi, np.sign(xi) * dphi, _polar_phi(np.abs(t), w) * np.sign(xi))
        phi = phi + 2 * k * dphi
        p = R * np.sqrt(1.0 + 2.0 * w * np.cos(xi) + w * w)
        pts.append(np.column_stack([p * np.cos(phi), p * np.sin(phi)]))
    return np.vstack(pts)


def star_closure_gap(ratio, T: float = 1.0) -> tuple[float, int]:
    """Distance between start and end of the smallest closing star, and its period count."""
    r = Fraction(ratio).limit_denominator(10 ** 6)
    w = star_shape_parameter(r)
    n = r.denominator // math.gcd(2 * r.numerator, r.denominator)
    pts = star_points(w, T, n, per_branch=50)
    return float(np.hypot(*(pts[-1] - pts[0]))), n


def reverse_identity_check(w: float, T: float, s_grid=None) -> float:
    """Max deviation of ``-k+(S1 - s; w, T)`` from ``k+(s; -w, -T)`` over ``s_grid``."""
    if not w > 1.0:
        raise ValueError("reversal identity needs a finite tractrix, w > 1")
    S1 = arc_limit(w, T)
    if s_grid is None:
        s_grid = np.linspace(0.0, S1, 102)[1:-1]
    s = np.asarray(s_grid, dtype=float)
    lhs = -kplus(S1 - s, w, T)
    rhs = kplus(s, -w, -T)
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class TrivialTractrix:
    """Constant-angle solution: a concentric circle, or the leading line itself."""

    center: Point2 | None
    radius: float
    nu: float
    curvature: float
    start: Point2

    @property
    def is_line(self) -> bool:
        return self.center is None


def trivial_tractrix(params: LeashParams) -> TrivialTractrix:
    w, T, K = params.w, params.T, params.K
    if not abs(K * T) < 1.0:
        raise ValueError("the trivial tractrix needs |K T| < 1")
    nu = math.asin(K * T)
    tau = 0.5 * math.pi - nu
    start = Point2(-T * math.cos(tau), -T * math.sin(tau))
    if K == 0.0:
        return TrivialTractrix(None, math.inf, 0.0, 0.0, start)
    R = 1.0 / abs(K)
    center = Point2(-1.0 / K, 0.0)
    return TrivialTractrix(center, math.sqrt(R * R - T * T), nu, math.tan(nu) / T, start)
