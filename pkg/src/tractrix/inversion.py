"""Pencils of asymptotic circles, inversion dualities and orthogonal trajectories."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .circle_family import LeashParams, arc_limit, trace_cartesian
from .geometry import LeadingCurve, Point2, Trace

__all__ = [
    "GeneralizedCircle",
    "PencilSpec",
    "InversionSpec",
    "pencil_asymptotic_circle",
    "pencil_foci",
    "pencil_residual",
    "apply_inversion",
    "inversion_jacobian_image",
    "angle_preservation",
    "distance_to_polyline",
    "verify_t3_t5_duality",
    "verify_t1_reverse",
    "verify_t2_involute",
    "verify_orthogonality",
]


@dataclass(frozen=True)
class GeneralizedCircle:
    """Zero set of ``a (x^2 + y^2) + b x + c y + d``; a line when ``a == 0``."""

    a: float
    b: float
    c: float
    d: float

    def __call__(self, x, y):
        return self.a * (x * x + y * y) + self.b * x + self.c * y + self.d

    @property
    def is_line(self) -> bool:
        return self.a == 0.0

    @property
    def center(self) -> Point2:
        if self.is_line:
            raise ValueError("a line has no centre")
        return Point2(-self.b / (2.0 * self.a), -self.c / (2.0 * self.a))

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        cx, cy = self.center
        r2 = cx * cx + cy * cy - self.d / self.a
        if r2 < 0.0:
            raise ValueError("imaginary circle")
        return math.sqrt(r2)

    def sample(self, n: int = 64, extent: float = 10.0) -> np.ndarray:
        """Points on the circle, or on ``extent``-long stretch of the line."""
        if self.is_line:
            nrm = math.hypot(self.b, self.c)
            ux, uy = self.b / nrm, self.c / nrm
            p0 = np.array([-self.d * ux / nrm, -self.d * uy / nrm])
            u = np.linspace(-0.5 * extent, 0.5 * extent, n)
            return p0 + u[:, None] * np.array([-uy, ux])
        cx, cy = self.center
        r = self.radius
        a = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return np.column_stack([cx + r * np.cos(a), cy + r * np.sin(a)])


@dataclass(frozen=True)
class PencilSpec:
    """Short-leash tractrices sharing a leash and the canonical start pose."""

    T: float
    w_grid: tuple = (-0.8, -0.4, 0.0, 0.4, 0.8)
    start: tuple = field(default=(None, None, math.pi))

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError("pencil leash must be positive")
        if any(not -1.0 < w < 1.0 for w in self.w_grid):
            raise ValueError("pencil members need |w| < 1")
        if self.start[0] is None:
            object.__setattr__(self, "start", (self.T, 0.0, math.pi))

    def circles(self) -> list[GeneralizedCircle]:
        return [pencil_asymptotic_circle(w, self.T) for w in self.w_grid]

    def traces(self, s_max: float = 10.0, n: int = 400) -> list[Trace]:
        s = np.linspace(0.0, s_max * self.T, n)
        return [trace_cartesian(LeashParams.from_w(w, self.T), s) for w in self.w_grid]


def pencil_asymptotic_circle(w: float, T: float) -> GeneralizedCircle:
    """Asymptotic circle (limit circle) of the short-leash tractrix ``w``.

    All of them satisfy ``w (x^2 + y^2 + T^2) + 2 T x = 0`` (the factor ``T``
    on the linear term is often dropped by writing lengths in units of the
    leash); ``w = 0`` gives the asymptote ``x = 0`` of the line tractrix.
    """
    if not -1.0 < w < 1.0:
        raise ValueError("asymptotic circles exist for |w| < 1")
    return GeneralizedCircle(w, 2.0 * T, 0.0, w * T * T)


def pencil_foci(T: float) -> tuple[Point2, Point2]:
    """Limit points of the hyperbolic pencil; the radical axis is ``x = 0``."""
    return Point2(-T, 0.0), Point2(T, 0.0)


def pencil_residual(w: float, T: float, n: int = 64) -> float:
    """Largest value of the family equation on points built from centre and radius."""
    circ = pencil_asymptotic_circle(w, T)
    if w == 0.0:
        pts = circ.sample(n, extent=20.0 * T)
    else:
        cx, r = -T / w, T * math.sqrt(1.0 - w * w) / abs(w)
        a = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        pts = np.column_stack([cx + r * np.cos(a), r * np.sin(a)])
    x, y = pts[:, 0], pts[:, 1]
    return float(np.max(np.abs(w * (x * x + y * y + T * T) + 2.0 * T * x)))


@dataclass(frozen=True)
class InversionSpec:
    """Inversion of power ``I2`` about ``center``; negative power adds a half-turn."""

    center: Point2
    power: float

    def __post_init__(self):
        if self.power == 0.0 or not math.isfinite(self.power):
            raise ValueError("inversion power must be finite and non-zero")
        object.__setattr__(self, "center", Point2(*self.center))

    @classmethod
    def for_circle(cls, w: float, T: float = 1.0) -> "InversionSpec":
        """Inversion about the leading circle centre with ``I2 = R^2 - T^2``."""
        params = LeashParams.from_w(w, T)
        R = params.R
        return cls(Point2(-T / w, 0.0), R * R - T * T)


def apply_inversion(spec: InversionSpec, p):
    """Image of a point (or of arrays ``(x, y)``)."""
    x, y = np.asarray(p[0], dtype=float), np.asarray(p[1], dtype=float)
    dx, dy = x - spec.center.x, y - spec.center.y
    r2 = dx * dx + dy * dy
    if np.any(r2 == 0.0):
        raise ValueError("the centre of inversion has no image")
    f = spec.power / r2
    ox, oy = spec.center.x + f * dx, spec.center.y + f * dy
    if ox.ndim == 0:
        return Point2(float(ox), float(oy))
    return ox, oy


def inversion_jacobian_image(spec: InversionSpec, p, v):
    """Image of the tangent vector ``v`` at ``p`` under the inversion."""
    d = np.array([p[0] - spec.center.x, p[1] - spec.center.y])
    v = np.asarray(v, dtype=float)
    r2 = d @ d
    return spec.power / r2 * (v - 2.0 * (v @ d) / r2 * d)


def _angle(u, v) -> float:
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])


def angle_preservation(spec: InversionSpec, p, u, v, h: float = 1e-5) -> tuple[float, float]:
    """Angle between directions ``u`` and ``v`` at ``p``, before and after inversion.

    The image directions are measured by central differences of the mapped
    points, independently of the Jacobian formula.
    """
    p = np.asarray(p, dtype=float)

    def image_dir(e):
        e = np.asarray(e, dtype=float)
        e = e / np.hypot(*e)
        a = np.array(apply_inversion(spec, p + h * e))
        b = np.array(apply_inversion(spec, p - h * e))
        return (a - b) / (2.0 * h)

    before = _angle(u, v)
    # inversion reverses orientation; the extra half-turn of a negative power does not
    after = -_angle(image_dir(u), image_dir(v))
    return before, after


def _closest_on_quadratic(p0, p1, p2, x) -> float:
    # P(u) = p1 + u (p2 - p0)/2 + u^2 (p2 - 2 p1 + p0)/2 for u in [-1, 1]
    b = 0.5 * (p2 - p0)
    c = 0.5 * (p2 - 2.0 * p1 + p0)
    a = p1 - x
    coeffs = [2.0 * (c @ c), 3.0 * (b @ c), (b @ b) + 2.0 * (a @ c), a @ b]
    cands = [-1.0, 1.0]
    if any(abs(k) > 0.0 for k in coeffs):
        first = next(i for i, k in enumerate(coeffs) if k != 0.0)
        for r in np.roots(coeffs[first:]) if first < 3 else []:
            if abs(r.imag) < 1e-9 and -1.0 <= r.real <= 1.0:
                cands.append(float(r.real))
    best = math.inf
    for u in cands:
        d = a + u * b + u * u * c
        best = min(best, math.hypot(d[0], d[1]))
    return best


def distance_to_polyline(points: np.ndarray, curve_pts: np.ndarray, k: int = 3) -> np.ndarray:
    """Distance from each point to a densely sampled curve.

    The curve is interpolated by the quadratic through the three samples
    around each of the ``k`` nearest samples.
    """
    curve_pts = np.asarray(curve_pts, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = len(curve_pts)
    if n < 3:
        raise ValueError("need at least three curve samples")
    _, idx = cKDTree(curve_pts).query(points, k=min(k, n))
    idx = np.atleast_2d(idx.T).T if idx.ndim == 1 else idx
    out = np.empty(len(points))
    for j, x in enumerate(points):
        best = math.inf
        for i in np.atleast_1d(idx[j]):
            i = min(max(int(i), 1), n - 2)
            best = min(best, _closest_on_quadratic(curve_pts[i - 1], curve_pts[i], curve_pts[i + 1], x))
        out[j] = best
    return out


def verify_t3_t5_duality(T: float = 1.0, w: float = 0.5, sample_count: int = 200,
                         s_max: float | None = None, reference_count: int = 20000) -> float:
    """Largest distance from inverted external short-leash samples to the internal tractrix.

    The image of the ``w`` trace about the leading-circle centre with
    ``I2 = R^2 - T^2`` lies on the ``-w`` trace reflected in the y-axis; both
    start poses are the canonical one, so no rigid motion is estimated.
    """
    if not 0.0 < w < 1.0:
        raise ValueError("duality is stated for 0 < w < 1")
    s_max = 8.0 * T if s_max is None else s_max
    spec = InversionSpec.for_circle(w, T)
    src = trace_cartesian(LeashParams.from_w(w, T), np.linspace(0.0, s_max, sample_count))
    ix, iy = apply_inversion(spec, (src.x, src.y))
    # the image runs further along the partner; give the reference extra room
    ref = trace_cartesian(LeashParams.from_w(-w, T), np.linspace(0.0, 2.0 * s_max, reference_count))
    return float(np.max(distance_to_polyline(np.column_stack([ix, iy]),
                                             np.column_stack([-ref.x, ref.y]))))


def verify_t1_reverse(T: float = 1.0, w: float = 2.0, sample_count: int = 200,
                      reference_count: int = 20000) -> float:
    """Largest distance from the hyperbolic inversion of a finite tractrix to the reverse one.

    The image of the ``w > 1`` trace lies on the canonical trace with
    parameters ``(-w, -T)``.
    """
    if not w > 1.0:
        raise ValueError("requires w > 1")
    spec = InversionSpec.for_circle(w, T)
    S1 = arc_limit(w, T)
    src = trace_cartesian(LeashParams.from_w(w, T), np.linspace(0.0, S1, sample_count))
    ix, iy = apply_inversion(spec, (src.x, src.y))
    ref = trace_cartesian(LeashParams.from_w(-w, -T), np.linspace(0.0, S1, reference_count))
    return float(np.max(distance_to_polyline(np.column_stack([ix, iy]),
                                             np.column_stack([ref.x, ref.y]))))


def verify_t2_involute(T: float = 1.0, sample_count: int = 200, s_max: float = 6.0) -> float:
    """Spread of the normal-line distance from the leading centre for the inverted spiral tractrix.

    The inversion about the leading circle (``I2 = R^2``) carries the spiral
    tractrix to a curve whose normals are all tangent to one circle about the
    centre, i.e. to an involute of that circle.  Returns the spread of the
    normal distances relative to their mean.
    """
    spec = InversionSpec(Point2(-T, 0.0), T * T)
    tr = trace_cartesian(LeashParams.from_w(1.0, T), np.linspace(0.05 * T, s_max * T, sample_count))
    dist = []
    for x, y, tau in zip(tr.x, tr.y, tr.tau):
        v = inversion_jacobian_image(spec, (x, y), (math.cos(tau), math.sin(tau)))
        q = apply_inversion(spec, (x, y))
        rel = np.array([q.x - spec.center.x, q.y - spec.center.y])
        n = np.array([-v[1], v[0]]) / np.hypot(*v)
        dist.append(abs(rel[0] * n[1] - rel[1] * n[0]))
    dist = np.array(dist)
    return float((dist.max() - dist.min()) / dist.mean())


def verify_orthogonality(leading: LeadingCurve, T: float, trace: Trace,
                         sample_count: int | None = None) -> float:
    """Largest ``|cos|`` between the trace heading and the circle of radius ``T`` about the leader.

    The circle tangent at the followed point is perpendicular to the leash, so
    a tractrix makes this zero.
    """
    n = len(trace)
    if n == 0:
        raise ValueError("empty trace")
    idx = np.arange(n) if sample_count is None or sample_count >= n else \
        np.unique(np.linspace(0, n - 1, sample_count).astype(int))
    worst = 0.0
    for i in idx:
        if not math.isfinite(trace.l[i]):
            raise ValueError("trace sample lacks its leading arc")
        a = leading.at(float(trace.l[i]))
        dx, dy = a.x - trace.x[i], a.y - trace.y[i]
        r = math.hypot(dx, dy)
        if r == 0.0:
            raise ValueError("followed point coincides with the leader")
        tx, ty = math.cos(trace.tau[i]), math.sin(trace.tau[i])
        # unit tangent of the circle about the leader at the followed point
        cx, cy = -dy / r, dx / r
        worst = max(worst, abs(tx * cx + ty * cy))
    return worst
