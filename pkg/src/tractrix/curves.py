"""Leading curves in arc-length form.

Circles and lines have closed forms.  Other analytic curves are given by a
parametrisation ``r(t)`` with first and second derivatives; the map ``l -> t``
is tabulated on a uniform arc grid and evaluated by quintic Hermite
interpolation, so position, tangent and curvature are always computed from
``r`` itself.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .geometry import Corner, LeadingCurve, Point2, normalize_angle

__all__ = [
    "circle",
    "line",
    "from_parametric",
    "ellipse",
    "sinusoid",
    "lemniscate",
    "figure_eight",
    "archimedean_spiral",
    "parabola",
    "join",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _sinc(x: float) -> float:
    return 1.0 if x == 0.0 else math.sin(x) / x


def circle(K: float, start=(0.0, 0.0), heading: float = math.pi / 2) -> LeadingCurve:
    """Circle of signed curvature ``K`` through ``start`` with the given heading.

    ``K > 0`` turns left.  ``K == 0`` gives the straight line.
    """
    if K == 0.0:
        return line(start, heading)
    x0, y0 = float(start[0]), float(start[1])
    ch, sh = math.cos(heading), math.sin(heading)

    def evaluate(l):
        a = K * l
        fwd = l * _sinc(a)
        side = 0.5 * K * l * l * _sinc(0.5 * a) ** 2
        return (x0 + ch * fwd - sh * side, y0 + sh * fwd + ch * side, heading + a, K)

    return LeadingCurve(
        evaluate,
        period=2.0 * math.pi / abs(K),
        curvature=lambda l: K,
        max_curvature=abs(K),
        name=f"circle(K={K:g})",
    )


def line(start=(0.0, 0.0), heading: float = math.pi / 2, length: float = math.inf) -> LeadingCurve:
    x0, y0 = float(start[0]), float(start[1])
    ch, sh = math.cos(heading), math.sin(heading)

    def evaluate(l):
        return (x0 + ch * l, y0 + sh * l, heading, 0.0)

    return LeadingCurve(evaluate, length=length, curvature=lambda l: 0.0,
                        max_curvature=0.0, name="line")


class _ArcTable:
    """Tabulated inverse of the arc-length function of a parametrisation."""

    def __init__(self, dr, ddr, t0, t1, n_knots=4096, n_grid=4096):
        self.dr, self.ddr = dr, ddr
        knots = np.linspace(t0, t1, n_knots + 1)
        a, b = knots[:-1], knots[1:]
        half = 0.5 * (b - a)
        nodes = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X[None, :]
        seg = half * (self._speed(nodes) @ _GL_W)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.total = float(cum[-1])

        lg = np.linspace(0.0, self.total, n_grid + 1)
        t = np.interp(lg, cum, knots)
        for _ in range(8):
            j = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, n_knots - 1)
            ta = knots[j]
            hh = 0.5 * (t - ta)
            nd = 0.5 * (t + ta)[:, None] + hh[:, None] * _GL_X[None, :]
            f = cum[j] + hh * (self._speed(nd) @ _GL_W) - lg
            t = t - f / self._speed(t)
        t[0], t[-1] = t0, t1

        dx, dy = dr(t)
        ddx, ddy = ddr(t)
        sp2 = dx * dx + dy * dy
        self.t = t
        self.dt = 1.0 / np.sqrt(sp2)
        self.ddt = -(dx * ddx + dy * ddy) / (sp2 * sp2)
        self.step = self.total / n_grid
        self.n = n_grid
        # unwrapped tangent angle at the grid nodes, used to unwrap atan2 later
        self.theta = np.unwrap(np.arctan2(dy, dx))
        q = (dx * ddy - dy * ddx) / sp2 ** 1.5
        self.max_curvature = float(np.max(np.abs(q)))
        self._tl = self.t.tolist()
        self._dtl = self.dt.tolist()
        self._ddtl = self.ddt.tolist()
        self._thl = self.theta.tolist()

    def _speed(self, t):
        dx, dy = self.dr(t)
        return np.sqrt(dx * dx + dy * dy)

    def __call__(self, l: float) -> tuple[float, int]:
        h = self.step
        i = int(l / h)
        if i >= self.n:
            i = self.n - 1
        elif i < 0:
            i = 0
        u = (l - i * h) / h
        u2 = u * u
        u3 = u2 * u
        u4 = u3 * u
        u5 = u4 * u
        h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5
        h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5
        h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5)
        h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5
        h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5
        h3 = 0.5 * (u3 - 2.0 * u4 + u5)
        t = self._tl
        d = self._dtl
        dd = self._ddtl
        val = (h0 * t[i] + h * (h1 * d[i] + h4 * d[i + 1]) + h5 * t[i + 1]
               + h * h * (h2 * dd[i] + h3 * dd[i + 1]))
        return val, (i if u < 0.5 else i + 1)


def from_parametric(
    r: Callable,
    dr: Callable,
    ddr: Callable,
    t0: float,
    t1: float,
    *,
    periodic: bool = False,
    name: str = "parametric",
    n_grid: int = 4096,
    q: Callable[[float], float] | None = None,
) -> LeadingCurve:
    """Arc-length curve from ``r(t) -> (x, y)`` and its two derivatives.

    The three callables must accept scalars and numpy arrays.  With
    ``periodic=True`` the piece ``[t0, t1]`` is one period, continued by the
    rigid motion mapping its start onto its end.  An optional scalar ``q(t)``
    gives the signed curvature directly and speeds up integration.
    """
    table = _ArcTable(dr, ddr, t0, t1, n_knots=n_grid, n_grid=n_grid)
    thl = table._thl

    def evaluate(l):
        t, node = table(l)
        x, y = r(t)
        dx, dy = dr(t)
        ddx, ddy = ddr(t)
        sp2 = dx * dx + dy * dy
        ref = thl[node]
        th = ref + normalize_angle(math.atan2(dy, dx) - ref)
        q = (dx * ddy - dy * ddx) / sp2 ** 1.5
        return float(x), float(y), th, float(q)

    def curvature(l):
        t, _ = table(l)
        if q is not None:
            return q(t)
        dx, dy = dr(t)
        ddx, ddy = ddr(t)
        return float((dx * ddy - dy * ddx) / (dx * dx + dy * dy) ** 1.5)

    curve = LeadingCurve(
        evaluate,
        length=table.total,
        period=table.total if periodic else None,
        curvature=curvature,
        max_curvature=table.max_curvature,
        name=name,
    )
    curve.parameter_of = lambda l: table(curve._split(l)[1])[0]
    return curve


def ellipse(a: float = 2.0, b: float = 1.0) -> LeadingCurve:
    """Counter-clockwise ellipse starting at ``(a, 0)``; periodic."""
    if a <= 0 or b <= 0:
        raise ValueError("semi-axes must be positive")
    return from_parametric(
        lambda t: (a * np.cos(t), b * np.sin(t)),
        lambda t: (-a * np.sin(t), b * np.cos(t)),
        lambda t: (-a * np.cos(t), -b * np.sin(t)),
        0.0, 2.0 * math.pi, periodic=True, name=f"ellipse(a={a:g}, b={b:g})",
        q=lambda t: a * b / (a * a * math.sin(t) ** 2 + b * b * math.cos(t) ** 2) ** 1.5,
    )


def sinusoid(amplitude: float = 0.5, wavelength: float = 2.0 * math.pi) -> LeadingCurve:
    """``y = A sin(2 pi x / wavelength)``; periodic under translation."""
    k = 2.0 * math.pi / wavelength
    A = amplitude
    return from_parametric(
        lambda t: (t, A * np.sin(k * t)),
        lambda t: (np.ones_like(t) if isinstance(t, np.ndarray) else 1.0, A * k * np.cos(k * t)),
        lambda t: (np.zeros_like(t) if isinstance(t, np.ndarray) else 0.0, -A * k * k * np.sin(k * t)),
        0.0, wavelength, periodic=True, name=f"sinusoid(A={A:g}, wavelength={wavelength:g})",
        q=lambda t: -A * k * k * math.sin(k * t) / (1.0 + (A * k * math.cos(k * t)) ** 2) ** 1.5,
    )


def lemniscate(a: float = 1.0) -> LeadingCurve:
    """Lemniscate of Bernoulli ``x = a cos t / (1 + sin^2 t)``, ``y = x sin t``."""

    def r(t):
        s, c = np.sin(t), np.cos(t)
        d = 1.0 + s * s
        return a * c / d, a * s * c / d

    def dr(t):
        s, c = np.sin(t), np.cos(t)
        d = 1.0 + s * s
        dx = -a * s * (d + 2.0 * c * c) / d ** 2
        dy = a * ((c * c - s * s) * d - 2.0 * s * s * c * c) / d ** 2
        return dx, dy

    def ddr(t):
        s, c = np.sin(t), np.cos(t)
        d = 1.0 + s * s
        dd = 2.0 * s * c
        n1 = -s * (d + 2.0 * c * c)
        dn1 = -c * (d + 2.0 * c * c) - s * (dd - 4.0 * s * c)
        n2 = (c * c - s * s) * d - 2.0 * s * s * c * c
        dn2 = (-4.0 * s * c) * d + (c * c - s * s) * dd - 4.0 * s * c * (c * c - s * s)
        ddx = a * (dn1 * d - 2.0 * n1 * dd) / d ** 3
        ddy = a * (dn2 * d - 2.0 * n2 * dd) / d ** 3
        return ddx, ddy

    return from_parametric(r, dr, ddr, 0.0, 2.0 * math.pi, periodic=True,
                           name=f"lemniscate(a={a:g})",
                           q=lambda t: 3.0 * math.cos(t) / (a * math.sqrt(1.0 + math.sin(t) ** 2)))


def figure_eight(a: float = 1.0) -> LeadingCurve:
    """Lemniscate of Gerono ``x = a sin t``, ``y = a sin t cos t``."""
    return from_parametric(
        lambda t: (a * np.sin(t), 0.5 * a * np.sin(2.0 * t)),
        lambda t: (a * np.cos(t), a * np.cos(2.0 * t)),
        lambda t: (-a * np.sin(t), -2.0 * a * np.sin(2.0 * t)),
        0.0, 2.0 * math.pi, periodic=True, name=f"figure-eight(a={a:g})",
        q=lambda t: ((-2.0 * math.cos(t) * math.sin(2.0 * t) + math.cos(2.0 * t) * math.sin(t))
                     / (a * (math.cos(t) ** 2 + math.cos(2.0 * t) ** 2) ** 1.5)),
    )


def archimedean_spiral(R: float = 1.0, phi_min: float = -2.0 * math.pi,
                       phi_max: float = 2.0 * math.pi) -> LeadingCurve:
    """Spiral ``p = R phi`` traversed with increasing ``phi``.

    Negative ``phi`` gives the branch with negative polar radius, so the curve
    passes smoothly through the pole at ``phi = 0``.
    """
    if phi_max <= phi_min:
        raise ValueError("phi_max must exceed phi_min")

    def r(t):
        return R * t * np.cos(t), R * t * np.sin(t)

    def dr(t):
        return R * (np.cos(t) - t * np.sin(t)), R * (np.sin(t) + t * np.cos(t))

    def ddr(t):
        return R * (-2.0 * np.sin(t) - t * np.cos(t)), R * (2.0 * np.cos(t) - t * np.sin(t))

    return from_parametric(r, dr, ddr, phi_min, phi_max,
                           name=f"archimedean-spiral(R={R:g})",
                           q=lambda t: (2.0 + t * t) / (R * (1.0 + t * t) ** 1.5),
                           n_grid=max(4096, int(64 * (phi_max - phi_min) ** 2)))


def parabola(c: float = 0.5, x_min: float = -2.0, x_max: float = 0.0) -> LeadingCurve:
    """``y = c x^2`` for ``x_min <= x <= x_max``."""
    one = lambda t: np.ones_like(t) if isinstance(t, np.ndarray) else 1.0
    zero = lambda t: np.zeros_like(t) if isinstance(t, np.ndarray) else 0.0
    return from_parametric(
        lambda t: (t, c * t * t),
        lambda t: (one(t), 2.0 * c * t),
        lambda t: (zero(t), 2.0 * c * one(t)),
        x_min, x_max, name=f"parabola(c={c:g})",
        q=lambda t: 2.0 * c / (1.0 + 4.0 * c * c * t * t) ** 1.5,
    )


def join(*pieces: LeadingCurve, tol: float = 1e-9) -> LeadingCurve:
    """Concatenate finite curves whose end and start points coincide.

    A tangent mismatch at a junction becomes a :class:`Corner`.
    """
    if not pieces:
        raise ValueError("nothing to join")
    starts, thetas_offset, corners = [], [], []
    total, offset = 0.0, 0.0
    prev_end = None
    for p in pieces:
        if p.period is not None or not math.isfinite(p.length):
            raise ValueError("only finite, non-periodic pieces can be joined")
        c0 = p.at(0.0)
        if prev_end is not None:
            gap = math.hypot(c0.x - prev_end.x, c0.y - prev_end.y)
            if gap > tol:
                raise ValueError(f"pieces do not connect (gap {gap:.3g})")
            turn = normalize_angle(c0.theta - prev_end.theta)
            off = prev_end.theta + turn - c0.theta
            if turn != 0.0 and abs(turn) > 1e-12:
                corners.append(Corner(total, turn))
        else:
            off = 0.0
        starts.append(total)
        thetas_offset.append(off)
        corners.extend(Corner(total + c.l, c.delta_theta) for c in p.corners)
        total += p.length
        end = p.at(p.length)
        prev_end = type(end)(end.x, end.y, end.theta + off, end.q)

    def evaluate(l):
        i = len(starts) - 1
        while i > 0 and l < starts[i]:
            i -= 1
        piece = pieces[i]
        x, y, th, q = piece.at(min(l - starts[i], piece.length))
        return x, y, th + thetas_offset[i], q

    return LeadingCurve(evaluate, length=total, corners=corners,
                        max_curvature=max(p.max_curvature for p in pieces),
                        name=" + ".join(p.name for p in pieces))
