"""Planar geometry shared by the whole package.

Angles are kept unwrapped while curves are built and integrated; they are
folded into (-pi, pi] only when a :class:`Pose` is created.
"""
from __future__ import annotations

import bisect
import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Point2",
    "Pose",
    "Corner",
    "CurvePoint",
    "LeadingCurve",
    "TraceSample",
    "Trace",
    "Termination",
    "normalize_angle",
    "wrap_angles",
    "resample_polyline",
]

TWO_PI = 2.0 * math.pi


def normalize_angle(a: float) -> float:
    """Fold an angle into (-pi, pi]."""
    if not math.isfinite(a):
        raise ValueError(f"angle must be finite, got {a!r}")
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def wrap_angles(a):
    """Vectorised :func:`normalize_angle`."""
    a = np.asarray(a, dtype=float)
    return np.pi - np.mod(np.pi - a, TWO_PI)


class Point2(NamedTuple):
    x: float
    y: float

    def __sub__(self, other):  # type: ignore[override]
        return Point2(self.x - other[0], self.y - other[1])

    def __add__(self, other):  # type: ignore[override]
        return Point2(self.x + other[0], self.y + other[1])

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class Pose:
    position: Point2
    tangent_angle: float

    def __post_init__(self):
        if not (math.isfinite(self.position[0]) and math.isfinite(self.position[1])):
            raise ValueError("pose position must be finite")
        object.__setattr__(self, "position", Point2(*self.position))
        object.__setattr__(self, "tangent_angle", normalize_angle(self.tangent_angle))


@dataclass(frozen=True)
class Corner:
    """A tangent jump of the leading curve (a Dirac impulse of curvature)."""

    l: float
    delta_theta: float


class CurvePoint(NamedTuple):
    x: float
    y: float
    theta: float
    q: float


Evaluator = Callable[[float], tuple]


class LeadingCurve:
    """Planar curve parametrised by arc length ``l``.

    ``evaluate(l)`` must return ``(x, y, theta, q)`` for ``0 <= l <= base``,
    where ``base`` is the period for periodic curves and the total length
    otherwise.  ``theta`` is the unwrapped tangent angle, right-continuous at
    corners; ``corners`` lists the impulses with ``0 < l <= base``.

    A periodic curve is continued beyond one period by the rigid motion that
    carries its start pose onto its end pose.
    """

    def __init__(
        self,
        evaluate: Evaluator,
        *,
        length: float = math.inf,
        period: float | None = None,
        corners: Iterable[Corner] = (),
        curvature: Callable[[float], float] | None = None,
        max_curvature: float | None = None,
        name: str = "curve",
    ):
        if period is not None:
            if not period > 0:
                raise ValueError("period must be positive")
            length = math.inf
        self._evaluate = evaluate
        self._curvature = curvature
        self.length = float(length)
        self.period = None if period is None else float(period)
        self.corners: tuple[Corner, ...] = tuple(sorted(corners, key=lambda c: c.l))
        self._corner_l = [c.l for c in self.corners]
        self.name = name

        if self.period is not None:
            x0, y0, th0, _ = evaluate(0.0)
            x1, y1, th1, _ = evaluate(self.period)
            self.turning = th1 - th0
            self._z0 = complex(x0, y0)
            self._z1 = complex(x1, y1)
            rot = cmath.exp(1j * self.turning)
            if abs(rot - 1.0) > 1e-12:
                self._motion_center = (self._z1 - rot * self._z0) / (1.0 - rot)
            else:
                self._motion_center = None
        else:
            self.turning = None

        if max_curvature is None:
            max_curvature = self._sample_max_curvature()
        self.max_curvature = float(max_curvature)

    def __repr__(self):
        return f"LeadingCurve({self.name!r}, length={self.length}, period={self.period})"

    @property
    def base_length(self) -> float:
        return self.period if self.period is not None else self.length

    def _sample_max_curvature(self, n: int = 2001) -> float:
        base = self.base_length
        if not math.isfinite(base):
            base = 1.0
        return max(abs(self._evaluate(float(l))[3]) for l in np.linspace(0.0, base, n))

    def _split(self, l: float) -> tuple[int, float]:
        if l < 0.0:
            raise ValueError(f"arc length must be non-negative, got {l}")
        if self.period is None:
            if l > self.length * (1.0 + 1e-12) + 1e-12:
                raise ValueError(f"arc length {l} beyond curve length {self.length}")
            return 0, min(l, self.length)
        k = int(l // self.period)
        r = l - k * self.period
        if r < 0.0:
            k, r = k - 1, r + self.period
        return k, r

    def _move(self, k: int, x: float, y: float) -> tuple[float, float]:
        if k == 0:
            return x, y
        z = complex(x, y)
        if self._motion_center is None:
            z += k * (self._z1 - self._z0)
        else:
            c = self._motion_center
            z = c + cmath.exp(1j * k * self.turning) * (z - c)
        return z.real, z.imag

    def transport(self, point, angle: float = 0.0, k: int = 1) -> tuple[float, float, float]:
        """Apply the rigid motion of ``k`` periods to a point and a direction."""
        if self.period is None:
            raise ValueError("only periodic curves carry a period motion")
        x, y = self._move(k, float(point[0]), float(point[1]))
        return x, y, angle + k * self.turning

    def at(self, l: float) -> CurvePoint:
        k, r = self._split(l)
        x, y, th, q = self._evaluate(r)
        if k:
            x, y = self._move(k, x, y)
            th += k * self.turning
        return CurvePoint(x, y, th, q)

    __call__ = at

    def point(self, l: float) -> Point2:
        c = self.at(l)
        return Point2(c.x, c.y)

    def curvature(self, l: float) -> float:
        if self._curvature is None:
            return self.at(l).q
        _, r = self._split(l)
        return self._curvature(r)

    def corners_between(self, a: float, b: float) -> list[Corner]:
        """Corners with ``a < l <= b`` (periodic copies included)."""
        if not self.corners or b <= a:
            return []
        if self.period is None:
            i = bisect.bisect_right(self._corner_l, a)
            j = bisect.bisect_right(self._corner_l, b)
            return list(self.corners[i:j])
        out = []
        k0 = int(a // self.period) - 1
        k1 = int(b // self.period) + 1
        for k in range(k0, k1 + 1):
            for c in self.corners:
                lc = c.l + k * self.period
                if a < lc <= b:
                    out.append(Corner(lc, c.delta_theta))
        out.sort(key=lambda c: c.l)
        return out

    def sample(self, n: int = 400, l_max: float | None = None) -> np.ndarray:
        """``(n, 4)`` array of ``(x, y, theta, q)`` on a uniform arc grid."""
        if l_max is None:
            l_max = self.base_length
        if not math.isfinite(l_max):
            raise ValueError("l_max required for an unbounded curve")
        return np.array([tuple(self.at(float(l))) for l in np.linspace(0.0, l_max, n)])

    def reversed(self) -> "LeadingCurve":
        """Same curve traversed from its end back to its start."""
        if self.period is not None or not math.isfinite(self.length):
            raise ValueError("only finite, non-periodic curves can be reversed")
        if self.corners:
            raise ValueError("reversal of curves with corners is not supported")
        L = self.length
        ev = self._evaluate

        def evaluate(l):
            x, y, th, q = ev(L - l)
            return x, y, th + math.pi, -q

        return LeadingCurve(evaluate, length=L, max_curvature=self.max_curvature,
                            name=self.name + " (reversed)")


def resample_polyline(points: Sequence[Sequence[float]], closed: bool = False) -> LeadingCurve:
    """Arc-length parametrised polyline.

    Corners are kept as exact tangent jumps (:class:`Corner`), never rounded.
    A closed polyline becomes a periodic curve whose closing vertex carries
    the final corner at ``l = perimeter``.
    """
    pts = [Point2(float(p[0]), float(p[1])) for p in points]
    if closed and len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 2:
        raise ValueError("a polyline needs at least two points")
    verts = pts + [pts[0]] if closed else pts
    seg_len, seg_dir = [], []
    for a, b in zip(verts[:-1], verts[1:]):
        d = math.hypot(b.x - a.x, b.y - a.y)
        if d == 0.0:
            raise ValueError(f"duplicate consecutive points at {tuple(a)}")
        seg_len.append(d)
        seg_dir.append(math.atan2(b.y - a.y, b.x - a.x))

    theta = [seg_dir[0]]
    deltas = []
    for d in seg_dir[1:]:
        dt = normalize_angle(d - theta[-1])
        deltas.append(dt)
        theta.append(theta[-1] + dt)
    starts = [0.0]
    for d in seg_len[:-1]:
        starts.append(starts[-1] + d)
    total = starts[-1] + seg_len[-1]

    corners = [Corner(starts[i + 1], dt) for i, dt in enumerate(deltas) if dt != 0.0]
    if closed:
        closing = normalize_angle(seg_dir[0] - theta[-1])
        if closing != 0.0:
            corners.append(Corner(total, closing))
        end_theta = theta[-1] + closing
    n = len(seg_len)

    def evaluate(l):
        if closed and l >= total:
            return verts[0].x, verts[0].y, end_theta, 0.0
        i = min(max(bisect.bisect_right(starts, l) - 1, 0), n - 1)
        u = l - starts[i]
        a = verts[i]
        return (a.x + u * math.cos(seg_dir[i]), a.y + u * math.sin(seg_dir[i]), theta[i], 0.0)

    return LeadingCurve(
        evaluate,
        length=total,
        period=total if closed else None,
        corners=corners,
        curvature=lambda l: 0.0,
        max_curvature=0.0,
        name="polygon" if closed else "polyline",
    )


class Termination(enum.Enum):
    REACHED_LENGTH = "reached-length"
    STOPPED = "stopped"
    CLOSED = "closed"


@dataclass(frozen=True)
class TraceSample:
    l: float
    s: float
    nu: float
    pose: Pose
    k: float


@dataclass(frozen=True)
class Trace:
    """Columns of a traced tractrix.

    ``tau`` is unwrapped; :attr:`samples` exposes the normalised per-point view.
    ``leash`` holds the signed leash length per sample (negative while pushing).
    """

    l: np.ndarray
    s: np.ndarray
    nu: np.ndarray
    x: np.ndarray
    y: np.ndarray
    tau: np.ndarray
    k: np.ndarray
    leash: np.ndarray
    mode_switches: tuple = ()
    corner_indices: tuple = ()
    termination: Termination = Termination.REACHED_LENGTH
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("l", "s", "nu", "x", "y", "tau", "k", "leash"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.l)
        if any(len(getattr(self, c)) != n for c in ("s", "nu", "x", "y", "tau", "k", "leash")):
            raise ValueError("trace columns differ in length")

    def __len__(self):
        return len(self.l)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    @property
    def samples(self) -> list[TraceSample]:
        return [
            TraceSample(float(l), float(s), float(nu), Pose(Point2(float(x), float(y)), float(t)), float(k))
            for l, s, nu, x, y, t, k in zip(self.l, self.s, self.nu, self.x, self.y, self.tau, self.k)
        ]

    def subsample(self, n: int) -> "Trace":
        """About ``n`` samples evenly spread in ``l``; ends, cusps and corners are kept."""
        if n < 2:
            raise ValueError("need at least two samples")
        if len(self) <= n:
            return self
        grid = np.linspace(self.l[0], self.l[-1], n)
        pick = set(np.searchsorted(self.l, grid).clip(0, len(self) - 1).tolist())
        pick |= {0, len(self) - 1, *self.mode_switches, *self.corner_indices}
        idx = np.array(sorted(pick))
        where = {int(i): j for j, i in enumerate(idx)}
        meta = dict(self.meta)
        for key in ("leading_x", "leading_y", "theta", "psi"):
            if key in meta and np.ndim(meta[key]) == 1 and len(meta[key]) == len(self):
                meta[key] = np.asarray(meta[key])[idx]
        return Trace(
            l=self.l[idx], s=self.s[idx], nu=self.nu[idx], x=self.x[idx], y=self.y[idx],
            tau=self.tau[idx], k=self.k[idx], leash=self.leash[idx],
            mode_switches=tuple(where[i] for i in self.mode_switches),
            corner_indices=tuple(where[i] for i in self.corner_indices),
            termination=self.termination, meta=meta,
        )

    def end_pose(self) -> Pose:
        return Pose(Point2(float(self.x[-1]), float(self.y[-1])), float(self.tau[-1]))
