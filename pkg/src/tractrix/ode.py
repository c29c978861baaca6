"""Tractrix of an arbitrary leading curve by integration of the leash angle.

The integrated quantity is the unwrapped angle ``phi = theta - alpha`` between
the leading tangent ``theta`` and the leash direction ``alpha`` (from the
followed point towards the leader).  It obeys

    dphi/dl = q(l) - sin(phi) / T

everywhere, including through cusps.  The followed point is pulled while
``cos(phi) > 0`` and pushed by the rod while ``cos(phi) < 0``; the reported
leash angle ``nu`` is ``phi`` folded into ``[-pi/2, pi/2]`` and the effective
leash changes sign with the mode.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .geometry import Corner, LeadingCurve, Termination, Trace

__all__ = [
    "Mode",
    "IntegratorConfig",
    "ModeSwitch",
    "SwitchKind",
    "NuSolution",
    "STOP",
    "StepRejected",
    "default_step",
    "integrate_nu",
    "arc_transfer",
    "reconstruct",
    "trace_curve",
    "corner_jump",
    "locate_nu",
]

HALF_PI = 0.5 * math.pi


class Mode(enum.Enum):
    PULL_ONLY = "pull"
    PUSH_PULL = "pushpull"


class SwitchKind(enum.Enum):
    STOP_SLACK = "stop"
    CUSP_REVERSAL = "cusp"


class _Stop:
    def __repr__(self):
        return "STOP"


STOP = _Stop()


class StepRejected(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """Settings for :func:`integrate_nu`.

    ``T`` is the signed leash (negative starts in the pushing regime).  ``h``
    defaults to :func:`default_step`.  Steps are divided by ``refine`` while
    ``|cos nu| < refine_below``.  With ``tol`` set, each step is checked by
    step doubling and the accepted value is extrapolated; ``tol=None`` gives
    plain fixed-step RK4.
    """

    T: float
    nu0: float = -HALF_PI
    mode: Mode = Mode.PULL_ONLY
    h: float | None = None
    refine: float = 4.0
    refine_below: float = 0.2
    max_arc: float | None = None
    tol: float | None = 1e-12

    def __post_init__(self):
        if self.T == 0.0 or not math.isfinite(self.T):
            raise ValueError("leash length must be finite and non-zero")
        if self.h is not None and not self.h > 0.0:
            raise ValueError("step h must be positive")
        if abs(self.nu0) > HALF_PI + 1e-15:
            raise ValueError("initial leash angle must lie in [-pi/2, pi/2]")
        if self.refine < 1.0:
            raise ValueError("refine factor must be >= 1")


@dataclass(frozen=True)
class ModeSwitch:
    l_at: float
    kind: SwitchKind
    index: int


@dataclass
class NuSolution:
    """Raw integration output on the nodes of the leading arc.

    ``phi`` is the unwrapped angle; ``branch[i]`` is the number of half-turns
    subtracted to report ``nu``.  Corner nodes appear twice (before and after
    the jump) with the same ``l``.
    """

    l: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    branch: np.ndarray
    T: float
    events: list = field(default_factory=list)
    corners: list = field(default_factory=list)
    event_nodes: frozenset = frozenset()
    termination: Termination = Termination.REACHED_LENGTH

    @property
    def nu(self) -> np.ndarray:
        return self.phi - np.pi * self.branch

    @property
    def leash(self) -> np.ndarray:
        return self.T * np.where(self.branch % 2 == 0, 1.0, -1.0)

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.l.tolist(), self.nu.tolist()))


def default_step(curve: LeadingCurve, T: float) -> float:
    T = abs(T)
    scale = T if curve.max_curvature == 0.0 else min(T, 1.0 / curve.max_curvature)
    return scale / 200.0


def _branch(phi: float) -> int:
    return math.floor((phi + HALF_PI) / math.pi)


def _rk4(f, l, y, h):
    k1 = f(l, y)
    k2 = f(l + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(l + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(l + h, y + h * k3)
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _rk4q(q0, qm, q1, inv_T, y, h):
    # RK4 for dphi/dl = q - sin(phi)/T with the curvature samples supplied
    sin = math.sin
    k1 = q0 - sin(y) * inv_T
    k2 = qm - sin(y + 0.5 * h * k1) * inv_T
    k3 = qm - sin(y + 0.5 * h * k2) * inv_T
    k4 = q1 - sin(y + h * k3) * inv_T
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def corner_jump(nu: float, delta_theta: float, mode: Mode = Mode.PULL_ONLY):
    """Leash angle just after a corner of the leading curve.

    The leash direction is continuous through the corner, so the angle grows
    by the tangent jump.  In pull-only mode leaving ``(-pi/2, pi/2)`` slackens
    the leash and :data:`STOP` is returned; with a rod the angle is folded
    back into the pushing regime.
    """
    if abs(delta_theta) >= math.pi:
        raise ValueError(f"corner impulse {delta_theta} is not smaller than pi")
    out = nu + delta_theta
    if abs(out) < HALF_PI:
        return out
    if mode is Mode.PULL_ONLY:
        return STOP
    return out - math.copysign(math.pi, out)


def integrate_nu(curve: LeadingCurve, cfg: IntegratorConfig) -> NuSolution:
    """Integrate the leash angle along ``curve``.

    Pull-only integration stops where the leash would slacken
    (``nu = +-pi/2``).  Push-pull integration records a cusp there and carries
    on with the rod pushing.
    """
    T = abs(cfg.T)
    l_end = cfg.max_arc if cfg.max_arc is not None else curve.length
    if not math.isfinite(l_end):
        raise ValueError("max_arc is required for an unbounded leading curve")
    if l_end > curve.length:
        raise ValueError("max_arc exceeds the length of the leading curve")
    h_base = cfg.h if cfg.h is not None else default_step(curve, T)
    pushpull = cfg.mode is Mode.PUSH_PULL
    inv_T = 1.0 / T
    curvature = curve.curvature
    sin = math.sin

    phi = cfg.nu0 + (math.pi if cfg.T < 0.0 else 0.0)
    d0 = curvature(0.0) - sin(phi) * inv_T
    br = _branch(phi + math.copysign(1e-12, d0) if d0 != 0.0 else phi)
    # a start exactly on the boundary belongs to the branch it moves into
    ls, phis, dphis, brs = [0.0], [phi], [d0], [br]
    events: list[ModeSwitch] = []
    corner_records: list[tuple[int, Corner]] = []
    event_nodes = set()
    if abs(math.cos(phi)) < 1e-15:
        event_nodes.add(0)

    def finish(term):
        return NuSolution(np.array(ls), np.array(phis), np.array(dphis), np.array(brs, dtype=int),
                          T, events, corner_records, frozenset(event_nodes), term)

    home = 1 if cfg.T < 0.0 else 0
    if not pushpull and br != home:
        events.append(ModeSwitch(0.0, SwitchKind.STOP_SLACK, 0))
        return finish(Termination.STOPPED)

    l = 0.0
    tol = cfg.tol
    corners = curve.corners_between(0.0, l_end)
    # a corner exactly at l_end is applied, so one period of a polygon ends
    # in the same (right-continuous) state it started from
    seg_ends = [c.l for c in corners]
    if not seg_ends or seg_ends[-1] < l_end:
        seg_ends.append(l_end)
    ci = 0
    for b in seg_ends:
        b_left = math.nextafter(b, -math.inf)

        def qa(x, _b=b_left):
            return curvature(x if x < _b else _b)

        def f(x, y):
            return qa(x) - sin(y) * inv_T

        while l < b:
            h = h_base
            if abs(math.cos(phi)) < cfg.refine_below:
                h /= cfg.refine
            h = min(h, b - l)
            if b - (l + h) < 1e-9 * h_base:
                h = b - l
            q0 = qa(l)
            while True:
                q2, q4 = qa(l + 0.5 * h), qa(l + h)
                if tol is None:
                    new = _rk4q(q0, q2, q4, inv_T, phi, h)
                    break
                q1, q3 = qa(l + 0.25 * h), qa(l + 0.75 * h)
                full = _rk4q(q0, q2, q4, inv_T, phi, h)
                half = _rk4q(q2, q3, q4, inv_T, _rk4q(q0, q1, q2, inv_T, phi, 0.5 * h), 0.5 * h)
                err = abs(half - full) / 15.0
                if err <= tol:
                    new = half + (half - full) / 15.0
                    break
                h *= 0.5
                if h < 1e-14 * max(1.0, b):
                    raise StepRejected(f"step size underflow at l={l}")
            l_new = b if h == b - l else l + h
            br_new = _branch(new)
            if br_new != br:
                up = br_new > br
                bval = -HALF_PI + math.pi * (br + 1 if up else br)
                g = lambda x: _rk4(f, l, phi, x) - bval
                g0, gh = g(0.0), g(h)
                if g0 == 0.0:
                    x = 0.0
                elif (g0 < 0.0) == (gh < 0.0):
                    x = h
                else:
                    x = brentq(g, 0.0, h, xtol=1e-13, rtol=4 * np.finfo(float).eps)
                l_ev = l + x
                if x > 0.0:
                    ls.append(l_ev)
                    phis.append(bval)
                    dphis.append(curvature(min(l_ev, b_left)) - sin(bval) * inv_T)
                    brs.append(br)
                event_nodes.add(len(ls) - 1)
                if not pushpull:
                    events.append(ModeSwitch(l_ev, SwitchKind.STOP_SLACK, len(ls) - 1))
                    return finish(Termination.STOPPED)
                events.append(ModeSwitch(l_ev, SwitchKind.CUSP_REVERSAL, len(ls) - 1))
                br = br_new
                l, phi = l_ev, bval
                continue
            l, phi = l_new, new
            ls.append(l)
            phis.append(phi)
            dphis.append(q4 - sin(phi) * inv_T)
            brs.append(br)

        if ci < len(corners) and corners[ci].l == b:
            corner = corners[ci]
            ci += 1
            if abs(corner.delta_theta) >= math.pi:
                raise ValueError(f"degenerate corner at l={b}: impulse {corner.delta_theta}")
            if pushpull and abs(math.cos(phi)) < 1e-9:
                raise ValueError(f"cusp coincides with a corner at l={b}; undefined continuation")
            if not pushpull and abs(phi + corner.delta_theta - math.pi * br) >= HALF_PI:
                # the leash slackens as the leader turns; the last pose is the one before the turn
                corner_records.append((len(ls) - 1, corner))
                event_nodes.add(len(ls) - 1)
                events.append(ModeSwitch(b, SwitchKind.STOP_SLACK, len(ls) - 1))
                return finish(Termination.STOPPED)
            phi = phi + corner.delta_theta
            ls.append(b)
            phis.append(phi)
            dphis.append(curvature(b) - sin(phi) * inv_T)
            new_br = _branch(phi)
            corner_records.append((len(ls) - 1, corner))
            if new_br != br:
                events.append(ModeSwitch(b, SwitchKind.CUSP_REVERSAL, len(ls) - 1))
                br = new_br
            brs.append(br)
    return finish(Termination.REACHED_LENGTH)


def _hermite_cos_integral(h, phi_a, phi_b, d_a, d_b):
    ca, cb = math.cos(phi_a), math.cos(phi_b)
    da = -math.sin(phi_a) * d_a
    db = -math.sin(phi_b) * d_b
    return 0.5 * h * (ca + cb) + h * h / 12.0 * (da - db)


def arc_transfer(sol_or_l, phi=None, dphi=None, branch=None) -> np.ndarray:
    """Tractrix arc length at every node, ``s = integral |cos nu| dl``.

    Uses the end-point corrected trapezoid rule (fourth order) when the
    derivative of the angle is known, and spline quadrature otherwise.
    """
    if isinstance(sol_or_l, NuSolution):
        sol = sol_or_l
        l, phi, dphi, branch = sol.l, sol.phi, sol.dphi, sol.branch
    else:
        l = np.asarray(sol_or_l, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if branch is None:
            branch = np.zeros(len(l), dtype=int)
    n = len(l)
    s = np.zeros(n)
    if n < 2:
        return s
    if dphi is None:
        from scipy.interpolate import CubicSpline

        c = np.abs(np.cos(phi))
        if n < 4:
            steps = 0.5 * np.diff(l) * (c[1:] + c[:-1])
        else:
            steps = np.diff(CubicSpline(l, c).antiderivative()(l))
        s[1:] = np.cumsum(steps)
        return s
    acc = 0.0
    lv, pv, dv = l.tolist(), list(map(float, phi)), list(map(float, dphi))
    bv = [int(b) for b in branch]
    for i in range(n - 1):
        h = lv[i + 1] - lv[i]
        if h > 0.0:
            sign = 1.0 if bv[i + 1] % 2 == 0 else -1.0
            acc += sign * _hermite_cos_integral(h, pv[i], pv[i + 1], dv[i], dv[i + 1])
        s[i + 1] = acc
    return s


def reconstruct(curve: LeadingCurve, sol: NuSolution, T: float | None = None) -> Trace:
    """Positions, tangents and curvature of the followed point."""
    if T is not None and abs(T) != sol.T:
        raise ValueError("leash length differs from the integrated one")
    s_all = arc_transfer(sol)
    n = len(sol.l)
    keep = [i for i in range(n) if i == n - 1 or sol.l[i + 1] != sol.l[i]]
    remap = {}
    j = 0
    for i in range(n):
        while keep[j] < i:
            j += 1
        remap[i] = j
    T0 = sol.T
    l = sol.l[keep]
    phi = sol.phi[keep]
    br = sol.branch[keep]
    nu = phi - np.pi * br
    leash = T0 * np.where(br % 2 == 0, 1.0, -1.0)
    pts = [curve.at(float(x)) for x in l]
    ax = np.array([p.x for p in pts])
    ay = np.array([p.y for p in pts])
    theta = np.array([p.theta for p in pts])
    alpha = theta - phi
    x = ax - T0 * np.cos(alpha)
    y = ay - T0 * np.sin(alpha)
    tau = theta - nu
    with np.errstate(divide="ignore"):
        k = np.tan(nu) / leash
    cusp = np.abs(np.cos(nu)) < 1e-12
    k[cusp] = np.copysign(np.inf, np.sin(nu[cusp]) * leash[cusp])
    switches = tuple(sorted({remap[e.index] for e in sol.events if e.kind is SwitchKind.CUSP_REVERSAL}))
    corner_idx = tuple(sorted({remap[i] for i, _ in sol.corners}))
    return Trace(
        l=l, s=s_all[keep], nu=nu, x=x, y=y, tau=tau, k=k, leash=leash,
        mode_switches=switches,
        corner_indices=corner_idx,
        termination=sol.termination,
        meta={
            "T": T0,
            "events": list(sol.events),
            "leading_x": ax,
            "leading_y": ay,
            "theta": theta,
        },
    )


def trace_curve(curve: LeadingCurve, T: float, **kwargs) -> Trace:
    """One-call tracing: :func:`integrate_nu` followed by :func:`reconstruct`."""
    if isinstance(kwargs.get("mode"), str):
        kwargs["mode"] = Mode(kwargs["mode"])
    cfg = IntegratorConfig(T=T, **kwargs)
    return reconstruct(curve, integrate_nu(curve, cfg))


def locate_nu(curve: LeadingCurve, sol: NuSolution, target: float = 0.0) -> list[tuple[float, float]]:
    """Points ``(l, s)`` where the reported leash angle crosses ``target``.

    Each crossing is refined by re-stepping RK4 from the node before it, and
    its arc length by the corrected trapezoid over the partial step.
    """
    inv_T = 1.0 / sol.T
    s_nodes = arc_transfer(sol)
    nu = sol.nu
    out = []
    for i in range(len(sol.l) - 1):
        if sol.l[i + 1] == sol.l[i] or sol.branch[i] != sol.branch[i + 1]:
            continue
        a, b = nu[i] - target, nu[i + 1] - target
        if a == 0.0:
            out.append((float(sol.l[i]), float(s_nodes[i])))
            continue
        if (a < 0.0) == (b < 0.0) or b == 0.0:
            continue
        l0, p0 = float(sol.l[i]), float(sol.phi[i])
        H = float(sol.l[i + 1] - l0)
        shift = math.pi * sol.branch[i]
        f = lambda x, y: curve.curvature(x) - math.sin(y) * inv_T
        g = lambda x: _rk4(f, l0, p0, x) - shift - target
        x = brentq(g, 0.0, H, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        p1 = _rk4(f, l0, p0, x)
        sign = 1.0 if sol.branch[i] % 2 == 0 else -1.0
        ds = sign * _hermite_cos_integral(x, p0, p1, float(sol.dphi[i]), f(l0 + x, p1))
        out.append((l0 + x, float(s_nodes[i]) + ds))
    return out
