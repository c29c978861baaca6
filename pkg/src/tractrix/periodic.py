"""Periodic tractrices as fixed points of the period map.

For a leading curve of period ``L`` the leash angle after one period is a
function of the starting angle.  While ``T |q| < 1`` this map sends
``[-pi/2, pi/2]`` into itself and contracts, so plain iteration finds the
unique periodic solution.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import LeadingCurve, Termination, Trace
from .ode import IntegratorConfig, Mode, integrate_nu, reconstruct

__all__ = [
    "SlackError",
    "ConditionWarning",
    "PeriodMap",
    "PeriodicSolution",
    "curvature_condition",
    "period_map",
    "find_periodic",
    "contraction_rate",
    "gap_profile",
    "gronwall_bound",
    "sweep_T",
    "closure_error",
]

HALF_PI = 0.5 * math.pi


class SlackError(RuntimeError):
    """The leash went slack before one full period."""


class ConditionWarning(UserWarning):
    """The leash is longer than the smallest radius of curvature."""


def curvature_condition(curve: LeadingCurve, T: float) -> float:
    """``T * max|q|``; the contraction argument needs it below one.

    Corners are curvature impulses and make the product infinite.
    """
    if curve.corners:
        return math.inf
    return abs(T) * curve.max_curvature


def _wrap_phase(phi: float) -> float:
    return (phi + HALF_PI) % (2.0 * math.pi) - HALF_PI


def _period(curve: LeadingCurve) -> float:
    if curve.period is None:
        raise ValueError("the leading curve is not periodic")
    return curve.period


@dataclass
class PeriodMap:
    """``nu(0) -> nu(L)`` for a periodic leading curve."""

    curve: LeadingCurve
    T: float
    mode: Mode = Mode.PULL_ONLY
    h: float | None = None
    tol: float | None = 1e-12
    calls: int = 0

    def config(self, nu0: float, **over) -> IntegratorConfig:
        kw = dict(T=self.T, nu0=nu0, mode=self.mode, h=self.h, tol=self.tol,
                  max_arc=_period(self.curve))
        kw.update(over)
        return IntegratorConfig(**kw)

    def solve(self, nu0: float, **over):
        sol = integrate_nu(self.curve, self.config(nu0, **over))
        self.calls += 1
        if sol.termination is Termination.STOPPED:
            raise SlackError(f"leash slackens at l={sol.l[-1]:.6g} before the period ends")
        return sol

    def __call__(self, nu0: float) -> float:
        return float(self.solve(nu0).nu[-1])

    def solve_phase(self, phi0: float, **over):
        """Integrate from the unified angle ``phi0`` (pushing when ``cos phi0 < 0``)."""
        phi0 = _wrap_phase(phi0)
        if phi0 > HALF_PI:
            return self.solve(phi0 - math.pi, T=-abs(self.T), **over)
        return self.solve(phi0, T=abs(self.T), **over)

    def phase(self, phi0: float) -> float:
        """Unified angle after one period, reduced to ``[-pi/2, 3pi/2)``.

        Unlike ``nu`` this tells the two sides of the leash apart, so it is
        the state to iterate once the rod may push.
        """
        return _wrap_phase(float(self.solve_phase(phi0).phi[-1]))


def period_map(curve: LeadingCurve, T: float, nu0: float, **kwargs) -> float:
    """Leash angle after one period, starting from ``nu0``."""
    return PeriodMap(curve, T, **kwargs)(nu0)


@dataclass
class PeriodicSolution:
    nu_star: float
    residual: float
    iterations: int
    trace_one_period: Trace
    history: list = field(default_factory=list)
    converged: bool = True
    theorem_regime: bool = True
    phase: float = 0.0


def closure_error(curve: LeadingCurve, trace: Trace, k: int = 1) -> tuple[float, float]:
    """Position and heading mismatch between the end pose and the start pose moved ``k`` periods."""
    x, y, tau = curve.transport((trace.x[0], trace.y[0]), float(trace.tau[0]), k)
    dpos = math.hypot(trace.x[-1] - x, trace.y[-1] - y)
    dang = abs(math.remainder(float(trace.tau[-1]) - tau, 2.0 * math.pi))
    return dpos, dang


def find_periodic(curve: LeadingCurve, T: float, tol: float = 1e-10, *,
                  nu_start: float = 0.0, max_iter: int = 200,
                  allow_violation: bool = False, h: float | None = None,
                  step_tol: float | None = 1e-13) -> PeriodicSolution:
    """Fixed point of the period map by plain iteration.

    With ``T max|q| >= 1`` the contraction argument does not apply.  That is
    an error unless ``allow_violation`` is set, in which case a
    :class:`ConditionWarning` is issued and the rod may push.  ``nu`` alone
    no longer fixes the state after a reversal, so the iteration then runs on
    the unified angle (``nu`` plus ``pi`` while pushing) and ``phase`` holds
    its fixed point.
    """
    _period(curve)
    cond = curvature_condition(curve, T)
    ok = cond < 1.0
    if not ok:
        msg = f"T * max|q| = {cond:.4g} >= 1; periodicity is not guaranteed"
        if not allow_violation:
            raise ValueError(msg)
        warnings.warn(msg, ConditionWarning, stacklevel=2)
    pmap = PeriodMap(curve, T, mode=Mode.PULL_ONLY if ok else Mode.PUSH_PULL, h=h, tol=step_tol)
    step = pmap if ok else pmap.phase
    state = nu_start
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        nxt = step(state)
        res = abs(math.remainder(nxt - state, 2.0 * math.pi))
        history.append(res)
        state = nxt
        if res <= tol:
            converged = True
            break
    sol = pmap.solve(state) if ok else pmap.solve_phase(state)
    tr = reconstruct(curve, sol)
    residual = abs(math.remainder(float(sol.phi[-1] - sol.phi[0]), 2.0 * math.pi))
    nu = float(sol.nu[0])
    if not converged:
        if ok:
            raise RuntimeError(f"no convergence in {max_iter} iterations (residual {residual:.3g})")
        warnings.warn(f"no convergence in {max_iter} iterations", ConditionWarning, stacklevel=2)
    return PeriodicSolution(nu, residual, it, tr, history, converged, ok, float(sol.phi[0]))


def contraction_rate(curve: LeadingCurve, T: float, eps: float = 1e-6, **kwargs) -> float:
    """Measured Lipschitz factor of the period map over nearly the whole interval."""
    pmap = PeriodMap(curve, T, **kwargs)
    a, b = -HALF_PI + eps, HALF_PI - eps
    return abs(pmap(b) - pmap(a)) / (b - a)


def gap_profile(curve: LeadingCurve, T: float, nu1: float, nu2: float,
                h: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two solutions on the same fixed-step grid over one period.

    Returns ``(l, nu1(l), nu2(l))``.
    """
    pmap = PeriodMap(curve, T, h=h, tol=None)
    s1 = pmap.solve(nu1, refine=1.0)
    s2 = pmap.solve(nu2, refine=1.0)
    if len(s1.l) != len(s2.l) or np.any(s1.l != s2.l):
        raise RuntimeError("solutions are not on a common grid")
    return s1.l, s1.nu, s2.nu


def gronwall_bound(curve: LeadingCurve, T: float, nu1: float, nu2: float,
                   h: float | None = None) -> dict:
    """Measured gap after one period against the bound from the gap equation.

    The gap obeys ``d/dl ln tan(delta/4) = -cos(m)/T`` with ``m`` the mean of
    the two angles.  With ``c = min cos(m)`` on the orbit this gives
    ``tan(delta(L)/4) <= tan(delta(0)/4) exp(-c L / T)``.
    """
    l, a, b = gap_profile(curve, T, nu1, nu2, h)
    delta = b - a
    c = float(np.min(np.cos(0.5 * (a + b))))
    L = float(l[-1])
    d0 = float(delta[0])
    bound = 4.0 * math.atan(math.tan(0.25 * d0) * math.exp(-c * L / abs(T)))
    return {
        "delta0": d0,
        "deltaL": float(delta[-1]),
        "factor": float(delta[-1]) / d0,
        "bound": bound,
        "bound_factor": bound / d0,
        "c": c,
        "linear_bound_factor": math.exp(-c * L / abs(T)),
    }


def sweep_T(curve: LeadingCurve, Ts, **kwargs) -> list[PeriodicSolution]:
    """Periodic solutions for several leash lengths."""
    return [find_periodic(curve, float(T), **kwargs) for T in Ts]
