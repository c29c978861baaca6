"""Verification suites with machine-readable reports.

Each check compares a measured value against a tolerance.  The environment
variable ``TRACTRIX_TOL`` replaces every tolerance when set.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import circle_family as cf
from . import errata, inversion, periodic
from .curves import circle, ellipse, join, line, parabola
from .ode import IntegratorConfig, integrate_nu, locate_nu, reconstruct

__all__ = ["Check", "Report", "SUITES", "run_suite", "circle_oracle_deviation", "tolerance"]

ORACLE_CASES = ((3.0, 1.0), (1.0, 1.0), (0.5, 1.0), (0.0, 1.0), (-0.5, 1.0))


def tolerance(default: float) -> float:
    env = os.environ.get("TRACTRIX_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise ValueError(f"TRACTRIX_TOL is not a number: {env!r}") from None
    return default


@dataclass
class Check:
    name: str
    value: float
    tol: float
    compare: str = "le"  # "le": value <= tol passes; "ge": value >= tol passes

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.tol if self.compare == "le" else self.value >= self.tol

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": self.value, "tolerance": self.tol,
                "compare": self.compare, "passed": self.passed}


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, name, value, tol, compare="le"):
        t = tolerance(tol) if compare == "le" else tol
        self.checks.append(Check(name, float(value), t, compare))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}


def circle_oracle_deviation(w: float, T: float = 1.0, s_lo: float = 0.01, s_hi: float = 10.0) -> dict:
    """ODE trace of the leading circle against the closed form at the ODE's arc lengths."""
    params = cf.LeashParams.from_w(w, T)
    S1 = cf.arc_limit(params)
    s_hi = min(S1 - 0.01 * T, s_hi) if math.isfinite(S1) else s_hi
    L = float(cf.leading_arc(s_hi, params)) * (1.0 + 1e-9)
    sol = integrate_nu(circle(params.K), IntegratorConfig(T=T, max_arc=L))
    tr = reconstruct(circle(params.K), sol)
    m = (tr.s >= s_lo) & (tr.s <= s_hi)
    ref = cf.trace_cartesian(params, tr.s[m])
    pos = float(np.max(np.hypot(ref.x - tr.x[m], ref.y - tr.y[m])))
    k = float(np.max(np.abs(tr.k[m] - cf.natural_curvature(tr.s[m], params))))
    return {"w": w, "T": T, "samples": int(m.sum()), "position": pos, "curvature": k}


def suite_oracle(rep: Report):
    for w, T in ORACLE_CASES:
        d = circle_oracle_deviation(w, T)
        rep.add(f"position w={w:g}", d["position"], 1e-6)
        rep.add(f"curvature w={w:g}", d["curvature"], 1e-8)
    for w in (1.5, 2.0, 3.0):
        c = circle(w)
        tr = reconstruct(c, integrate_nu(c, IntegratorConfig(T=1.0, max_arc=50.0)))
        rep.add(f"length S1 w={w:g}", abs(tr.s[-1] - cf.arc_limit(w, 1.0)), 1e-8)
        rep.add(f"reversal identity w={w:g}", cf.reverse_identity_check(w, 1.0), 1e-10)
    for w in (0.5, 1.0, 2.0, 5.0):
        c = circle(w)
        sol = integrate_nu(c, IntegratorConfig(T=1.0, max_arc=8.0))
        zeros = locate_nu(c, sol, 0.0)
        s0 = cf.inflection_arc(w, 1.0)
        rep.add(f"inflection w={w:g}", abs(zeros[0][1] - s0) if zeros else math.inf, 1e-8)
    for w in (3.0, 1.0, 0.5, -0.5):
        params = cf.LeashParams.from_w(w, 1.0)
        lim = cf._t_limit(w)
        t = np.linspace(0.0, min(lim * 0.98, 20.0), 200)
        pol = cf.trace_polar(params, t)
        xy = np.array([p.to_cartesian() for p in pol])
        s = cf.s_of_xi(2.0 * np.arctan(t), params)
        ref = cf.trace_cartesian(params, s)
        rep.add(f"polar vs cartesian w={w:g}", np.max(np.hypot(xy[:, 0] - ref.x, xy[:, 1] - ref.y)), 1e-8)


def suite_errata(rep: Report):
    r = errata.loria_jump_report(1.0, 2.0, 1e-9)
    rep.add("Loria jump - pi at t0", abs(r.loria_jump - math.pi), 1e-3)
    rep.add("correct angle gap at t0", r.correct_gap, 1e-6)
    p = np.linspace(0.2, 1.9, 50)
    dev = np.max(np.abs(errata.spiral_polar_arcsin(p, 1.0) - cf.spiral_polar_explicit(p, 1.0)))
    rep.add("arcsin variant departs from arccos form", dev, 1e-3, compare="ge")


def suite_pencil(rep: Report):
    for w in (-0.8, -0.4, 0.0, 0.4, 0.8):
        rep.add(f"family equation w={w:g}", inversion.pencil_residual(w, 1.0), 1e-10)
    T = 1.0
    f1, f2 = inversion.pencil_foci(T)
    # the members w = +-1 of w (x^2 + y^2 + T^2) + 2 T x = 0 are the point circles at the foci
    for w, f in ((1.0, f1), (-1.0, f2)):
        circ = inversion.GeneralizedCircle(w, 2.0 * T, 0.0, w * T * T)
        rep.add(f"focus ({f.x:g}, 0) is a point circle", abs(circ(f.x, f.y)) + circ.radius, 1e-12)
    tr = cf.trace_cartesian(cf.LeashParams.from_w(1.0, 1.0), np.array([0.0, 40.0]))
    rep.add("spiral limit point at a focus", math.hypot(tr.x[-1] - f1.x, tr.y[-1] - f1.y), 1e-6)
    rep.add("common start at the other focus", math.hypot(tr.x[0] - f2.x, tr.y[0] - f2.y), 1e-12)


def suite_inversion(rep: Report):
    rep.add("T3 to T5 duality w=0.5", inversion.verify_t3_t5_duality(1.0, 0.5, 200), 1e-6)
    rep.add("T1 to reverse w=2", inversion.verify_t1_reverse(1.0, 2.0), 1e-6)
    rep.add("spiral tractrix to involute", inversion.verify_t2_involute(1.0), 1e-8)
    spec = inversion.InversionSpec.for_circle(0.5, 1.0)
    b, a = inversion.angle_preservation(spec, (1.0, 0.3), (1.0, 0.0), (0.3, 1.0))
    rep.add("angle preserved", abs(a - b), 1e-8)
    params = cf.LeashParams.from_w(0.5, 1.0)
    tr = cf.trace_cartesian(params, np.linspace(0.0, 5.0, 300))
    rep.add("orthogonality circle trace", inversion.verify_orthogonality(circle(0.5), 1.0, tr), 1e-10)
    lead = join(parabola(0.5, -2.0, 0.0), line((0.0, 0.0), 0.0, 3.0))
    tr2 = reconstruct(lead, integrate_nu(lead, IntegratorConfig(T=1.0, nu0=0.0)))
    rep.add("orthogonality parabola and line", inversion.verify_orthogonality(lead, 1.0, tr2), 1e-8)


def suite_periodic(rep: Report):
    c = circle(0.5)
    sol = periodic.find_periodic(c, 1.0)
    rep.add("circle nu* = pi/6", abs(sol.nu_star - math.pi / 6.0), 1e-10)
    tr = sol.trace_one_period
    rep.add("circle trace radius sqrt 3", np.max(np.abs(np.hypot(tr.x + 2.0, tr.y) - math.sqrt(3.0))), 1e-8)
    e = ellipse(2.0, 1.0)
    sol = periodic.find_periodic(e, 0.4)
    rep.add("ellipse residual", sol.residual, 1e-10)
    rep.add("ellipse closure", periodic.closure_error(e, sol.trace_one_period)[0], 1e-8)
    rate = periodic.contraction_rate(e, 0.4)
    rep.add("ellipse contraction rate below one", rate, 1.0 - 1e-12)
    l, a, b = periodic.gap_profile(e, 0.4, -1.5, 1.5)
    d = b - a
    rep.add("gap stays positive", -float(np.min(d)), 0.0)
    rep.add("gap decreases", float(np.max(np.diff(d))), 0.0)


SUITES = {
    "oracle": suite_oracle,
    "errata": suite_errata,
    "pencil": suite_pencil,
    "inversion": suite_inversion,
    "periodic": suite_periodic,
}


def run_suite(name: str) -> list[Report]:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    out = []
    for n in names:
        rep = Report(n)
        SUITES[n](rep)
        out.append(rep)
    return out
