"""SVG analogues of the classic tractrix pictures.

Each builder returns ``{file name: svg text}``.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import circle_family as cf
from . import curves
from .geometry import LeadingCurve, resample_polyline
from .inversion import pencil_asymptotic_circle
from .ode import IntegratorConfig, Mode, integrate_nu, reconstruct
from .output import Layer, svg_document, trace_layers
from .periodic import find_periodic

__all__ = ["FIGURES", "build_figure"]

PALETTE = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d4820a", "#444444")


def _curve_points(curve: LeadingCurve, l_max: float, n: int = 800) -> np.ndarray:
    return curve.sample(n, l_max)[:, :2]


def _ode_panel(curve, T, l_max, nu0=0.0, mode=Mode.PULL_ONLY, n=800, color=PALETTE[0]):
    sol = integrate_nu(curve, IntegratorConfig(T=T, nu0=nu0, mode=mode, max_arc=l_max))
    tr = reconstruct(curve, sol).subsample(n)
    lead = np.column_stack([tr.meta["leading_x"], tr.meta["leading_y"]])
    layers = [Layer(_curve_points(curve, l_max), stroke="black", label="leading-full")]
    layers += trace_layers(tr, lead, color)
    return layers, tr


def fig2() -> dict:
    """Tractrices of assorted curves, pull mode with stop vectors."""
    square = resample_polyline([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)
    pent = resample_polyline([(math.cos(a), math.sin(a))
                              for a in np.linspace(0.0, 2.0 * math.pi, 5, endpoint=False)], closed=True)
    composite = curves.join(curves.parabola(0.5, -2.0, 0.0), curves.line((0.0, 0.0), 0.0, 3.0))
    jobs = {
        "lemniscate": (curves.lemniscate(2.0), 0.5, None, 0.0),
        "figure-eight": (curves.figure_eight(2.0), 0.4, None, 0.0),
        "sinusoid": (curves.sinusoid(1.0, 2.0 * math.pi), 1.5, None, -0.5),
        "composite": (composite, 1.0, None, -0.5),
        "pentagon": (pent, 0.5, None, -0.5),
        "square": (square, 0.3, None, -0.5),
    }
    out = {}
    for name, (curve, T, l_max, nu0) in jobs.items():
        l_max = l_max or (2.0 * curve.period if curve.period else curve.length)
        layers, _ = _ode_panel(curve, T, l_max, nu0=nu0)
        out[f"fig2_{name}.svg"] = svg_document(layers, title=f"tractrix of a {name}")
    return out


def fig4(R: float = 1.0) -> dict:
    """Involute of a circle as the push-pull tractrix of an Archimedean spiral."""
    curve = curves.archimedean_spiral(R, -2.0 * math.pi, 2.0 * math.pi)
    a = curve.at(0.0)
    f = -2.0 * math.pi
    ex, ey = R * (-math.sin(f) + f * math.cos(f)), R * (math.cos(f) + f * math.sin(f))
    nu0 = math.remainder(a.theta - math.atan2(a.y - ey, a.x - ex), 2.0 * math.pi)
    layers, _ = _ode_panel(curve, R, curve.length, nu0=nu0, mode=Mode.PUSH_PULL)
    ang = np.linspace(0.0, 2.0 * math.pi, 200)
    layers.append(Layer(np.column_stack([R * np.cos(ang), R * np.sin(ang)]), stroke="#999999",
                        dashed=True, label="base-circle"))
    return {"fig4_spiral_involute.svg": svg_document(layers, title="involute as push-pull tractrix")}


def fig5() -> dict:
    """Push-pull trajectories for an ellipse and a square."""
    out = {}
    e = curves.ellipse(2.0, 1.0)
    layers, _ = _ode_panel(e, 1.5, 3.0 * e.period, nu0=0.0, mode=Mode.PUSH_PULL, n=1500)
    out["fig5_ellipse.svg"] = svg_document(layers, title="push-pull, ellipse")
    sq = resample_polyline([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)
    layers, _ = _ode_panel(sq, 0.8, 3.0 * sq.period, nu0=-0.3, mode=Mode.PUSH_PULL, n=1500)
    out["fig5_square.svg"] = svg_document(layers, title="push-pull, square")
    return out


def fig6(ratios=(Fraction(1, 5), Fraction(2, 5), Fraction(1, 3)), T: float = 1.0) -> dict:
    """Star-shaped closed push-pull tractrices of a circle."""
    out = {}
    for r in ratios:
        w = cf.star_shape_parameter(r)
        n = r.denominator // math.gcd(2 * r.numerator, r.denominator)
        pts = cf.star_points(w, T, n, per_branch=150)
        R = T / w
        ang = np.linspace(0.0, 2.0 * math.pi, 200)
        layers = [Layer(np.column_stack([R * np.cos(ang), R * np.sin(ang)]), stroke="black", label="leading"),
                  Layer(pts, stroke=PALETTE[0], width=1.5, label="trace")]
        out[f"fig6_star_{r.numerator}_{r.denominator}.svg"] = svg_document(layers, title=f"star, ratio {r}")
    return out


def fig7() -> dict:
    """Families of periodic tractrices parametrised by the leash."""
    out = {}
    fams = {
        "ellipse": (curves.ellipse(2.0, 1.0), (0.2, 0.3, 0.45)),
        "sinusoid": (curves.sinusoid(1.0, 2.0 * math.pi), (0.3, 0.6, 0.9)),
        "lemniscate": (curves.lemniscate(2.0), (0.2, 0.4)),
    }
    for name, (curve, Ts) in fams.items():
        layers = [Layer(_curve_points(curve, curve.period), stroke="black", label="leading")]
        for T, col in zip(Ts, PALETTE):
            sol = find_periodic(curve, T)
            tr = sol.trace_one_period.subsample(600)
            layers.append(Layer(tr.points, stroke=col, width=1.2, label=f"T={T:g}"))
        out[f"fig7_{name}.svg"] = svg_document(layers, title=f"periodic tractrices, {name}")
    return out


def fig9(T: float = 1.0, s_max: float = 8.0) -> dict:
    """The five types of circle and line tractrices in the canonical placement."""
    out = {}
    for w in (3.0, 1.0, 0.5, 0.0, -0.5):
        params = cf.LeashParams.from_w(w, T)
        ct = cf.circle_tractrix(params)
        S1 = ct.S1
        s = np.linspace(0.0, min(S1, s_max * T), 600)
        tr = cf.trace_cartesian(params, s)
        layers = []
        if w == 0.0:
            layers.append(Layer(np.array([[0.0, 0.0], [0.0, tr.meta["leading_y"][-1]]]), stroke="black",
                                label="leading"))
        else:
            c = ct.center
            ang = np.linspace(0.0, 2.0 * math.pi, 300)
            layers.append(Layer(np.column_stack([c.x + params.R * np.cos(ang), c.y + params.R * np.sin(ang)]),
                                stroke="black", label="leading"))
            if abs(w) < 1.0:
                triv = cf.trivial_tractrix(params)
                layers.append(Layer(np.column_stack([c.x + triv.radius * np.cos(ang),
                                                     c.y + triv.radius * np.sin(ang)]),
                                    stroke="#999999", dashed=True, label="limit-circle"))
            elif w == 1.0:
                layers.append(Layer(np.array([[c.x, c.y]]), kind="marker", stroke="#999999", label="limit-point"))
        lead = np.column_stack([tr.meta["leading_x"], tr.meta["leading_y"]])
        layers += trace_layers(tr, lead, PALETTE[0])
        cls = params.tractrix_class
        out[f"fig9_{cls.value}.svg"] = svg_document(layers, title=f"{cls.value}: {cls.label}")
    return out


def fig11(T: float = 1.0, w_grid=(-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8)) -> dict:
    """A pencil of short-leash tractrices and their asymptotic circles."""
    layers = []
    for i, w in enumerate(w_grid):
        tr = cf.trace_cartesian(cf.LeashParams.from_w(w, T), np.linspace(0.0, 6.0 * T, 400))
        col = PALETTE[i % len(PALETTE)]
        layers.append(Layer(tr.points, stroke=col, width=1.2, label=f"w={w:g}"))
        circ = pencil_asymptotic_circle(w, T)
        layers.append(Layer(circ.sample(200, extent=8.0 * T), stroke=col, dashed=True, label="asymptote"))
    layers.append(Layer(np.array([[-T, 0.0], [T, 0.0]]), kind="marker", stroke="black", label="foci"))
    return {"fig11_pencil.svg": svg_document(layers, title="pencil of tractrices")}


def fig12(T: float = 1.0) -> dict:
    """Tractrices as orthogonal trajectories of leash circles along a composite curve."""
    lead = curves.join(curves.parabola(0.5, -2.0, 0.0), curves.line((0.0, 0.0), 0.0, 3.0))
    layers = [Layer(_curve_points(lead, lead.length), stroke="black", label="leading")]
    ang = np.linspace(0.0, 2.0 * math.pi, 120)
    for l in np.linspace(0.0, lead.length, 12):
        a = lead.at(float(l))
        layers.append(Layer(np.column_stack([a.x + T * np.cos(ang), a.y + T * np.sin(ang)]),
                            stroke="#bbbbbb", width=0.6, label="leash-circle"))
    for nu0, col in ((0.0, PALETTE[0]), (-1.2, PALETTE[1])):
        tr = reconstruct(lead, integrate_nu(lead, IntegratorConfig(T=T, nu0=nu0))).subsample(500)
        layers.append(Layer(tr.points, stroke=col, width=1.5, label="trace"))
    return {"fig12_orthogonal.svg": svg_document(layers, title="orthogonal trajectories")}


FIGURES = {
    "fig2": fig2,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig9": fig9,
    "fig11": fig11,
    "fig12": fig12,
}


def build_figure(name: str) -> dict:
    if name not in FIGURES:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return FIGURES[name]()
