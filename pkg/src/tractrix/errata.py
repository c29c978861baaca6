"""Published polar equations that are known to be wrong.

These are reproduced verbatim so their defects can be demonstrated and
tested.  Nothing in the tracing code imports this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle_family import _polar_phi

__all__ = [
    "loria_polar_erroneous",
    "loria_jump_point",
    "spiral_polar_arcsin",
    "JumpReport",
    "loria_jump_report",
]


def loria_polar_erroneous(t, a: float, l: float):
    """Classical polar angle for a circle of radius ``a`` and leash ``l > a``.

    The imaginary ``n`` of the original is replaced by ``-sqrt(l^2 - a^2)``.
    The first arctangent is taken on its principal branch, which is what makes
    the curve jump at :func:`loria_jump_point`.
    """
    if not 0.0 < a < l:
        raise ValueError("the erroneous branch is the case 0 < a < l")
    t = np.asarray(t, dtype=float)
    n = -math.sqrt(l * l - a * a)
    with np.errstate(divide="ignore"):
        first = np.arctan(2.0 * l * t / ((a + l) + (a - l) * t * t))
    second = 2.0 * l / n * np.arctan(math.sqrt((l - a) / (l + a)) * t)
    out = first + second
    return out if out.ndim else float(out)


def loria_jump_point(a: float, l: float) -> float:
    """Parameter where the denominator of the first arctangent vanishes."""
    return math.sqrt((l + a) / (l - a))


def spiral_polar_arcsin(p, T: float):
    """Spiral tractrix with ``arcsin`` where ``arccos`` belongs."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p > 2.0 * T):
        raise ValueError("p must lie in (0, 2T]")
    phi = -np.arcsin(p / (2.0 * T)) + np.sqrt(4.0 * T * T - p * p) / p
    return phi if phi.ndim else float(phi)


@dataclass(frozen=True)
class JumpReport:
    t0: float
    eps: float
    loria_jump: float
    correct_gap: float


def loria_jump_report(a: float = 1.0, l: float = 2.0, eps: float = 1e-9) -> JumpReport:
    """Jump of the erroneous angle across ``t0`` next to the gap of the correct one.

    The correct angle uses ``w = l / a``; with its orientation it equals the
    negated erroneous formula wherever the latter is continuous.
    """
    t0 = loria_jump_point(a, l)
    lo, hi = t0 - eps, t0 + eps
    jump = loria_polar_erroneous(lo, a, l) - loria_polar_erroneous(hi, a, l)
    w = l / a
    gap = abs(float(_polar_phi(hi, w)) - float(_polar_phi(lo, w)))
    return JumpReport(t0, eps, float(jump), gap)
