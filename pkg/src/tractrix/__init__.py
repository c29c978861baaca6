"""Tractrices of planar curves.

A point ``B`` is dragged by a leash of length ``T`` whose other end ``A``
moves along a leading curve.  The package covers the closed forms for
circles and lines, a general integrator for arbitrary leading curves (with
an optional pushing rod), periodic solutions, and the inversive geometry of
the circle family.
"""
from .geometry import (Corner, CurvePoint, LeadingCurve, Point2, Pose, Termination, Trace,
                       normalize_angle, resample_polyline)
from .circle_family import LeashParams, TractrixClass, circle_tractrix, classify, trace_cartesian
from .ode import IntegratorConfig, Mode, SwitchKind, integrate_nu, reconstruct, trace_curve
from .periodic import find_periodic, period_map
from . import curves

__version__ = "0.1.0"

__all__ = [
    "Corner",
    "CurvePoint",
    "LeadingCurve",
    "Point2",
    "Pose",
    "Termination",
    "Trace",
    "normalize_angle",
    "resample_polyline",
    "LeashParams",
    "TractrixClass",
    "circle_tractrix",
    "classify",
    "trace_cartesian",
    "IntegratorConfig",
    "Mode",
    "SwitchKind",
    "integrate_nu",
    "reconstruct",
    "trace_curve",
    "find_periodic",
    "period_map",
    "curves",
]
