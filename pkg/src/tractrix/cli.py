"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import circle_family as cf
from . import curves
from .geometry import resample_polyline
from .inversion import PencilSpec, pencil_foci, pencil_residual
from .ode import IntegratorConfig, Mode, integrate_nu, reconstruct
from .output import (csv_text, svg_document, to_jsonable, trace_json, trace_layers, Layer,
                     format_float)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

NAMED_CURVES = {
    "ellipse": curves.ellipse,
    "sinusoid": curves.sinusoid,
    "lemniscate": curves.lemniscate,
    "figure-eight": curves.figure_eight,
    "archimedean-spiral": curves.archimedean_spiral,
    "parabola": curves.parabola,
}

# hard defaults, applied after the config file and the flags
DEFAULTS = {
    "T": 1.0,
    "mode": "pull",
    "samples": 400,
    "format": "csv",
    "s_max": 10.0,
    "nu0": None,
    "periods": 1.0,
}


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    """Flat ``key = value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    with open(path) as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{n}: expected key = value")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


_FLOAT_KEYS = {"w", "T", "K", "s_max", "nu0", "periods", "tol"}
_INT_KEYS = {"samples"}


def merge_options(args: argparse.Namespace, keys) -> dict:
    """Flags override the config file, which overrides the defaults."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(read_config(args.config))
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            opts[k] = v
    params = {}
    for item in opts.pop("param", None) or []:
        if isinstance(item, str):
            item = [item]
        for p in item:
            key, sep, val = p.partition("=")
            if not sep:
                raise UsageError(f"--param expects key=value, got {p!r}")
            params[key.strip()] = float(val)
    if isinstance(opts.get("params"), str):
        for p in opts.pop("params").split(","):
            key, _, val = p.partition("=")
            params[key.strip()] = float(val)
    opts["params"] = params
    try:
        for k in _FLOAT_KEYS:
            if opts.get(k) is not None:
                opts[k] = float(opts[k])
        for k in _INT_KEYS:
            if opts.get(k) is not None:
                opts[k] = int(opts[k])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if opts["samples"] < 2:
        raise UsageError("--samples must be at least 2")
    if opts["mode"] not in ("pull", "pushpull"):
        raise UsageError("--mode must be pull or pushpull")
    if opts["format"] not in ("csv", "svg", "json"):
        raise UsageError("--format must be csv, svg or json")
    return opts


def build_curve(name: str, opts: dict):
    """Leading curve from a descriptor: circle, line, a named curve or a polyline file."""
    params = opts["params"]
    if name == "circle":
        if opts.get("K") is not None:
            return curves.circle(opts["K"])
        if opts.get("w") is not None:
            return curves.circle(opts["w"] / opts["T"])
        raise UsageError("circle needs --K or --w")
    if name == "line":
        return curves.line(length=params.get("length", math.inf))
    if name in NAMED_CURVES:
        try:
            return NAMED_CURVES[name](**params)
        except TypeError as exc:
            raise UsageError(f"bad parameters for {name}: {exc}") from None
    path = Path(name)
    if path.exists():
        pts = np.loadtxt(path, delimiter=None if path.suffix != ".csv" else ",", ndmin=2)
        closed = bool(params.get("closed", 0.0))
        return resample_polyline(pts[:, :2], closed=closed)
    raise UsageError(f"unknown curve {name!r}: use circle, line, {', '.join(NAMED_CURVES)} or a file")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(trace, fmt: str, leading=None) -> str:
    if fmt == "csv":
        return csv_text(trace)
    if fmt == "json":
        return trace_json(trace) + "\n"
    return svg_document(trace_layers(trace, leading))


# ---------------------------------------------------------------- commands

def cmd_classify(args) -> int:
    w, T = args.w, args.T if args.T is not None else 1.0
    if w is None:
        raise UsageError("classify needs --w")
    try:
        cls = cf.classify(w, T)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    S1 = cf.arc_limit(w, T)
    s0 = cf.inflection_arc(w, T)
    s0_txt = "none" if s0 is None else format_float(s0)
    print(f"{cls.value} ({cls.label}), S1={format_float(S1)}, s0={s0_txt}")
    return EXIT_OK


def cmd_trace(args) -> int:
    opts = merge_options(args, ("w", "T", "K", "mode", "curve", "samples", "out", "format",
                                "s_max", "nu0", "param", "periods", "method"))
    curve_name = opts.get("curve") or ("circle" if opts.get("w") is not None or opts.get("K") is not None
                                       else None)
    if curve_name is None:
        raise UsageError("trace needs --curve (or --w/--K for a circle)")
    T = opts["T"]
    n = opts["samples"]
    closed_form = (curve_name in ("circle", "line") and opts.get("method", "auto") != "ode"
                   and opts.get("nu0") is None and opts["mode"] == "pull" and T > 0)
    if closed_form:
        if curve_name == "line":
            w = 0.0
        elif opts.get("w") is not None:
            w = opts["w"]
        else:
            w = opts["K"] * T
        params = cf.LeashParams.from_w(w, T)
        S1 = cf.arc_limit(params)
        s = np.linspace(0.0, min(S1, opts["s_max"]), n)
        trace = cf.trace_cartesian(params, s)
        lead = np.column_stack([trace.meta["leading_x"], trace.meta["leading_y"]])
    else:
        curve = build_curve(curve_name, opts)
        nu0 = opts["nu0"] if opts.get("nu0") is not None else -0.5 * math.pi
        if curve.period is not None:
            l_max = opts["periods"] * curve.period
        elif math.isfinite(curve.length):
            l_max = curve.length
        else:
            l_max = opts["s_max"]
        cfg = IntegratorConfig(T=T, nu0=nu0, mode=Mode(opts["mode"]), max_arc=l_max)
        trace = reconstruct(curve, integrate_nu(curve, cfg)).subsample(n)
        trace.meta.setdefault("T", T)
        lead = np.column_stack([trace.meta["leading_x"], trace.meta["leading_y"]])
    _emit(_render(trace, opts["format"], lead), opts.get("out"))
    return EXIT_OK


def cmd_pencil(args) -> int:
    T = args.T if args.T is not None else 1.0
    grid = tuple(float(v) for v in args.w_grid.split(",")) if args.w_grid else (-0.8, -0.4, 0.0, 0.4, 0.8)
    spec = PencilSpec(T, grid)
    fmt = args.format or "json"
    if fmt == "svg":
        layers = []
        for w, tr, circ in zip(grid, spec.traces(), spec.circles()):
            layers.append(Layer(tr.points, stroke="#1f4e9c", width=1.2, label=f"w={w:g}"))
            layers.append(Layer(circ.sample(200, extent=8.0 * T), stroke="#888888", dashed=True))
        _emit(svg_document(layers, title="pencil of tractrices"), args.out)
        return EXIT_OK
    members = []
    for w, circ in zip(grid, spec.circles()):
        m = {"w": w, "coefficients": [circ.a, circ.b, circ.c, circ.d],
             "residual": pencil_residual(w, T)}
        if circ.is_line:
            m["line"] = "x = 0"
        else:
            m["center"] = list(circ.center)
            m["radius"] = circ.radius
        members.append(m)
    doc = {"T": T, "foci": [list(f) for f in pencil_foci(T)], "radical_axis": "x = 0", "members": members}
    _emit(json.dumps(to_jsonable(doc), indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_periodic(args) -> int:
    from .periodic import closure_error, find_periodic

    opts = merge_options(args, ("T", "curve", "param", "samples", "out", "format", "tol", "K"))
    curve = build_curve(opts.get("curve") or "ellipse", opts)
    sol = find_periodic(curve, opts["T"], tol=opts.get("tol") or 1e-10,
                        allow_violation=bool(args.allow_violation))
    dpos, dang = closure_error(curve, sol.trace_one_period)
    summary = {"curve": curve.name, "T": opts["T"], "nu_star": sol.nu_star, "residual": sol.residual,
               "iterations": sol.iterations, "history": sol.history, "closure_position": dpos,
               "closure_angle": dang, "theorem_regime": sol.theorem_regime, "converged": sol.converged,
               "phase": sol.phase}
    if opts.get("out"):
        tr = sol.trace_one_period.subsample(opts["samples"])
        fmt = opts["format"]
        Path(opts["out"]).write_text(_render(tr, fmt))
    print(json.dumps(to_jsonable(summary), indent=1))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    try:
        reports = run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    doc = {"passed": all(r.passed for r in reports), "suites": [r.as_dict() for r in reports]}
    text = json.dumps(to_jsonable(doc), indent=1) + "\n"
    _emit(text, args.out)
    if args.out:
        for r in reports:
            for c in r.checks:
                flag = "ok  " if c.passed else "FAIL"
                print(f"{flag} {r.suite}: {c.name} = {c.value:.3g} (tol {c.tol:g})")
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_figure(args) -> int:
    from .figures import FIGURES, build_figure

    name = args.figure or args.name
    if not name:
        raise UsageError(f"figure name required: {', '.join(FIGURES)}")
    try:
        files = build_figure(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for fname, text in files.items():
        (out / fname).write_text(text)
        print(out / fname)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tractrix", description="Tractrices of planar curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *names):
        if "w" in names:
            sp.add_argument("--w", type=float, help="shape parameter w = +-K T")
        if "T" in names:
            sp.add_argument("--T", type=float, help="leash length")
        if "K" in names:
            sp.add_argument("--K", type=float, help="curvature of the leading circle")
        if "out" in names:
            sp.add_argument("--out", help="output path (stdout when omitted)")
        if "format" in names:
            sp.add_argument("--format", choices=("csv", "svg", "json"))
        if "config" in names:
            sp.add_argument("--config", help="flat key = value job file; flags override it")

    sp = sub.add_parser("classify", help="type, length and inflection of a circle tractrix")
    common(sp, "w", "T")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("trace", help="trace a tractrix and write CSV, SVG or JSON")
    common(sp, "w", "T", "K", "out", "format", "config")
    sp.add_argument("--curve", help="circle, line, a named curve or a polyline file")
    sp.add_argument("--mode", choices=("pull", "pushpull"))
    sp.add_argument("--samples", type=int)
    sp.add_argument("--s-max", dest="s_max", type=float, help="arc length limit (closed forms, lines)")
    sp.add_argument("--nu0", type=float, help="initial leash angle (forces the ODE engine)")
    sp.add_argument("--periods", type=float, help="periods to trace on a periodic curve")
    sp.add_argument("--method", choices=("auto", "ode"))
    sp.add_argument("--param", action="append", metavar="KEY=VALUE", help="curve parameter")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("pencil", help="asymptotic circles of a pencil of tractrices")
    common(sp, "T", "out", "format")
    sp.add_argument("--w-grid", help="comma separated w values in (-1, 1)")
    sp.set_defaults(func=cmd_pencil)

    sp = sub.add_parser("periodic", help="periodic tractrix of a periodic curve")
    common(sp, "T", "K", "out", "format", "config")
    sp.add_argument("--curve")
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--allow-violation", action="store_true",
                    help="proceed when the leash exceeds the smallest radius of curvature")
    sp.set_defaults(func=cmd_periodic)

    sp = sub.add_parser("verify", help="run a verification suite, JSON report")
    sp.add_argument("suite", help="oracle, errata, pencil, inversion, periodic or all")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("figure", help="regenerate a figure analogue as SVG files")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--figure")
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
