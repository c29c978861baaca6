"""CSV, JSON and SVG emitters for traces."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import Termination, Trace, wrap_angles

__all__ = [
    "CSV_COLUMNS",
    "format_float",
    "trace_metadata",
    "trace_rows",
    "write_csv",
    "read_csv",
    "csv_text",
    "to_jsonable",
    "trace_json",
    "Layer",
    "svg_document",
    "trace_layers",
]

CSV_COLUMNS = ("l", "s", "x", "y", "tau", "nu", "k")


def format_float(v: float) -> str:
    """Shortest text that reads back to the same double; infinities as ``inf``."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    return repr(v)


def trace_metadata(trace: Trace, as_text: bool = True, **extra) -> dict:
    """Header fields of an emitted trace (strings unless ``as_text`` is false)."""
    meta = {}
    m = trace.meta
    cls = m.get("class")
    if cls is not None:
        meta["class"] = getattr(cls, "value", str(cls))
    for key in ("w", "T", "S1", "s0"):
        if m.get(key) is not None:
            meta[key] = float(m[key])
    meta["termination"] = trace.termination.value
    meta.update(extra)
    if as_text:
        meta = {k: format_float(v) if isinstance(v, float) else str(v) for k, v in meta.items()}
    return meta


def trace_rows(trace: Trace) -> list[list[float]]:
    tau = wrap_angles(trace.tau)
    return [list(r) for r in zip(trace.l, trace.s, trace.x, trace.y, tau, trace.nu, trace.k)]


def _write(fh, meta: dict, rows: Iterable[Sequence], columns=CSV_COLUMNS):
    for k, v in meta.items():
        fh.write(f"# {k}={v}\n")
    fh.write(",".join(columns) + "\n")
    for r in rows:
        fh.write(",".join(format_float(v) for v in r) + "\n")


def csv_text(trace_or_meta, rows=None) -> str:
    """CSV text of a trace, or of ``(meta, rows)`` as returned by :func:`read_csv`."""
    buf = io.StringIO()
    if isinstance(trace_or_meta, Trace):
        _write(buf, trace_metadata(trace_or_meta), trace_rows(trace_or_meta))
    else:
        _write(buf, trace_or_meta, rows)
    return buf.getvalue()


def write_csv(path, trace_or_meta, rows=None) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(csv_text(trace_or_meta, rows))


def read_csv(path) -> tuple[dict, np.ndarray]:
    """Metadata and an ``(n, 7)`` array from an emitted CSV."""
    meta: dict = {}
    rows = []
    header = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                meta[k] = v
            elif header is None:
                header = tuple(line.split(","))
                if header != CSV_COLUMNS:
                    raise ValueError(f"unexpected CSV header {line!r}")
            elif line:
                rows.append([float(x) for x in line.split(",")])
    return meta, np.array(rows, dtype=float).reshape(-1, len(CSV_COLUMNS))


def to_jsonable(obj):
    """Plain JSON structure; infinities and NaN become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else format_float(v)
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value if isinstance(obj.value, str) else obj.name
    return obj


def trace_json(trace: Trace) -> str:
    cols = dict(zip(CSV_COLUMNS, np.array(trace_rows(trace)).T if len(trace) else [[]] * 7))
    doc = {
        "meta": trace_metadata(trace, as_text=False),
        "columns": cols,
        "mode_switches": list(trace.mode_switches),
        "corners": list(trace.corner_indices),
    }
    return json.dumps(to_jsonable(doc), indent=1)


@dataclass
class Layer:
    """One drawable element of an SVG figure, in y-up coordinates."""

    points: np.ndarray
    kind: str = "polyline"  # polyline, segment, marker
    stroke: str = "black"
    width: float = 1.0
    dashed: bool = False
    label: str = ""
    radius: float = 3.0
    extra: dict = field(default_factory=dict)


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def svg_document(layers: Sequence[Layer], size: int = 480, margin: float = 0.05, title: str = "") -> str:
    """SVG text; geometry sits in one group flipped so that y points up."""
    pts = np.vstack([np.asarray(L.points, dtype=float).reshape(-1, 2) for L in layers if len(L.points)])
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-9)
    lo = lo - margin * span
    hi = hi + margin * span
    w, h = hi - lo
    scale = size / max(w, h)
    px_w, px_h = w * scale, h * scale
    unit = 1.0 / scale  # one pixel in user units
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(px_w)}" height="{_fmt(px_h)}" '
        f'viewBox="{_fmt(lo[0])} {_fmt(-hi[1])} {_fmt(w)} {_fmt(h)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<g transform="scale(1,-1)" fill="none" stroke-linecap="round" stroke-linejoin="round">')
    for L in layers:
        p = np.asarray(L.points, dtype=float).reshape(-1, 2)
        p = p[np.all(np.isfinite(p), axis=1)]
        if not len(p):
            continue
        style = f'stroke="{L.stroke}" stroke-width="{_fmt(L.width * unit)}"'
        if L.dashed:
            style += f' stroke-dasharray="{_fmt(4 * unit)} {_fmt(3 * unit)}"'
        cls = f' class="{L.label}"' if L.label else ""
        if L.kind == "marker":
            for x, y in p:
                out.append(f'<circle{cls} cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(L.radius * unit)}" '
                           f'fill="{L.stroke}" stroke="none"/>')
        else:
            coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in p)
            out.append(f'<polyline{cls} points="{coords}" {style}/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def trace_layers(trace: Trace, leading: np.ndarray | None = None, color: str = "black") -> list[Layer]:
    """Leading curve, trace, start and stop vectors, cusp and corner markers."""
    layers = []
    m = trace.meta
    if leading is None and "leading_x" in m:
        leading = np.column_stack([m["leading_x"], m["leading_y"]])
    if leading is not None:
        layers.append(Layer(np.asarray(leading), stroke="#888888", label="leading"))
    pts = trace.points
    layers.append(Layer(pts, stroke=color, width=1.5, label="trace"))
    if leading is not None and len(pts):
        A = np.asarray(leading)
        if len(A) == len(pts):
            layers.append(Layer(np.array([pts[0], A[0]]), kind="segment", stroke=color, label="start"))
            if trace.termination is Termination.STOPPED or len(trace.mode_switches) == 0:
                layers.append(Layer(np.array([pts[-1], A[-1]]), kind="segment", stroke=color,
                                    dashed=True, label="stop"))
    if trace.mode_switches:
        layers.append(Layer(pts[list(trace.mode_switches)], kind="marker", stroke="#c00000", label="cusp"))
    if trace.corner_indices:
        layers.append(Layer(pts[list(trace.corner_indices)], kind="marker", stroke="#0050c0", label="corner"))
    return layers
