"""Deterministic SVG figures and CSV/JSON tables.

Curves are written as ``<polyline>`` elements in data coordinates inside a
transformed group, so the numbers in the file are the plotted values at six
significant digits and can be read back with :func:`extract_curves`.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import EmptyFigure, IoFailure, ValidationError

__all__ = [
    "Curve",
    "FigureDocument",
    "render_svg",
    "extract_curves",
    "format_number",
    "table_text",
    "write_table",
]

SVG_NS = "http://www.w3.org/2000/svg"
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


@dataclass
class Curve:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    style: Mapping[str, str] = field(default_factory=dict)


@dataclass
class FigureDocument:
    curves: list[Curve]
    title: str = ""
    x_label: str = "x"
    y_label: str = "y"
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    width: int = 640
    height: int = 480


def _g6(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def _nice_ticks(lo, hi, count=6):
    span = hi - lo
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _auto_range(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    if lo == hi:
        pad = 1.0 if lo == 0 else 0.1 * abs(lo)
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def render_svg(fig: FigureDocument) -> str:
    """Standalone SVG text; identical figures give byte-identical output."""
    curves = [c for c in fig.curves if len(c.x)]
    if not curves:
        raise EmptyFigure("figure has no curves with points")
    for c in curves:
        if len(c.x) != len(c.y):
            raise ValidationError(f"curve {c.label!r}: x and y lengths differ")
        if not (np.all(np.isfinite(c.x)) and np.all(np.isfinite(c.y))):
            raise ValidationError(f"curve {c.label!r} has non-finite coordinates")
    xr = fig.x_range or _auto_range(np.concatenate([np.asarray(c.x, float) for c in curves]))
    yr = fig.y_range or _auto_range(np.concatenate([np.asarray(c.y, float) for c in curves]))

    W, H = fig.width, fig.height
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = W - left - right, H - top - bottom
    sx = pw / (xr[1] - xr[0])
    sy = ph / (yr[1] - yr[0])
    tx = left - xr[0] * sx
    ty = top + yr[1] * sy

    out = io.StringIO()
    w = out.write
    w('<?xml version="1.0" encoding="UTF-8"?>\n')
    w(f'<svg xmlns="{SVG_NS}" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n')
    w(f'<defs><clipPath id="plot-area"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></clipPath></defs>\n')
    w(f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>\n')
    if fig.title:
        w(f'<text x="{W / 2:g}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(fig.title)}</text>\n')
    w(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>\n')
    for t in _nice_ticks(*xr):
        px = tx + t * sx
        w(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        w(f'<text x="{px:.2f}" y="{top + ph + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{_g6(t)}</text>\n')
    for t in _nice_ticks(*yr):
        py = ty - t * sy
        w(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        w(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{_g6(t)}</text>\n')
    w(f'<text x="{left + pw / 2:g}" y="{H - 10}" text-anchor="middle" font-family="sans-serif" font-size="13">{escape(fig.x_label)}</text>\n')
    w(f'<text x="16" y="{top + ph / 2:g}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {top + ph / 2:g})">{escape(fig.y_label)}</text>\n')
    w('<g clip-path="url(#plot-area)">\n')
    w(f'<g transform="matrix({sx:.10g} 0 0 {-sy:.10g} {tx:.10g} {ty:.10g})">\n')
    for i, c in enumerate(curves):
        stroke = c.style.get("stroke", PALETTE[i % len(PALETTE)])
        width = c.style.get("stroke-width", "1.5")
        dash = c.style.get("stroke-dasharray")
        pts = " ".join(f"{_g6(a)},{_g6(b)}" for a, b in zip(c.x, c.y))
        extra = f" stroke-dasharray={quoteattr(dash)}" if dash else ""
        w(
            f'<polyline class="curve" data-label={quoteattr(c.label)} fill="none" stroke={quoteattr(stroke)} '
            f'stroke-width={quoteattr(width)} vector-effect="non-scaling-stroke"{extra} points="{pts}"/>\n'
        )
    w("</g>\n</g>\n</svg>\n")
    return out.getvalue()


def extract_curves(svg_text: str) -> dict[str, np.ndarray]:
    """Map each polyline's label to an ``(n, 2)`` array of its data points."""
    root = ET.fromstring(svg_text)
    out = {}
    for el in root.iter(f"{{{SVG_NS}}}polyline"):
        pts = [tuple(map(float, p.split(","))) for p in el.get("points", "").split()]
        out[el.get("data-label", f"curve{len(out)}")] = np.array(pts, dtype=float).reshape(-1, 2)
    return out


def format_number(v, digits: int = 12) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = f"{float(v):.{digits}g}"
        return "0" if s == "-0" else s
    if isinstance(v, enum.Enum):
        return str(v)
    return str(v)


def _json_value(v, digits):
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if not math.isfinite(f):
            return None
        return float(f"{f:.{digits}g}")
    return str(v)


def table_text(
    rows: Iterable[Mapping], fmt: str, fieldnames: Sequence[str] | None = None, digits: int = 12
) -> str:
    """Render homogeneous records as CSV (header row, LF endings) or a JSON array."""
    rows = list(rows)
    keys = list(fieldnames) if fieldnames is not None else (list(rows[0]) if rows else [])
    for r in rows:
        if list(r) != keys:
            raise ValidationError(f"rows are not homogeneous: {list(r)} vs {keys}")
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(keys)
        for r in rows:
            wr.writerow([format_number(r[k], digits) for k in keys])
        return buf.getvalue()
    if fmt == "json":
        data = [{k: _json_value(r[k], digits) for k in keys} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    raise ValidationError(f"unknown table format {fmt!r}")


def write_table(
    rows: Iterable[Mapping], fmt: str, path, fieldnames: Sequence[str] | None = None
) -> Path:
    """Write :func:`table_text` output to ``path`` (UTF-8)."""
    text = table_text(rows, fmt, fieldnames)
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path
