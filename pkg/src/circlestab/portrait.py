"""SVG phase portraits: the graph of f over [0, 1] next to the flow on the circle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .field import CircleField
from .fixed_points import Classification, FixedPointSet

WIDTH, HEIGHT = 900, 400
GRAPH = (50.0, 40.0, 470.0, 320.0)   # left, top, width, height
DISC = (720.0, 200.0, 130.0)          # cx, cy, radius
N_ARROWS = 24


@dataclass(frozen=True)
class Arrow:
    x: float
    direction: str      # "right" (x increasing) or "left"


def marker_style(cls: Classification) -> str:
    if cls is Classification.HYPERBOLIC_STABLE:
        return "filled"
    if cls is Classification.HYPERBOLIC_UNSTABLE:
        return "hollow"
    return "half"


def flow_arrows(field: CircleField, count: int = N_ARROWS, tol: float = 0.0):
    """Arrows at evenly spaced anchors; anchors where |f| <= tol are skipped."""
    xs = (np.arange(count) + 0.5) / count
    vals = field.value(xs)
    return [Arrow(float(x), "right" if v > 0 else "left")
            for x, v in zip(xs, vals) if abs(v) > tol]


def portrait_csv(field: CircleField, resolution: int) -> str:
    """Rows ``x,f,df`` at x = i / resolution for i = 0..resolution inclusive."""
    if resolution < 64:
        raise ValueError("portrait resolution must be >= 64")
    xs = np.arange(resolution + 1) / resolution
    fs, dfs = field.value(xs), field.deriv(xs)
    lines = ["x,f,df"]
    lines.extend(f"{x!r},{float(f)!r},{float(d)!r}" for x, f, d in zip(xs.tolist(), fs, dfs))
    return "\n".join(lines) + "\n"


def _fmt(v):
    return f"{v:.3f}"


def _disc_point(x, r):
    cx, cy, _ = DISC
    ang = 2.0 * math.pi * x
    return cx + r * math.cos(ang), cy - r * math.sin(ang)


def _marker_svg(x, y, style, extra):
    r = 6.0
    if style == "filled":
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="black" stroke="black" {extra}/>'
    if style == "hollow":
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="white" stroke="black" {extra}/>'
    half = (f'M {_fmt(x - r)} {_fmt(y)} A {r} {r} 0 0 1 {_fmt(x + r)} {_fmt(y)} Z')
    return (f'<g {extra}><circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="white" stroke="black"/>'
            f'<path d="{half}" fill="black"/></g>')


def render_portrait(field: CircleField, fixed_points: FixedPointSet, resolution: int = 512,
                    version: str = "") -> tuple[str, str]:
    """Return ``(svg_text, csv_text)``.

    Markers carry ``data-x`` and ``data-style``; arrows carry ``data-x`` and
    ``data-direction`` so the structure can be checked without rendering.
    """
    csv_text = portrait_csv(field, resolution)
    gx, gy, gw, gh = GRAPH
    xs = np.arange(resolution + 1) / resolution
    fs = field.value(xs)
    ymax = float(np.max(np.abs(fs))) * 1.1 or 1.0

    def to_graph(x, y):
        return gx + gw * x, gy + gh * (0.5 - 0.5 * y / ymax)

    pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (to_graph(x, y) for x, y in zip(xs, fs)))
    _, zero_y = to_graph(0.0, 0.0)
    title = escape(field.label or "field")
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if version:
        out.append(f"<!-- circlestab {escape(version)} -->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">')
    out.append(f"<title>{title}</title>")
    out.append('<defs><marker id="head" viewBox="0 0 10 10" refX="8" refY="5" markerWidth="6" '
               'markerHeight="6" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z" fill="#444"/></marker></defs>')

    out.append('<g id="graph">')
    out.append(f'<rect x="{gx}" y="{gy}" width="{gw}" height="{gh}" fill="none" stroke="#bbb"/>')
    out.append(f'<line id="zero-axis" x1="{gx}" y1="{_fmt(zero_y)}" x2="{gx + gw}" y2="{_fmt(zero_y)}" '
               'stroke="#888"/>')
    out.append(f'<polyline id="curve" points="{pts}" fill="none" stroke="#1f4e99" stroke-width="1.5"/>')
    out.append(f'<text x="{gx}" y="{gy + gh + 18}">0</text>')
    out.append(f'<text x="{gx + gw - 6}" y="{gy + gh + 18}">1</text>')
    out.append(f'<text x="{gx}" y="{gy - 12}">{title}</text>')
    out.append("</g>")

    arrows = flow_arrows(field, tol=fixed_points.config.tol_zero)
    cx, cy, rad = DISC
    out.append('<g id="circle">')
    out.append(f'<circle cx="{cx}" cy="{cy}" r="{rad}" fill="none" stroke="#444" stroke-width="1.5"/>')
    for pl in fixed_points.plateaus:
        x0, y0 = _disc_point(pl.a, rad)
        x1, y1 = _disc_point(pl.b, rad)
        large = 1 if pl.width > 0.5 else 0
        out.append(f'<path class="plateau" data-a="{pl.a!r}" data-b="{pl.b!r}" '
                   f'd="M {_fmt(x0)} {_fmt(y0)} A {rad} {rad} 0 {large} 0 {_fmt(x1)} {_fmt(y1)}" '
                   'fill="none" stroke="#c33" stroke-width="5"/>')
    for a in arrows:
        # a short chord tangent to the circle, drawn in the direction of the flow
        sgn = 1.0 if a.direction == "right" else -1.0
        x0, y0 = _disc_point(a.x - sgn * 0.012, rad)
        x1, y1 = _disc_point(a.x + sgn * 0.012, rad)
        out.append(f'<line class="arrow" data-x="{a.x!r}" data-direction="{a.direction}" '
                   f'x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                   'stroke="#444" marker-end="url(#head)"/>')
    for p in fixed_points.points:
        style = marker_style(p.classification)
        extra = f'class="marker" data-x="{p.location!r}" data-style="{style}"'
        out.append(_marker_svg(*_disc_point(p.location, rad), style, extra))
    for c in fixed_points.accumulation_suspected:
        px, py = _disc_point(c, rad)
        out.append(f'<text class="accumulation" data-x="{c!r}" x="{_fmt(px)}" y="{_fmt(py)}" '
                   'text-anchor="middle" fill="#c33">*</text>')
    out.append("</g>")

    out.append('<g id="phase-line">')
    for a in arrows:
        px, _ = to_graph(a.x, 0.0)
        dx = 6.0 if a.direction == "right" else -6.0
        out.append(f'<line class="axis-arrow" data-x="{a.x!r}" data-direction="{a.direction}" '
                   f'x1="{_fmt(px - dx)}" y1="{_fmt(zero_y)}" x2="{_fmt(px + dx)}" y2="{_fmt(zero_y)}" '
                   'stroke="#444" marker-end="url(#head)"/>')
    for p in fixed_points.points:
        px, _ = to_graph(p.location, 0.0)
        style = marker_style(p.classification)
        out.append(_marker_svg(px, zero_y, style, f'class="axis-marker" data-x="{p.location!r}" '
                                                  f'data-style="{style}"'))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n", csv_text
