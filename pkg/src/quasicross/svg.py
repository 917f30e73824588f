"""Deterministic SVG export of drawings and their triple markers.

Output is a pure function of the input drawing and analysis: stable
element order, fixed-precision coordinates, no timestamps, so identical
input gives byte-identical files.  Edge stroke colors come from the stage
tag palette; every triple of pairwise crossing edges is marked with a red
circle around its three crossing points.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .analysis import AnalysisResult, analyze
from .drawing import Drawing

DEFAULT_PALETTE = {
    "initial": "#000000",
    "pink": "#e7549b",
    "darkblue": "#00008b",
    "final": "#356635",
}
DEFAULT_STROKE = "#000000"
TRIPLE_COLOR = "#cc0000"
PALETTE_ENV = "QUASICROSS_PALETTE"


def palette_from_env(env: dict[str, str] | None = None) -> dict[str, str]:
    """Tag color palette, optionally remapped by QUASICROSS_PALETTE
    ("tag=#rrggbb,tag2=#rrggbb")."""
    palette = dict(DEFAULT_PALETTE)
    raw = (env if env is not None else os.environ).get(PALETTE_ENV, "")
    for item in raw.split(","):
        if "=" in item:
            tag, _, color = item.partition("=")
            palette[tag.strip()] = color.strip()
    return palette


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def render_svg(result: AnalysisResult, palette: dict[str, str] | None = None,
               width: int = 800) -> str:
    """Render an analyzed drawing to SVG text (y axis flipped so larger y
    is up, as on paper)."""
    if palette is None:
        palette = palette_from_env()
    d = result.drawing

    points = [v.pos for v in d.vertices]
    for e in d.edges:
        points.extend(e.bends)
    circles = []
    if result.crossing_graph is not None and result.triples is not None:
        locations = result.crossing_graph.locations
        for a, b, c in result.triples.triples:
            pts = [locations[pair] for pair in ((a, b), (a, c), (b, c))]
            cx = float(sum((p.x for p in pts), Fraction(0))) / 3.0
            cy = float(sum((p.y for p in pts), Fraction(0))) / 3.0
            radius = max(((float(p.x) - cx) ** 2 + (float(p.y) - cy) ** 2) ** 0.5
                         for p in pts)
            circles.append((cx, cy, radius))
        points.extend(p for p in locations.values())

    xs = [float(p.x) for p in points]
    ys = [float(p.y) for p in points]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1.0)
    margin = 0.06 * span
    lo_x -= margin
    hi_x += margin
    lo_y -= margin
    hi_y += margin
    scale = width / (hi_x - lo_x)
    height = (hi_y - lo_y) * scale

    def sx(x: float) -> float:
        return (x - lo_x) * scale

    def sy(y: float) -> float:
        return (hi_y - y) * scale

    vertex_r = 0.008 * width
    font = 0.02 * width

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{_fmt(height)}" viewBox="0 0 {width} {_fmt(height)}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for k, e in enumerate(d.edges):
        color = palette.get(e.tag, DEFAULT_STROKE) if e.tag else DEFAULT_STROKE
        pts = " ".join(
            f"{_fmt(sx(float(p.x)))},{_fmt(sy(float(p.y)))}" for p in d.polyline(k))
        lines.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(0.0025 * width)}"/>')
    for cx, cy, radius in circles:
        r = max(radius * scale * 1.25, 2.5 * vertex_r)
        lines.append(
            f'<circle cx="{_fmt(sx(cx))}" cy="{_fmt(sy(cy))}" r="{_fmt(r)}" '
            f'fill="none" stroke="{TRIPLE_COLOR}" '
            f'stroke-width="{_fmt(0.003 * width)}"/>')
    for v in d.vertices:
        x, y = sx(float(v.pos.x)), sy(float(v.pos.y))
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(vertex_r)}" '
            f'fill="#1a1a1a"/>')
        lines.append(
            f'<text x="{_fmt(x + 1.4 * vertex_r)}" y="{_fmt(y - 1.4 * vertex_r)}" '
            f'font-family="sans-serif" font-size="{_fmt(font)}">{v.id}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_svg(d: Drawing, path: str, result: AnalysisResult | None = None,
               palette: dict[str, str] | None = None) -> None:
    """Analyze (unless a result is supplied) and write the figure."""
    if result is None:
        result = analyze(d)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(result, palette))
