"""Static SVG rendering of scenes, walls, rays and tropical discs."""

from __future__ import annotations

import cmath
from xml.sax.saxutils import escape

SIZE = 600
PALETTE = ["#c0392b", "#2471a3", "#229954", "#7d3c98", "#b9770e", "#17a589"]


def _xf(scene):
    x0, x1, y0, y1 = scene.chart
    sx = SIZE / (x1 - x0)
    sy = SIZE / (y1 - y0)

    def f(z: complex) -> tuple[float, float]:
        return round((z.real - x0) * sx, 4), round((y1 - z.imag) * sy, 4)

    return f


def _poly(points, f) -> str:
    return " ".join(f"{x},{y}" for x, y in (f(p) for p in points))


def render(scene, walls=(), rays=(), discs=(), title: str = "") -> str:
    """SVG 1.1 document; element ids are stable across runs."""
    f = _xf(scene)
    x0, x1, y0, y1 = scene.chart
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title or scene.name or 'scene')}</title>",
        f'<rect id="chart" x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    diam = scene.diameter
    for i, s in enumerate(scene.singularities):
        end = s.position + 2 * diam * cmath.exp(1j * s.cut_angle)
        (ax, ay), (bx, by) = f(s.position), f(end)
        out.append(f'<line id="cut-{i}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                   'stroke="#999" stroke-dasharray="6,4"/>')
    for k, w in enumerate(walls):
        pts = w.polyline
        cls = "wall degenerate" if w.degenerate else "wall"
        out.append(f'<polyline id="wall-{k}" class="{cls}" fill="none" stroke="#c0392b" stroke-width="2" '
                   f'points="{_poly(pts, f)}"><title>{escape(" ".join(str(g) for g in w.charges))}</title></polyline>')
    for k, r in enumerate(rays):
        (ax, ay), (bx, by) = f(r.start), f(r.end)
        out.append(f'<line id="ray-{k}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="#2471a3" stroke-width="1.5"/>')
    for j, d in enumerate(discs):
        color = PALETTE[j % len(PALETTE)]
        for k, e in enumerate(d.edges):
            (ax, ay), (bx, by) = f(d.vertices[e.child]), f(d.vertices[e.parent])
            out.append(f'<line id="disc-{j}-edge-{k}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{color}" '
                       f'stroke-width="{1 + e.weight}"><title>{escape(str(e.charge))} w={e.weight}</title></line>')
        rx, ry = f(d.root)
        out.append(f'<circle id="disc-{j}-root" cx="{rx}" cy="{ry}" r="4" fill="{color}"/>')
    for i, s in enumerate(scene.singularities):
        cx, cy = f(s.position)
        out.append(f'<circle id="sing-{i}" cx="{cx}" cy="{cy}" r="5" fill="black">'
                   f"<title>{escape(str(s.thimble))}</title></circle>")
    bx, by = f(scene.basepoint)
    out.append(f'<rect id="basepoint" x="{bx - 3}" y="{by - 3}" width="6" height="6" fill="#17a589"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
