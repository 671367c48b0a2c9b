"""Static SVG figures: the curve, tritangents, tangency points, class labels.

Pure output, SVG 1.1, y-axis pointing up, rational coordinates scaled to a
fixed viewport; the Newton subdivision is drawn as an inset.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .curves import PlanarTropicalCurve, lambda_curve

MARGIN = 40.0
SIZE = 720.0
LEG_REACH = Fraction(3, 2)


def _bounds(curves: Sequence[PlanarTropicalCurve]):
    xs, ys = [], []
    for c in curves:
        for v in c.vertices:
            xs.append(v.position[0])
            ys.append(v.position[1])
    if not xs:
        xs, ys = [Fraction(0)], [Fraction(0)]
    pad = LEG_REACH
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


class _Mapper:
    def __init__(self, bounds):
        x0, y0, x1, y1 = bounds
        span = max(x1 - x0, y1 - y0, Fraction(1))
        self.x0, self.y0, self.span = x0, y0, span

    def __call__(self, p) -> Tuple[float, float]:
        X = MARGIN + float((p[0] - self.x0) / self.span) * SIZE
        Y = MARGIN + SIZE - float((p[1] - self.y0) / self.span) * SIZE
        return (X, Y)


def _polyline(m, a, b, **style):
    (x1, y1), (x2, y2) = m(a), m(b)
    s = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())
    return f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" {s}/>'


def _curve_elems(curve: PlanarTropicalCurve, m, color: str, width: float, dash=None):
    out = []
    style = {"stroke": color, "stroke_width": width}
    if dash:
        style["stroke_dasharray"] = dash
    for e in curve.edges:
        A = curve.vertices[e.a].position
        B = curve.vertices[e.b].position
        out.append(_polyline(m, A, B, **style))
    for l in curve.legs:
        A = curve.vertices[l.vertex].position
        B = (A[0] + LEG_REACH * l.direction[0], A[1] + LEG_REACH * l.direction[1])
        out.append(_polyline(m, A, B, **style))
    return out


def render_svg(gamma: PlanarTropicalCurve,
               tritangents: Sequence = (),
               labels: Optional[Sequence[str]] = None,
               tangency_points: Sequence = (),
               with_subdivision: bool = True) -> str:
    """An SVG drawing of Gamma, optional tritangents and tangency points."""
    lams = [lambda_curve(t.params if hasattr(t, "params") else t) for t in tritangents]
    m = _Mapper(_bounds([gamma] + lams))
    W = SIZE + 2 * MARGIN
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'width="{W:.0f}" height="{W:.0f}" viewBox="0 0 {W:.0f} {W:.0f}">',
             f'<rect width="{W:.0f}" height="{W:.0f}" fill="white"/>']
    parts.extend(_curve_elems(gamma, m, "#1a1a1a", 2.0))
    palette = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"]
    for idx, lam in enumerate(lams):
        color = palette[idx % len(palette)]
        parts.extend(_curve_elems(lam, m, color, 1.4, dash="6,4"))
        v0 = lam.vertices[0].position
        X, Y = m(v0)
        if labels and idx < len(labels):
            parts.append(f'<text x="{X + 6:.1f}" y="{Y - 6:.1f}" font-size="13" '
                         f'fill="{color}">{labels[idx]}</text>')
    for p in tangency_points:
        X, Y = m(p)
        parts.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="4" fill="black"/>')
    if with_subdivision:
        parts.extend(_subdivision_inset(gamma))
    parts.append("</svg>")
    return "\n".join(parts)


def _subdivision_inset(gamma: PlanarTropicalCurve):
    sub = gamma.subdivision
    side = 120.0
    ox, oy = MARGIN + SIZE - side - 8, MARGIN + 8
    cell = side / max(sub.degree, 1)
    out = [f'<g stroke="#888" stroke-width="1" fill="none">',
           f'<rect x="{ox:.1f}" y="{oy:.1f}" width="{side:.1f}" height="{side:.1f}"/>']

    def mp(q):
        return (ox + q[0] * cell, oy + side - q[1] * cell)

    seen = set()
    for c in sub.cells:
        for a, b in c.edges():
            key = (a, b) if a <= b else (b, a)
            if key in seen:
                continue
            seen.add(key)
            (x1, y1), (x2, y2) = mp(a), mp(b)
            out.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}"/>')
    out.append("</g>")
    return out
