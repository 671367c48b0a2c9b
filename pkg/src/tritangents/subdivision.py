"""Regular Newton subdivisions from valuation heights (max convention).

The subdivision induced by the heights h_ij = val(a_ij) is the projection of
the lower hull of the lifted points ((i,j), h_ij).  Cells are the maximal
coplanar lower faces; the tropical curve dual to the subdivision is built in
:mod:`tritangents.curves`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .sextic import PolyInput

LatticePoint = Tuple[int, int]


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points: Sequence[LatticePoint]) -> List[LatticePoint]:
    """Vertices of the 2D convex hull in counterclockwise order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class Cell:
    """One 2-cell of the subdivision."""

    vertices: Tuple[LatticePoint, ...]   # hull vertices, ccw
    tight: FrozenSet[LatticePoint]       # all lattice points on the cell's face

    def doubled_area(self) -> int:
        v = self.vertices
        return abs(sum(v[k][0] * v[(k + 1) % len(v)][1] - v[(k + 1) % len(v)][0] * v[k][1]
                       for k in range(len(v))))

    def edges(self) -> List[Tuple[LatticePoint, LatticePoint]]:
        """Minimal boundary segments: consecutive tight points along the hull."""
        out = []
        verts = list(self.vertices)
        for k in range(len(verts)):
            a, b = verts[k], verts[(k + 1) % len(verts)]
            on_side = [p for p in self.tight
                       if _cross2(a, b, p) == 0 and _between(a, b, p)]
            on_side.sort(key=lambda p: (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]))
            for s, t in zip(on_side, on_side[1:]):
                out.append((s, t))
        return out


def _between(a, b, p):
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


@dataclass(frozen=True)
class NewtonSubdivision:
    degree: int
    cells: Tuple[Cell, ...]
    marked: FrozenSet[LatticePoint]

    def interior_edges(self) -> Dict[Tuple[LatticePoint, LatticePoint], List[int]]:
        """Map from minimal edge (sorted endpoints) to indices of incident cells."""
        seen: Dict[Tuple[LatticePoint, LatticePoint], List[int]] = {}
        for idx, cell in enumerate(self.cells):
            for a, b in cell.edges():
                key = (a, b) if a <= b else (b, a)
                seen.setdefault(key, []).append(idx)
        return seen


def regular_subdivision(f: PolyInput) -> NewtonSubdivision:
    """Subdivision of the d x d square induced by the valuations (max convention)."""
    pts = f.points()
    heights = [f.val(i, j) for (i, j) in pts]
    den = 1
    for h in heights:
        den = den * h.denominator // _gcd(den, h.denominator)
    H = {p: int(f.val(*p) * den) for p in pts}

    cells: List[Cell] = []
    seen_planes = set()
    n = len(pts)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                pa, pb, pc = pts[a], pts[b], pts[c]
                # normal of the plane through the three lifted points
                u = (pb[0] - pa[0], pb[1] - pa[1], H[pb] - H[pa])
                v = (pc[0] - pa[0], pc[1] - pa[1], H[pc] - H[pa])
                nx = u[1] * v[2] - u[2] * v[1]
                ny = u[2] * v[0] - u[0] * v[2]
                nz = u[0] * v[1] - u[1] * v[0]
                if nz == 0:
                    continue
                if nz < 0:
                    nx, ny, nz = -nx, -ny, -nz
                off = nx * pa[0] + ny * pa[1] + nz * H[pa]
                g = _gcd(_gcd(abs(nx), abs(ny)), _gcd(nz, abs(off))) or 1
                key = (nx // g, ny // g, nz // g, off // g)
                if key in seen_planes:
                    continue
                # lower face: every lifted point lies on or above the plane
                vals = [nx * p[0] + ny * p[1] + nz * H[p] for p in pts]
                if any(vv < off for vv in vals):
                    continue
                seen_planes.add(key)
                tight = frozenset(p for p, vv in zip(pts, vals) if vv == off)
                hull = _hull2d(list(tight))
                if len(hull) >= 3:
                    cells.append(Cell(tuple(hull), tight))
    marked = frozenset(p for cell in cells for p in cell.tight)
    return NewtonSubdivision(f.degree, tuple(cells), marked)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def is_smooth(sub: NewtonSubdivision) -> bool:
    """True iff every cell is a unimodular lattice triangle."""
    return all(len(c.tight) == 3 and c.doubled_area() == 1 for c in sub.cells)


class NotSmoothError(ValueError):
    """Raised by operations that require a smooth tropical curve."""
