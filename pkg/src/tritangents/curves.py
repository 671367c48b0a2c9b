"""Embedded planar tropical curves dual to regular Newton subdivisions.

Max convention: the curve of f = sum a_ij x^i y^j is the non-differentiability
locus of max_ij(-val(a_ij) + iX + jY).  A vertex is dual to a 2-cell, a
bounded edge to an interior edge of the subdivision, a leg to a boundary edge
(pointing along the outward normal of the Newton square).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .sextic import PolyInput, CoefficientDatum
from .subdivision import NewtonSubdivision, regular_subdivision, _gcd

Point = Tuple[Fraction, Fraction]
Direction = Tuple[int, int]


def primitive(v: Tuple[Fraction, Fraction]) -> Direction:
    num = (v[0].numerator * v[1].denominator, v[1].numerator * v[0].denominator)
    g = _gcd(abs(num[0]), abs(num[1]))
    return (num[0] // g, num[1] // g)


@dataclass(frozen=True)
class Vertex:
    position: Point
    dual_cell: frozenset  # lattice points of the dual 2-cell


@dataclass(frozen=True)
class Edge:
    a: int                      # vertex indices
    b: int
    direction: Direction        # primitive, from a to b
    weight: int
    length: Fraction            # lattice length: b = a + length * direction
    dual: Tuple[Tuple[int, int], Tuple[int, int]]  # subdivision edge endpoints


@dataclass(frozen=True)
class Leg:
    vertex: int
    direction: Direction
    weight: int
    dual: Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass
class PlanarTropicalCurve:
    degree: int
    vertices: List[Vertex]
    edges: List[Edge]
    legs: List[Leg]
    subdivision: NewtonSubdivision

    def vertex_star(self, vi: int) -> List[Tuple[Direction, int]]:
        """(primitive direction, weight) of every edge/leg at a vertex."""
        star = []
        for e in self.edges:
            if e.a == vi:
                star.append((e.direction, e.weight))
            if e.b == vi:
                star.append(((-e.direction[0], -e.direction[1]), e.weight))
        for l in self.legs:
            if l.vertex == vi:
                star.append((l.direction, l.weight))
        return star

    def check_balancing(self) -> bool:
        for vi in range(len(self.vertices)):
            s = [0, 0]
            for d, w in self.vertex_star(vi):
                s[0] += w * d[0]
                s[1] += w * d[1]
            if s != [0, 0]:
                return False
        return True

    def strata(self):
        """All 1-strata as (base point, direction, length or None, weight, kind, index).

        kind is 'edge' or 'leg'; length None means unbounded.
        """
        out = []
        for i, e in enumerate(self.edges):
            out.append((self.vertices[e.a].position, e.direction, e.length, e.weight, "edge", i))
        for i, l in enumerate(self.legs):
            out.append((self.vertices[l.vertex].position, l.direction, None, l.weight, "leg", i))
        return out

    def locate(self, p: Point):
        """('vertex', i) / ('edge', i, s) / ('leg', i, s) / None for a point on the curve."""
        for i, v in enumerate(self.vertices):
            if v.position == p:
                return ("vertex", i)
        for i, e in enumerate(self.edges):
            s = _param_on_ray(self.vertices[e.a].position, e.direction, p)
            if s is not None and 0 < s < e.length:
                return ("edge", i, s)
        for i, l in enumerate(self.legs):
            s = _param_on_ray(self.vertices[l.vertex].position, l.direction, p)
            if s is not None and s > 0:
                return ("leg", i, s)
        return None

    def genus_bound_vertices(self) -> int:
        return len(self.vertices)


def _param_on_ray(base: Point, d: Direction, p: Point) -> Optional[Fraction]:
    dx, dy = p[0] - base[0], p[1] - base[1]
    if dx * d[1] != dy * d[0]:
        return None
    if d[0] != 0:
        return dx / d[0]
    if d[1] != 0:
        return dy / d[1]
    return None


def dual_curve(f: PolyInput, sub: Optional[NewtonSubdivision] = None) -> PlanarTropicalCurve:
    """The tropical curve dual to the regular subdivision of f."""
    if sub is None:
        sub = regular_subdivision(f)
    d = f.degree
    c = {p: -f.val(*p) for p in f.points()}

    vertices: List[Vertex] = []
    for cell in sub.cells:
        pts = sorted(cell.tight)
        (i0, j0), (i1, j1), (i2, j2) = pts[0], pts[1], pts[2]
        # solve c0 + i0 X + j0 Y = c1 + i1 X + j1 Y = c2 + i2 X + j2 Y
        a11, a12, b1 = i1 - i0, j1 - j0, c[pts[0]] - c[pts[1]]
        a21, a22, b2 = i2 - i0, j2 - j0, c[pts[0]] - c[pts[2]]
        det = a11 * a22 - a12 * a21
        X = Fraction(b1 * a22 - b2 * a12, det)
        Y = Fraction(a11 * b2 - a21 * b1, det)
        vertices.append(Vertex((X, Y), cell.tight))

    edges: List[Edge] = []
    legs: List[Leg] = []
    for (a, b), owners in sub.interior_edges().items():
        w = abs(_gcd(abs(b[0] - a[0]), abs(b[1] - a[1])))
        if len(owners) == 2:
            vi, vj = owners
            P, Q = vertices[vi].position, vertices[vj].position
            if P == Q:
                raise ValueError("degenerate dual edge (coincident vertices)")
            dvec = primitive((Q[0] - P[0], Q[1] - P[1]))
            # dual edge must be perpendicular to the curve edge
            if dvec[0] * (b[0] - a[0]) + dvec[1] * (b[1] - a[1]) != 0:
                raise ValueError("duality violated: edge not perpendicular to dual edge")
            length = (Q[0] - P[0]) / dvec[0] if dvec[0] else (Q[1] - P[1]) / dvec[1]
            edges.append(Edge(vi, vj, dvec, w, length, (a, b)))
        elif len(owners) == 1:
            # boundary edge: leg along the outward normal of the square
            vi = owners[0]
            if a[1] == b[1] == 0:
                direction = (0, -1)
            elif a[1] == b[1] == d:
                direction = (0, 1)
            elif a[0] == b[0] == 0:
                direction = (-1, 0)
            elif a[0] == b[0] == d:
                direction = (1, 0)
            else:
                raise ValueError(f"edge {(a, b)} on no boundary yet has one incident cell")
            legs.append(Leg(vi, direction, w, (a, b)))
        else:
            raise ValueError("subdivision edge incident to more than two cells")

    curve = PlanarTropicalCurve(d, vertices, edges, legs, sub)
    if not curve.check_balancing():
        raise ValueError("balancing fails on the dual curve")
    return curve


# ---------------------------------------------------------------------------
# tritangent (1,1)-curves
# ---------------------------------------------------------------------------

SLOPE_PLUS = "slope_plus"     # trivalent, edge of slope +1; v0 = lower-left vertex
SLOPE_MINUS = "slope_minus"   # trivalent, edge of slope -1; v0 = upper-left vertex
CROSS = "cross"               # 4-valent


@dataclass(frozen=True)
class TritangentParams:
    """Combinatorial type, lower vertex v0 and edge length t of a (1,1)-curve.

    slope_plus:  v0 has legs (-1,0),(0,-1); v1 = v0 + t*(1,1).
    slope_minus: v0 has legs (-1,0),(0,1);  v1 = v0 + t*(1,-1).
    cross:       v0 is the unique 4-valent vertex and t = 0.
    """

    kind: str
    v0: Point
    t: Fraction

    def __post_init__(self):
        if self.kind not in (SLOPE_PLUS, SLOPE_MINUS, CROSS):
            raise ValueError(f"unknown kind {self.kind}")
        if self.kind == CROSS and self.t != 0:
            raise ValueError("4-valent curves have t = 0")
        if self.kind != CROSS and self.t <= 0:
            raise ValueError("trivalent curves need t > 0")

    def v1(self) -> Point:
        if self.kind == SLOPE_PLUS:
            return (self.v0[0] + self.t, self.v0[1] + self.t)
        if self.kind == SLOPE_MINUS:
            return (self.v0[0] + self.t, self.v0[1] - self.t)
        return self.v0

    def parameter_valuations(self) -> Tuple[Fraction, Fraction, Fraction]:
        """Valuations (val m, val n, val u) of l = y + m + n x + u x y."""
        x0, y0 = self.v0
        if self.kind == SLOPE_PLUS:
            return (-y0, x0 - y0, x0 + self.t)
        if self.kind == SLOPE_MINUS:
            # v0 = upper-left vertex: ties y, m and the u-monomial
            return (-y0, x0 - y0 + self.t, x0)
        return (-y0, x0 - y0, x0)

    def d4_apply(self, g) -> "TritangentParams":
        # val(new parameter r) = <column r of param_matrix, old valuations>
        vm, vn, vu = self.parameter_valuations()
        P = g.param_matrix()
        old = (vm, vn, vu)
        new = tuple(sum(P[k][r] * old[k] for k in range(3)) for r in range(3))
        return params_from_valuations(*new)


def params_from_valuations(vm: Fraction, vn: Fraction, vu: Fraction) -> TritangentParams:
    """Recover the combinatorial type and geometry from (val m, val n, val u).

    The unit square is subdivided by the lower hull of the heights
    (vm, vn, 0, vu) at ((0,0),(1,0),(0,1),(1,1)).
    """
    s_plus = vn - vm - vu        # anti-diagonal split iff vn + val(y-coeff) < vm + vu
    if s_plus < 0:
        v0 = (vn - vm, -vm)
        return TritangentParams(SLOPE_PLUS, v0, -s_plus)
    if s_plus > 0:
        v0 = (vu, -vm)
        t = vn - vm - vu
        return TritangentParams(SLOPE_MINUS, v0, t)
    return TritangentParams(CROSS, (vu, -vm), Fraction(0))


def lambda_input(params: TritangentParams) -> PolyInput:
    vm, vn, vu = params.parameter_valuations()
    return PolyInput(1, [
        CoefficientDatum(0, 0, Fraction(vm)),
        CoefficientDatum(1, 0, Fraction(vn)),
        CoefficientDatum(0, 1, Fraction(0)),
        CoefficientDatum(1, 1, Fraction(vu)),
    ])


def lambda_curve(params: TritangentParams) -> PlanarTropicalCurve:
    return dual_curve(lambda_input(params))
