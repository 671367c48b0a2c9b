"""Set-theoretic and stable intersection of two embedded tropical curves.

Stable intersection follows the fan displacement rule: translate the second
curve by eps*v for a generic direction v, intersect transversally, and push
each crossing to its eps->0 limit.  All computations are exact; quantities
that are affine in eps are compared lexicographically in (constant, slope).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import PlanarTropicalCurve, Point, Direction

F0 = Fraction(0)


class UnboundedComponentError(ValueError):
    """An overlap is unbounded in a way outside the generic regime."""


class InternalConsistencyError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# stable intersection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StablePoint:
    point: Point
    multiplicity: int


@dataclass
class StableDivisor:
    points: List[StablePoint]

    def degree(self) -> int:
        return sum(p.multiplicity for p in self.points)

    def as_dict(self) -> Dict[Point, int]:
        return {p.point: p.multiplicity for p in self.points}


def _lex_ge0(c: Fraction, s: Fraction) -> bool:
    """a(eps) = c + s*eps >= 0 for all small eps > 0."""
    return c > 0 or (c == 0 and s >= 0)


def _lex_gt0(c: Fraction, s: Fraction) -> bool:
    return c > 0 or (c == 0 and s > 0)


def displacement_direction(gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve) -> Tuple[int, int]:
    """Deterministic direction v=(1,phi) not parallel to any stratum of either curve."""
    slopes = set()
    for curve in (gamma, lam):
        for (_, d, _, _, _, _) in curve.strata():
            if d[0] != 0:
                slopes.add(Fraction(d[1], d[0]))
    phi = 2
    while Fraction(phi) in slopes:
        phi += 1
    return (1, phi)


def stable_intersection(
    gamma: PlanarTropicalCurve,
    lam: PlanarTropicalCurve,
    direction: Optional[Tuple[int, int]] = None,
) -> StableDivisor:
    """Limit of gamma meet (lam + eps*v), with multiplicities |det| * weights."""
    v = direction if direction is not None else displacement_direction(gamma, lam)
    acc: Dict[Point, int] = {}
    for (A, d, L1, w1, _, _) in gamma.strata():
        for (B, e, L2, w2, _, _) in lam.strata():
            det = d[0] * e[1] - d[1] * e[0]
            if det == 0:
                continue
            # A + s d = B + eps v + r e
            rx = B[0] - A[0]
            ry = B[1] - A[1]
            # Cramer: s*d - r*e = (rx + eps vx, ry + eps vy)
            s0 = Fraction(rx * e[1] - ry * e[0], det)
            s1 = Fraction(v[0] * e[1] - v[1] * e[0], det)
            r0 = Fraction(rx * d[1] - ry * d[0], det)
            r1 = Fraction(v[0] * d[1] - v[1] * d[0], det)
            # require s in [0, L1), r in [0, L2) for all small eps > 0
            if not _lex_ge0(s0, s1):
                continue
            if L1 is not None and not _lex_gt0(L1 - s0, -s1):
                continue
            if not _lex_ge0(r0, r1):
                continue
            if L2 is not None and not _lex_gt0(L2 - r0, -r1):
                continue
            pt = (A[0] + s0 * d[0], A[1] + s0 * d[1])
            acc[pt] = acc.get(pt, 0) + abs(det) * w1 * w2
    pts = [StablePoint(p, m) for p, m in sorted(acc.items())]
    return StableDivisor(pts)


# ---------------------------------------------------------------------------
# set-theoretic intersection
# ---------------------------------------------------------------------------


@dataclass
class Piece:
    """A maximal straight piece of the intersection: segment, ray or point."""

    start: Point
    end: Optional[Point]            # None for an unbounded ray
    direction: Optional[Direction]  # None for isolated points


@dataclass
class IntersectionComponent:
    pieces: List[Piece]
    nodes: List[Point] = field(default_factory=list)

    def is_point(self) -> bool:
        return all(p.direction is None for p in self.pieces) and len(self.support_points()) == 1

    def support_points(self) -> List[Point]:
        pts = set()
        for p in self.pieces:
            pts.add(p.start)
            if p.end is not None:
                pts.add(p.end)
        return sorted(pts)

    def is_unbounded(self) -> bool:
        return any(p.direction is not None and p.end is None for p in self.pieces)

    def segments(self) -> List[Piece]:
        return [p for p in self.pieces if p.direction is not None]

    def contains_point(self, q: Point) -> bool:
        for p in self.pieces:
            if p.direction is None:
                if p.start == q:
                    return True
                continue
            dx, dy = q[0] - p.start[0], q[1] - p.start[1]
            d = p.direction
            if dx * d[1] != dy * d[0]:
                continue
            s = dx / d[0] if d[0] else dy / d[1]
            if s < 0:
                continue
            if p.end is None:
                return True
            top = (p.end[0] - p.start[0]) / d[0] if d[0] else (p.end[1] - p.start[1]) / d[1]
            if s <= top:
                return True
        return False

    def is_straight_segment(self) -> bool:
        segs = self.segments()
        if not segs or self.is_unbounded():
            return False
        d0 = segs[0].direction
        for p in segs:
            if p.direction[0] * d0[1] != p.direction[1] * d0[0]:
                return False
        # also need all collinear (same line), which connectivity + parallel gives
        return True

    def endpoints_of_segment(self) -> Tuple[Point, Point]:
        """For a straight bounded segment component: its two extreme points."""
        pts = self.support_points()
        return (pts[0], pts[-1])


def _interval_on_ray(base: Point, d: Direction, length, other_base: Point, e: Direction, other_len):
    """Overlap of two collinear strata as parameters on the first one, or None."""
    # check same line
    dx, dy = other_base[0] - base[0], other_base[1] - base[1]
    if dx * d[1] != dy * d[0]:
        return None
    # parameter of other_base on first ray
    t0 = dx / d[0] if d[0] else dy / d[1]
    # direction sense of e relative to d
    same = (d[0] * e[0] + d[1] * e[1]) > 0
    if other_len is None:
        o_lo, o_hi = (t0, None) if same else (None, t0)
    else:
        t1 = t0 + other_len * (1 if same else -1)
        o_lo, o_hi = (min(t0, t1), max(t0, t1))
    lo = max(F0, o_lo) if o_lo is not None else F0
    if length is None:
        hi = o_hi
    elif o_hi is None:
        hi = length
    else:
        hi = min(length, o_hi)
    if hi is not None and lo > hi:
        return None
    if o_lo is None and lo == F0:
        # other stratum extends below 0; clipped at 0 which is fine
        pass
    return (lo, hi)


def set_intersection(gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve) -> List[IntersectionComponent]:
    """Connected components of the point-set intersection."""
    pieces: List[Piece] = []
    for (A, d, L1, _, _, _) in gamma.strata():
        for (B, e, L2, _, _, _) in lam.strata():
            det = d[0] * e[1] - d[1] * e[0]
            if det != 0:
                # transverse: closed-interval crossing test
                rx, ry = B[0] - A[0], B[1] - A[1]
                s = Fraction(rx * e[1] - ry * e[0], det)
                r = Fraction(rx * d[1] - ry * d[0], det)
                if s < 0 or (L1 is not None and s > L1):
                    continue
                if r < 0 or (L2 is not None and r > L2):
                    continue
                pt = (A[0] + s * d[0], A[1] + s * d[1])
                pieces.append(Piece(pt, pt, None))
            else:
                iv = _interval_on_ray(A, d, L1, B, e, L2)
                if iv is None:
                    continue
                lo, hi = iv
                P = (A[0] + lo * d[0], A[1] + lo * d[1])
                if hi is None:
                    pieces.append(Piece(P, None, d))
                elif hi == lo:
                    pieces.append(Piece(P, P, None))
                else:
                    Q = (A[0] + hi * d[0], A[1] + hi * d[1])
                    pieces.append(Piece(P, Q, d))
    return _assemble_components(pieces)


def _assemble_components(pieces: List[Piece]) -> List[IntersectionComponent]:
    n = len(pieces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for i in range(n):
        for j in range(i + 1, n):
            if _pieces_touch(pieces[i], pieces[j]):
                union(i, j)

    groups: Dict[int, List[Piece]] = {}
    for i, p in enumerate(pieces):
        groups.setdefault(find(i), []).append(p)

    comps = []
    for group in groups.values():
        comps.append(_normalize_component(group))
    comps.sort(key=lambda c: c.support_points()[0])
    return comps


def _piece_contains(p: Piece, q: Point) -> bool:
    if p.direction is None:
        return p.start == q
    d = p.direction
    dx, dy = q[0] - p.start[0], q[1] - p.start[1]
    if dx * d[1] != dy * d[0]:
        return False
    s = dx / d[0] if d[0] else dy / d[1]
    if s < 0:
        return False
    if p.end is None:
        return True
    top = (p.end[0] - p.start[0]) / d[0] if d[0] else (p.end[1] - p.start[1]) / d[1]
    return s <= top


def _pieces_touch(a: Piece, b: Piece) -> bool:
    for q in (a.start, a.end):
        if q is not None and _piece_contains(b, q):
            return True
    for q in (b.start, b.end):
        if q is not None and _piece_contains(a, q):
            return True
    # collinear overlapping rays/segments with no endpoint inside each other
    if a.direction is not None and b.direction is not None:
        if a.direction[0] * b.direction[1] == a.direction[1] * b.direction[0]:
            if a.end is None and b.end is None:
                # two rays on the same line: touch iff same line and overlapping senses
                dx, dy = b.start[0] - a.start[0], b.start[1] - a.start[1]
                if dx * a.direction[1] == dy * a.direction[0]:
                    same = (a.direction[0] * b.direction[0] + a.direction[1] * b.direction[1]) > 0
                    if same:
                        return True
                    s = dx / a.direction[0] if a.direction[0] else dy / a.direction[1]
                    return s >= 0
    return False


def _normalize_component(group: List[Piece]) -> IntersectionComponent:
    """Merge collinear overlapping pieces and drop points swallowed by segments."""
    segs = [p for p in group if p.direction is not None]
    points = [p for p in group if p.direction is None]

    # canonical direction per line: lexicographically positive primitive
    def canon(p: Piece) -> Piece:
        d = p.direction
        if d is None:
            return p
        if d < (0, 0) or (d[0] == 0 and d[1] < 0) or (d[1] == 0 and d[0] < 0):
            d = (-d[0], -d[1])
            if p.end is None:
                # ray flips direction only by swapping start at infinity: keep as-is
                return p
            return Piece(p.end, p.start, d)
        return p

    merged: List[Piece] = []
    by_line: Dict[Tuple, List[Piece]] = {}
    for p in segs:
        d = p.direction
        dd = d if (d[0], d[1]) > (0, 0) or (d[0] > 0) or (d[0] == 0 and d[1] > 0) else (-d[0], -d[1])
        if dd[0] < 0 or (dd[0] == 0 and dd[1] < 0):
            dd = (-dd[0], -dd[1])
        # line key: direction + cross-product offset
        off = p.start[0] * dd[1] - p.start[1] * dd[0]
        by_line.setdefault((dd, off), []).append(p)

    for (dd, _), plist in by_line.items():
        # parameters along dd from a common anchor
        anchor = plist[0].start
        intervals = []
        for p in plist:
            s0 = _param(anchor, dd, p.start)
            s1 = _param(anchor, dd, p.end) if p.end is not None else None
            if p.end is None:
                sense = dd[0] * p.direction[0] + dd[1] * p.direction[1] > 0
                intervals.append((s0, None) if sense else (None, s0))
            else:
                lo, hi = sorted([s0, s1])
                intervals.append((lo, hi))
        intervals.sort(key=lambda iv: (iv[0] is None and -1 or 0, iv[0] if iv[0] is not None else F0))
        # merge
        cur_lo, cur_hi = intervals[0]
        out = []
        for lo, hi in intervals[1:]:
            lo_cmp = -float("inf") if lo is None else lo
            hi_cur = float("inf") if cur_hi is None else cur_hi
            if lo_cmp <= hi_cur:
                if hi is None or (cur_hi is not None and hi > cur_hi):
                    cur_hi = hi
            else:
                out.append((cur_lo, cur_hi))
                cur_lo, cur_hi = lo, hi
        out.append((cur_lo, cur_hi))
        for lo, hi in out:
            if lo is None and hi is None:
                raise UnboundedComponentError("overlap unbounded in both directions")
            if lo is None:
                Q = (anchor[0] + hi * dd[0], anchor[1] + hi * dd[1])
                merged.append(Piece(Q, None, (-dd[0], -dd[1])))
                continue
            P = (anchor[0] + lo * dd[0], anchor[1] + lo * dd[1])
            if hi is None:
                merged.append(Piece(P, None, dd))
            else:
                Q = (anchor[0] + hi * dd[0], anchor[1] + hi * dd[1])
                if P == Q:
                    points.append(Piece(P, P, None))
                else:
                    merged.append(Piece(P, Q, dd))

    kept_points = []
    for p in points:
        if not any(_piece_contains(s, p.start) for s in merged):
            if all(q.start != p.start for q in kept_points):
                kept_points.append(p)

    comp = IntersectionComponent(merged + kept_points)
    comp.nodes = comp.support_points()
    return comp


def _param(anchor: Point, d: Direction, q: Point) -> Fraction:
    dx, dy = q[0] - anchor[0], q[1] - anchor[1]
    return dx / d[0] if d[0] else dy / d[1]


# ---------------------------------------------------------------------------
# bookkeeping
# ---------------------------------------------------------------------------


def component_multiplicities(
    components: Sequence[IntersectionComponent], divisor: StableDivisor
) -> List[Tuple[int, bool, int]]:
    """(component index, total even?, total multiplicity) per component."""
    totals = [0] * len(components)
    for sp in divisor.points:
        owner = None
        for idx, comp in enumerate(components):
            if comp.contains_point(sp.point):
                owner = idx
                break
        if owner is None:
            raise InternalConsistencyError(f"stable point {sp.point} on no component")
        totals[owner] += sp.multiplicity
    return [(i, totals[i] % 2 == 0, totals[i]) for i in range(len(components))]


def component_chips(
    components: Sequence[IntersectionComponent], divisor: StableDivisor
) -> List[Dict[Point, int]]:
    """Stable multiplicities grouped by component."""
    chips: List[Dict[Point, int]] = [dict() for _ in components]
    for sp in divisor.points:
        for idx, comp in enumerate(components):
            if comp.contains_point(sp.point):
                chips[idx][sp.point] = chips[idx].get(sp.point, 0) + sp.multiplicity
                break
        else:
            raise InternalConsistencyError(f"stable point {sp.point} on no component")
    return chips
