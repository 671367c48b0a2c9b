"""Classification of local tangencies between Gamma and a (1,1)-curve.

Each even-multiplicity connected component of the set intersection is
classified by a decision tree on its shape (point / segment / tree /
unbounded overlap), its position within the (1,1)-curve (leg interior, edge
interior, vertex), the strata of Gamma it meets, and the stable multiplicity
pattern.  Tangency points are then placed by chip-firing within the
component and certified against the linear-equivalence oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import PlanarTropicalCurve, Point, Direction
from .divisors import GraphDivisor, Skeleton, linearly_equivalent, skeleton
from .intersect import (
    IntersectionComponent,
    StableDivisor,
    component_chips,
    set_intersection,
    stable_intersection,
)

F0 = Fraction(0)
F2 = Fraction(2)


class NonRealizableShapeError(ValueError):
    """Component matches one of the excluded shapes (3d1),(3e),(3g),(3h1),(3bb'),(3e')."""


class StarConstraintError(ValueError):
    """Local star of Gamma inconsistent with a smooth (3,3)-curve."""


class GammaNonGenericError(ValueError):
    """Edge-length ties forbidden by the genericity assumptions on Gamma."""


class NonGenericInputError(ValueError):
    pass


@dataclass(frozen=True)
class LocalTangencyType:
    code: str                      # e.g. "2a", "3cc", "4a'", "8"
    orientation: str               # "horizontal" | "vertical" | "diagonal" | "n/a"
    position: str                  # "leg" | "edge" | "vertex" | "cross-vertex"
    carrier: Tuple                 # carrying stratum data, e.g. ("leg", (1,0)) or ("vertex", 1)

    def multiplicity_class(self) -> int:
        return {"1": 2, "1'": 2, "2a": 2, "2b": 4, "2a'": 2,
                "3a": 2, "3a'": 2, "3c": 2, "3c'": 2, "3aa": 2, "3ac": 2, "3cc": 2,
                "3ab": 4, "3cb": 4, "3bb": 4, "3bb1": 4, "3bb2": 4,
                "3d": 4, "3f": 4, "3h": 4,
                "4a": 2, "4b": 4, "4a'": 2, "4b'": 4,
                "5a": 2, "5b": 4, "6a": 2, "6b": 4, "6a'": 2, "6b'": 4,
                "7": 6, "8": 6}[self.code]


@dataclass
class TangencyRecord:
    component: IntersectionComponent
    chips: Dict[Point, int]
    type: LocalTangencyType
    lam_vertices: Tuple[int, ...]            # indices of Lambda-vertices in the component
    gamma_anchor: Dict = field(default_factory=dict)   # per-type geometric data
    tangency_points: Optional[List[Point]] = None      # each of multiplicity 2
    tree_lengths: Optional[Tuple[Fraction, ...]] = None  # L1..L5 for type (8)
    star_lengths: Optional[Tuple[Fraction, ...]] = None  # lambda1..3 for type (3f)

    @property
    def code(self) -> str:
        return self.type.code

    def total(self) -> int:
        return sum(self.chips.values())


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _det(a: Direction, b: Direction) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _lam_vertex_roles(lam: PlanarTropicalCurve) -> Dict[int, str]:
    """Map vertex index -> 'v0' / 'v1' / 'v' for the three Lambda types."""
    if len(lam.vertices) == 1:
        return {0: "v"}
    roles = {}
    for i, v in enumerate(lam.vertices):
        cell = v.dual_cell
        if (0, 0) in cell and (1, 0) in cell and (0, 1) in cell:
            roles[i] = "v0"          # slope_plus lower vertex
        elif (1, 1) in cell and (1, 0) in cell and (0, 1) in cell:
            roles[i] = "v1"          # slope_plus upper vertex
        elif (0, 0) in cell and (0, 1) in cell and (1, 1) in cell:
            roles[i] = "v0"          # slope_minus upper-left vertex
        elif (0, 0) in cell and (1, 0) in cell and (1, 1) in cell:
            roles[i] = "v1"          # slope_minus lower-right vertex
        else:
            raise ValueError("unrecognized Lambda vertex cell")
    return roles


def _lam_kind(lam: PlanarTropicalCurve) -> str:
    if len(lam.vertices) == 1:
        return "cross"
    edge_dir = lam.edges[0].direction
    return "slope_plus" if edge_dir in ((1, 1), (-1, -1)) else "slope_minus"


def _gamma_star(gamma: PlanarTropicalCurve, vi: int) -> List[Direction]:
    return [d for (d, _) in gamma.vertex_star(vi)]


def _orientation_of_stratum(d: Direction) -> str:
    if d[1] == 0:
        return "horizontal"
    if d[0] == 0:
        return "vertical"
    return "diagonal"


def _responsible_orientation(lam, vi, cell) -> str:
    """Orientation of a vertex tangency: the stratum of Lambda at the vertex
    across whose line coordinates the Gamma cell has width two."""
    kind = _lam_kind(lam)
    strata = []
    for (d, _) in lam.vertex_star(vi):
        if d[1] == 0:
            strata.append((d, (0, 1)))
        elif d[0] == 0:
            strata.append((d, (1, 0)))
        else:
            strata.append((d, (-1, 1) if kind == "slope_plus" else (1, 1)))
    for d, delta in strata:
        avals = [Q[0] * delta[1] - Q[1] * delta[0] for Q in cell]
        if max(avals) - min(avals) == 2:
            return _orientation_of_stratum(d)
    raise StarConstraintError("no stratum of width two at a vertex tangency")


def _stratum_of_lambda(lam: PlanarTropicalCurve, p: Point):
    """('vertex', role) / ('leg', direction) / ('edge', direction)."""
    where = lam.locate(p)
    if where is None:
        raise ValueError(f"{p} not on Lambda")
    if where[0] == "vertex":
        return ("vertex", where[1])
    if where[0] == "leg":
        return ("leg", lam.legs[where[1]].direction)
    return ("edge", lam.edges[where[1]].direction)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def classify_component(
    gamma: PlanarTropicalCurve,
    lam: PlanarTropicalCurve,
    comp: IntersectionComponent,
    chips: Dict[Point, int],
) -> TangencyRecord:
    total = sum(chips.values())
    if total % 2 != 0 or total == 0 or total > 6:
        raise ValueError(f"component multiplicity {total} is not an even tangency total")
    for p in chips:
        loc = gamma.locate(p)
        if loc is not None and loc[0] == "leg":
            raise NonGenericInputError(f"stable point {p} on a leg interior of Gamma")

    kind = _lam_kind(lam)
    roles = _lam_vertex_roles(lam)
    lam_vs = tuple(i for i, v in enumerate(lam.vertices) if comp.contains_point(v.position))

    if comp.is_point():
        return _classify_point(gamma, lam, comp, chips, kind, roles, lam_vs)
    if kind == "cross":
        return _classify_cross_extended(gamma, lam, comp, chips, roles, lam_vs)
    return _classify_trivalent_extended(gamma, lam, comp, chips, roles, lam_vs)


def _mk(code, orientation, position, carrier, comp, chips, lam_vs, **anchor) -> TangencyRecord:
    t = LocalTangencyType(code, orientation, position, carrier)
    return TangencyRecord(comp, dict(chips), t, lam_vs, anchor)


def _classify_point(gamma, lam, comp, chips, kind, roles, lam_vs) -> TangencyRecord:
    (p, mult), = chips.items()
    lam_stratum = _stratum_of_lambda(lam, p)
    gloc = gamma.locate(p)
    if gloc is None:
        raise ValueError("tangency point not on Gamma")

    if lam_stratum[0] != "vertex":
        orientation = _orientation_of_stratum(lam_stratum[1])
        if gloc[0] == "edge":
            e = gamma.edges[gloc[1]]
            return _mk("1", orientation, lam_stratum[0], lam_stratum, comp, chips, lam_vs,
                       gamma_edge=gloc[1], gamma_dual=e.dual)
        # at a vertex of Gamma
        cell = gamma.vertices[gloc[1]].dual_cell
        code = "2a" if mult == 2 else "2b"
        if kind == "cross" and mult == 2:
            code = "2a'"
        return _mk(code, orientation, lam_stratum[0], lam_stratum, comp, chips, lam_vs,
                   gamma_vertex=gloc[1], gamma_cell=cell)

    # at a vertex of Lambda
    vi = lam_stratum[1]
    role = roles[vi]
    lam_star = [d for (d, _) in lam.vertex_star(vi)]
    if gloc[0] == "edge":
        e = gamma.edges[gloc[1]]
        responsible = [d for d in lam_star if abs(_det(d, e.direction)) == mult]
        orientation = _orientation_of_stratum(responsible[0]) if responsible else "diagonal"
        if kind == "cross":
            code = "4a'" if mult == 2 else "4b'"
            return _mk(code, orientation, "cross-vertex", ("vertex", role), comp, chips, lam_vs,
                       gamma_edge=gloc[1], gamma_dual=e.dual, lam_vertex=vi)
        code = "4a" if mult == 2 else "4b"
        return _mk(code, orientation, "vertex", ("vertex", role), comp, chips, lam_vs,
                   gamma_edge=gloc[1], gamma_dual=e.dual, lam_vertex=vi)
    # vertex of Lambda at a vertex of Gamma, isolated
    gstar = _gamma_star(gamma, gloc[1])
    cell = gamma.vertices[gloc[1]].dual_cell
    shared = [d for d in gstar if d in lam_star]
    if shared:
        raise StarConstraintError("shared ray at an isolated vertex-vertex tangency")
    opposite = sorted((-d[0], -d[1]) for d in gstar) == sorted(lam_star)
    if kind == "cross":
        raise StarConstraintError(
            "isolated 4-valent-vertex-on-Gamma-vertex tangency is not a realizable type")
    if mult == 2:
        if not opposite:
            raise StarConstraintError("mult-2 vertex-vertex tangency requires opposite stars")
        return _mk("5a", "n/a", "vertex", ("vertex", role), comp, chips, lam_vs,
                   gamma_vertex=gloc[1], gamma_cell=cell, lam_vertex=vi)
    return _mk("5b", "n/a", "vertex", ("vertex", role), comp, chips, lam_vs,
               gamma_vertex=gloc[1], gamma_cell=cell, lam_vertex=vi)


def _six_orientation(gamma, lam, vi, gv):
    cell = gamma.vertices[gv].dual_cell
    return _responsible_orientation(lam, vi, sorted(cell))


def _arm_data(comp: IntersectionComponent, center: Point):
    """Bounded/unbounded arms of a tree component at a given node."""
    arms = []
    for piece in comp.pieces:
        if piece.direction is None:
            continue
        for (start, end, d) in ((piece.start, piece.end, piece.direction),
                                (piece.end, piece.start,
                                 (-piece.direction[0], -piece.direction[1]))):
            if start == center:
                arms.append((d, end))
    return arms


def _classify_trivalent_extended(gamma, lam, comp, chips, roles, lam_vs) -> TangencyRecord:
    total = sum(chips.values())
    v_positions = {i: lam.vertices[i].position for i in range(len(lam.vertices))}
    edge = lam.edges[0]
    va, vb = edge.a, edge.b
    pa, pb = v_positions[va], v_positions[vb]
    unbounded = [pc for pc in comp.pieces if pc.direction is not None and pc.end is None]
    q = len(unbounded)

    if len(lam_vs) == 2:
        return _classify_both_vertices(gamma, lam, comp, chips, roles, lam_vs, q, total)
    if len(lam_vs) == 1:
        return _classify_one_vertex(gamma, lam, comp, chips, roles, lam_vs, q, total)
    # no vertex of Lambda: bounded straight segment on a leg or on the edge
    if q > 0 or not comp.is_straight_segment():
        raise NonRealizableShapeError("vertex-free component must be a bounded segment")
    A, B = comp.endpoints_of_segment()
    stratumA = _stratum_of_lambda(lam, A)
    # both endpoints are Gamma-vertices; chips must be (1,1)
    if sorted(chips.values()) != [1, 1]:
        raise NonRealizableShapeError("vertex-free segment with chips != (1,1)")
    anchors = _segment_anchors(gamma, A, B)
    if stratumA[0] == "edge" or _stratum_of_lambda(lam, B)[0] == "edge" or _on_open_edge(lam, A, B):
        return _mk("3cc", "diagonal", "edge", ("edge", lam.edges[0].direction),
                   comp, chips, lam_vs, **anchors)
    d = stratumA[1] if stratumA[0] == "leg" else _stratum_of_lambda(lam, B)[1]
    return _mk("3c", _orientation_of_stratum(d), "leg", ("leg", d), comp, chips, lam_vs, **anchors)


def _on_open_edge(lam, A, B):
    mid = ((A[0] + B[0]) / 2, (A[1] + B[1]) / 2)
    w = lam.locate(mid)
    return w is not None and w[0] == "edge"


def _segment_anchors(gamma, A, B) -> Dict:
    """Dual data of the Gamma-edge carrying [A,B] and the cells at its ends."""
    mid = ((A[0] + B[0]) / 2, (A[1] + B[1]) / 2)
    loc = gamma.locate(mid)
    out: Dict = {}
    if loc is not None and loc[0] == "edge":
        out["gamma_edge"] = loc[1]
        out["gamma_dual"] = gamma.edges[loc[1]].dual
    for name, pt in (("cell_A", A), ("cell_B", B)):
        w = gamma.locate(pt)
        if w is not None and w[0] == "vertex":
            out[name] = gamma.vertices[w[1]].dual_cell
            out[name + "_vertex"] = w[1]
    return out


def _classify_both_vertices(gamma, lam, comp, chips, roles, lam_vs, q, total) -> TangencyRecord:
    edge = lam.edges[0]
    pa = lam.vertices[edge.a].position
    pb = lam.vertices[edge.b].position
    ca, cb = chips.get(pa, 0), chips.get(pb, 0)
    support_is_edge = all(
        pc.direction is None or _collinear_with(pc, edge.direction) for pc in comp.pieces
    ) and not comp.is_unbounded()
    odir = "diagonal"
    carrier = ("edge", edge.direction)

    if support_is_edge and set(comp.support_points()) <= _points_on_edge(lam, comp):
        if total == 6:
            if sorted((ca, cb)) == [3, 3]:
                return _mk("7", odir, "edge", carrier, comp, chips, lam_vs,
                           v0=pa, v1=pb)
            raise NonRealizableShapeError("multiplicity-6 edge component without (3,3) chips")
        if total == 4:
            if sorted((ca, cb)) == [2, 2]:
                return _mk("3h", odir, "edge", carrier, comp, chips, lam_vs,
                           **_segment_anchors(gamma, pa, pb))
            if sorted((ca, cb)) == [1, 3]:
                return _mk("3bb2", odir, "edge", carrier, comp, chips, lam_vs)
            raise NonRealizableShapeError("multiplicity-4 edge component with bad chips")
        if total == 2 and sorted((ca, cb)) == [1, 1]:
            return _mk("3aa", odir, "edge", carrier, comp, chips, lam_vs,
                       **_segment_anchors(gamma, pa, pb))
        raise NonRealizableShapeError("edge component with unrecognized chips")

    # component strictly contains the edge
    arms_a = [(d, e) for (d, e) in _arm_data(comp, pa) if not _collinear_with_dir(d, edge.direction)]
    arms_b = [(d, e) for (d, e) in _arm_data(comp, pb) if not _collinear_with_dir(d, edge.direction)]
    if q == 0:
        if len(arms_a) == 2 and len(arms_b) == 2 and total == 6:
            return _make_tree_shape(gamma, lam, comp, chips, lam_vs, pa, pb, arms_a, arms_b)
        raise NonRealizableShapeError("type (3g)-like bounded overlap is not realizable")
    if q == 2:
        # both unbounded arms at one vertex: (3ab); the other vertex has
        # Gamma passing straight through it
        return _mk("3ab", "diagonal", "edge", carrier, comp, chips, lam_vs)
    if q == 1:
        # tripod at one vertex with one unbounded leg overlap, edge fully covered: (3d)
        two_chip = [p for p, c in chips.items() if c == 2]
        if len(two_chip) != 1 or total != 4:
            raise NonRealizableShapeError("type (3d1)-like overlap is not realizable")
        P = two_chip[0]
        anchor = {}
        w = gamma.locate(P)
        if w is not None and w[0] == "vertex":
            anchor["cell_P"] = gamma.vertices[w[1]].dual_cell
            anchor["gamma_vertex"] = w[1]
        others = [p for p, c in chips.items() if c == 1]
        return _mk("3d", "diagonal", "edge", carrier, comp, chips, lam_vs,
                   P=P, arm_chips=others, **anchor)
    raise NonRealizableShapeError("unrecognized two-vertex component")


def unbounded_dirs(comp: IntersectionComponent):
    return [pc.direction for pc in comp.pieces if pc.direction is not None and pc.end is None]


def _ray_from(comp, base, d):
    return any(pc.direction == d and pc.start == base and pc.end is None for pc in comp.pieces)


def _collinear_with(piece, d: Direction) -> bool:
    return piece.direction is not None and _det(piece.direction, d) == 0


def _collinear_with_dir(a: Direction, b: Direction) -> bool:
    return _det(a, b) == 0


def _points_on_edge(lam, comp):
    e = lam.edges[0]
    A = lam.vertices[e.a].position
    pts = set()
    for p in comp.support_points():
        s = None
        dx, dy = p[0] - A[0], p[1] - A[1]
        if dx * e.direction[1] == dy * e.direction[0]:
            s = dx / e.direction[0] if e.direction[0] else dy / e.direction[1]
            if 0 <= s <= e.length:
                pts.add(p)
    return pts


def _make_tree_shape(gamma, lam, comp, chips, lam_vs, pa, pb, arms_a, arms_b) -> TangencyRecord:
    """Type (8): quartet tree; store the five lengths in the paper's frame."""
    edge = lam.edges[0]
    # identify v0 (lower) as the vertex whose legs point negatively
    roles = _lam_vertex_roles(lam)
    if roles[edge.a] == "v0":
        p0, p1, arms0, arms1 = pa, pb, arms_a, arms_b
    else:
        p0, p1, arms0, arms1 = pb, pa, arms_b, arms_a
    def arm_len(base, d, end):
        return abs(end[0] - base[0]) + abs(end[1] - base[1])
    arm_map = {}
    for (d, end) in arms0:
        arm_map[d] = arm_len(p0, d, end)
    for (d, end) in arms1:
        arm_map[d] = arm_len(p1, d, end)
    L3 = lam.edges[0].length
    record = _mk("8", "diagonal", "edge", ("edge", edge.direction), comp, chips, lam_vs,
                 v0=p0, v1=p1, arms0=arms0, arms1=arms1)
    record.tree_lengths = (arm_map, L3)
    return record


def _classify_one_vertex(gamma, lam, comp, chips, roles, lam_vs, q, total) -> TangencyRecord:
    vi = lam_vs[0]
    role = roles[vi]
    vpos = lam.vertices[vi].position
    edge_dir = lam.edges[0].direction
    arms = _arm_data(comp, vpos)

    if q >= 1:
        # unbounded overlap along shared Gamma-legs
        if q == 2:
            # (3cb): branch end at this vertex plus a bounded arm to a
            # Gamma-vertex; does not lift
            return _mk("3cb", "diagonal", "edge", ("edge", edge_dir), comp, chips, lam_vs)
        if q == 1 and len(arms) == 1:
            mult_at_v = chips.get(vpos, 0)
            gv = gamma.locate(vpos)
            if gv is None or gv[0] != "vertex":
                raise NonGenericInputError("unbounded overlap not anchored at a Gamma vertex")
            cell = gamma.vertices[gv[1]].dual_cell
            d = arms[0][0]
            if mult_at_v == total == 2:
                orient = _responsible_orientation(lam, vi, sorted(cell))
                return _mk("6a", orient, "vertex", ("vertex", role),
                           comp, chips, lam_vs, gamma_vertex=gv[1], gamma_cell=cell,
                           shared_leg=d, lam_vertex=vi)
            if mult_at_v == total == 4:
                return _mk("6b", _orientation_of_stratum(d), "vertex", ("vertex", role),
                           comp, chips, lam_vs, gamma_vertex=gv[1], gamma_cell=cell,
                           shared_leg=d, lam_vertex=vi)
        raise NonRealizableShapeError("unrecognized unbounded one-vertex component")

    if len(arms) >= 3:
        # tripod at the vertex: type (3f)
        if total != 4 or len(arms) != 3:
            raise NonRealizableShapeError("tripod with wrong multiplicity")
        gv = gamma.locate(vpos)
        if gv is None or gv[0] != "vertex":
            raise StarConstraintError("tripod center must be a Gamma vertex")
        cell = gamma.vertices[gv[1]].dual_cell
        lam_star = [d for (d, _) in lam.vertex_star(vi)]
        if sorted(_gamma_star(gamma, gv[1])) != sorted(lam_star):
            raise StarConstraintError("tripod star of Gamma must equal the Lambda star")
        arm_lengths = {d: abs(e[0] - vpos[0]) + abs(e[1] - vpos[1]) if d[0] == 0 or d[1] == 0
                       else abs(e[0] - vpos[0]) for (d, e) in arms}
        rec = _mk("3f", "n/a", "vertex", ("vertex", role), comp, chips, lam_vs,
                  center=vpos, arms=arms, gamma_vertex=gv[1], gamma_cell=cell, lam_vertex=vi)
        rec.star_lengths = arm_lengths
        return rec

    if not comp.is_straight_segment():
        raise NonRealizableShapeError("bent one-vertex component is not realizable")
    A, B = comp.endpoints_of_segment()
    far = B if A == vpos else A
    seg_dir = _seg_direction(vpos, far)
    on_edge = _collinear_with_dir(seg_dir, edge_dir) and _stratum_of_points_is_edge(lam, vpos, far)
    cv, cf = chips.get(vpos, 0), chips.get(far, 0)
    anchors = _segment_anchors(gamma, vpos, far)
    if sorted((cv, cf)) == [1, 1]:
        if on_edge:
            return _mk("3ac", "diagonal", "edge", ("edge", edge_dir), comp, chips, lam_vs,
                       lam_vertex=vi, **anchors)
        return _mk("3a", _orientation_of_stratum(seg_dir), "leg", ("leg", seg_dir),
                   comp, chips, lam_vs, lam_vertex=vi, **anchors)
    if sorted((cv, cf)) == [1, 3]:
        code = "3bb1" if on_edge else "3bb"
        return _mk(code, "diagonal" if on_edge else _orientation_of_stratum(seg_dir),
                   "edge" if on_edge else "leg",
                   ("edge", edge_dir) if on_edge else ("leg", seg_dir),
                   comp, chips, lam_vs, lam_vertex=vi)
    raise NonRealizableShapeError("one-vertex segment with unrecognized chips")


def _seg_direction(a: Point, b: Point) -> Direction:
    from .curves import primitive
    return primitive((b[0] - a[0], b[1] - a[1]))


def _stratum_of_points_is_edge(lam, a, b) -> bool:
    mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    w = lam.locate(mid)
    return w is not None and w[0] == "edge"


def _classify_cross_extended(gamma, lam, comp, chips, roles, lam_vs) -> TangencyRecord:
    total = sum(chips.values())
    vpos = lam.vertices[0].position
    q = len(unbounded_dirs(comp))
    if lam_vs:
        arms = _arm_data(comp, vpos)
        if q == 2 and total == 2 and chips.get(vpos, 0) == 2:
            gv = gamma.locate(vpos)
            cell = gamma.vertices[gv[1]].dual_cell if gv and gv[0] == "vertex" else None
            return _mk("6a'", "n/a", "cross-vertex", ("vertex", "v"), comp, chips, lam_vs,
                       gamma_vertex=gv[1], gamma_cell=cell, shared_legs=unbounded_dirs(comp))
        if q == 1 and total == 4 and chips.get(vpos, 0) == 4:
            gv = gamma.locate(vpos)
            cell = gamma.vertices[gv[1]].dual_cell if gv and gv[0] == "vertex" else None
            return _mk("6b'", "n/a", "cross-vertex", ("vertex", "v"), comp, chips, lam_vs,
                       gamma_vertex=gv[1], gamma_cell=cell, shared_leg=unbounded_dirs(comp)[0])
        if q == 0 and comp.is_straight_segment():
            A, B = comp.endpoints_of_segment()
            far = B if A == vpos else A
            d = _seg_direction(vpos, far)
            if sorted(chips.values()) == [1, 1]:
                return _mk("3a'", _orientation_of_stratum(d), "leg", ("leg", d),
                           comp, chips, lam_vs, **_segment_anchors(gamma, vpos, far))
            raise NonRealizableShapeError("type (3bb')-like component is not realizable")
        raise NonRealizableShapeError("type (3e')-like component is not realizable")
    # no vertex: bounded segment on one leg
    if q == 0 and comp.is_straight_segment() and sorted(chips.values()) == [1, 1]:
        A, B = comp.endpoints_of_segment()
        d = _stratum_of_lambda(lam, A)[1]
        return _mk("3c'", _orientation_of_stratum(d), "leg", ("leg", d),
                   comp, chips, lam_vs, **_segment_anchors(gamma, A, B))
    raise NonRealizableShapeError("unrecognized 4-valent component")


# ---------------------------------------------------------------------------
# tritangency predicate and full analysis
# ---------------------------------------------------------------------------


def is_tritangent(gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve) -> bool:
    comps = set_intersection(gamma, lam)
    div = stable_intersection(gamma, lam)
    try:
        chips = component_chips(comps, div)
    except Exception:
        return False
    totals = sorted(sum(c.values()) for c in chips if c)
    return totals in ([2, 2, 2], [2, 4], [6])


def analyze(gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve) -> List[TangencyRecord]:
    """Classify every component of a tritangent configuration."""
    comps = set_intersection(gamma, lam)
    div = stable_intersection(gamma, lam)
    chips = component_chips(comps, div)
    records = []
    for comp, ch in zip(comps, chips):
        if not ch:
            continue
        records.append(classify_component(gamma, lam, comp, ch))
    return records


# ---------------------------------------------------------------------------
# tangency point placement (chip-firing within components)
# ---------------------------------------------------------------------------


def locate_tangency_points(sk: Skeleton, lam: PlanarTropicalCurve,
                           record: TangencyRecord) -> TangencyRecord:
    """Fill the multiplicity-2 tangency points, oracle-certified."""
    chips = record.chips
    total = record.total()
    pts = sorted(chips)

    if record.code in ("1", "2a", "2a'", "4a", "4a'", "5a", "6a", "6a'"):
        record.tangency_points = [pts[0]]
        return record
    if record.code in ("2b", "4b", "5b", "6b", "4b'", "6b'"):
        record.tangency_points = [pts[0], pts[0]]
        return record
    if record.code == "7":
        v0, v1 = record.gamma_anchor["v0"], record.gamma_anchor["v1"]
        mid = ((v0[0] + v1[0]) / 2, (v0[1] + v1[1]) / 2)
        record.tangency_points = [v0, mid, v1]
        return record
    if record.code == "3h":
        two = [p for p, c in chips.items() if c == 2]
        record.tangency_points = sorted(two)
        return record
    if record.code in ("3a", "3c", "3c'", "3a'", "3ac", "3aa", "3cc"):
        a, b = pts
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        record.tangency_points = [mid]
        _certify(sk, record, [mid])
        return record
    if record.code in ("3bb", "3bb1", "3bb2"):
        three = [p for p, c in chips.items() if c == 3][0]
        one = [p for p, c in chips.items() if c == 1][0]
        mid = ((three[0] + one[0]) / 2, (three[1] + one[1]) / 2)
        record.tangency_points = [three, mid]
        _certify(sk, record, [three, mid])
        return record
    if record.code == "3ab":
        # does not lift; tangencies at the doubled points after pairing odd chips
        odd = [p for p, c in chips.items() if c % 2 == 1]
        out = [p for p, c in chips.items() if c >= 2]
        if len(odd) == 2:
            mid = ((odd[0][0] + odd[1][0]) / 2, (odd[0][1] + odd[1][1]) / 2)
            out.append(mid)
        record.tangency_points = sorted(out)
        return record
    if record.code == "3d":
        P = record.gamma_anchor["P"]
        a, b = record.gamma_anchor["arm_chips"]
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        record.tangency_points = [mid, P]
        _certify(sk, record, [mid, P])
        return record
    if record.code == "3f":
        return _locate_tripod(sk, record)
    if record.code == "8":
        return _locate_tree_shape(sk, record)
    raise ValueError(f"no placement rule for type {record.code}")


def _certify(sk: Skeleton, record: TangencyRecord, points: Sequence[Point]):
    """Check 2*(points) ~ component chips on the skeleton."""
    D = GraphDivisor(sk.graph)
    ok_locate = True
    try:
        for p, m in record.chips.items():
            D.add(sk.location_of_planar(p), m)
        T = GraphDivisor(sk.graph)
        for p in points:
            T.add(sk.location_of_planar(p), 2)
    except ValueError:
        return  # points off the skeleton (should not happen for tangencies)
    eq, _ = linearly_equivalent(sk.graph, D, T, want_witness=False)
    if not eq:
        raise GammaNonGenericError(
            f"tangency placement for type {record.code} fails the equivalence oracle")


def _tree_mid(a: Point, center: Point, b: Point):
    """Midpoint of the path a -> center -> b in a star, as a planar point."""
    da = abs(a[0] - center[0]) + abs(a[1] - center[1])
    db = abs(b[0] - center[0]) + abs(b[1] - center[1])
    tot = da + db
    half = tot / 2
    if half <= da:
        # on the a-arm at distance half from a
        t = (da - half) / da if da else F0
        return (center[0] + (a[0] - center[0]) * t, center[1] + (a[1] - center[1]) * t)
    t = (half - da) / db
    return (center[0] + (b[0] - center[0]) * t, center[1] + (b[1] - center[1]) * t)


def _locate_tripod(sk: Skeleton, record: TangencyRecord) -> TangencyRecord:
    center = record.gamma_anchor["center"]
    arms = record.gamma_anchor["arms"]   # [(direction, endpoint)]
    lengths = []
    for (d, end) in arms:
        lengths.append((abs(end[0] - center[0]) + abs(end[1] - center[1])
                        if d[0] == 0 or d[1] == 0 else abs(end[0] - center[0]), d, end))
    lengths.sort()
    if lengths[0][0] == lengths[1][0]:
        raise GammaNonGenericError("tripod arm lengths tie at the minimum")
    lmin, dmin, emin = lengths[0]
    others = lengths[1:]
    candidates = []
    # residual rule: shortest-arm chip reaches the center first
    res = []
    for (l, d, e) in others:
        s = (l - lmin) / 2
        res.append((center[0] + d[0] * s, center[1] + d[1] * s))
    candidates.append(res)
    # matchings of the four unit chips
    ends = {d: e for (l, d, e) in lengths}
    (l1, d1, e1), (l2, d2, e2), (l3, d3, e3) = lengths
    for (x, y), (z, w) in (((center, e1), (e2, e3)),
                           ((center, e2), (e1, e3)),
                           ((center, e3), (e1, e2))):
        m1 = _tree_mid(x, center, y)
        m2 = _tree_mid(z, center, w)
        candidates.append([m1, m2])
    good = []
    for cand in candidates:
        if any(not record.component.contains_point(p) for p in cand):
            continue
        try:
            _certify(sk, record, cand)
            if sorted(cand) not in [sorted(g) for g in good]:
                good.append(cand)
        except GammaNonGenericError:
            continue
    if len(good) != 1:
        raise GammaNonGenericError(
            f"tripod placement not unique ({len(good)} candidates pass the oracle)")
    placed = good[0]
    # the shortest arm must carry no tangency point
    for p in placed:
        t = (p[0] - center[0], p[1] - center[1])
        if t != (F0, F0) and _same_ray(t, dmin):
            raise GammaNonGenericError("oracle placed a tangency on the shortest tripod arm")
    record.tangency_points = sorted(placed)
    return record


def _mid_toward(center: Point, e: Point):
    return ((center[0] + e[0]) / 2, (center[1] + e[1]) / 2)


def _same_ray(t, d) -> bool:
    return t[0] * d[1] == t[1] * d[0] and t[0] * d[0] + t[1] * d[1] > 0


def _locate_tree_shape(sk: Skeleton, record: TangencyRecord) -> TangencyRecord:
    """Type (8): residual chip-firing rule, oracle-certified."""
    arm_map, L3 = record.tree_lengths
    v0 = record.gamma_anchor["v0"]
    v1 = record.gamma_anchor["v1"]
    arms0 = {d: e for (d, e) in record.gamma_anchor["arms0"]}
    arms1 = {d: e for (d, e) in record.gamma_anchor["arms1"]}

    def length(base, end):
        return abs(end[0] - base[0]) + abs(end[1] - base[1])

    arm_list = []
    for d, e in arms0.items():
        arm_list.append(("v0", d, length(v0, e)))
    for d, e in arms1.items():
        arm_list.append(("v1", d, length(v1, e)))
    leaf_lengths = sorted(l for (_, _, l) in arm_list)
    if leaf_lengths[0] == leaf_lengths[1]:
        raise GammaNonGenericError("shortest leaf length of the quartet tree ties")

    # normalize: L1 = shortest leaf at vertex w; L2 its sibling; L4, L5 at the other vertex
    side, dmin, L1 = min(arm_list, key=lambda t: t[2])
    near, far = (v0, v1) if side == "v0" else (v1, v0)
    near_arms = arms0 if side == "v0" else arms1
    far_arms = arms1 if side == "v0" else arms0
    L2 = next(length(near, e) for d, e in near_arms.items() if d != dmin)
    fl = [(d, length(far, e)) for d, e in far_arms.items()]
    (d4, L4), (d5, L5) = fl
    # chips fire toward the far vertex: the near pair merges and its partner
    # chips sit at distance (own arm length - L1) on each far arm, plus the
    # central chip at L3; the unique minimum arrives first and the two
    # residuals are halved in place
    dists = {("center",): L3, ("arm", d4): L4 - L1, ("arm", d5): L5 - L1}
    vals = sorted(dists.values())
    if vals[0] == vals[1]:
        raise GammaNonGenericError("min{L3, L4-L1, L5-L1} is not attained once")
    mkey = min(dists, key=lambda k: dists[k])
    mval = dists[mkey]
    # first tangency: path-midpoint of the two near leaves through the near vertex
    P = _tree_mid_quartet(near, near_arms, dmin, L1, L2)
    out = [P]
    ndir = _seg_direction(near, far)
    for key, dval in dists.items():
        if key == mkey:
            continue
        r = (dval - mval) / 2
        if key == ("center",):
            out.append((far[0] - ndir[0] * r, far[1] - ndir[1] * r))
        else:
            d = key[1]
            out.append((far[0] + d[0] * r, far[1] + d[1] * r))
    for p in out:
        if not record.component.contains_point(p):
            raise GammaNonGenericError("tree-shape placement leaves the component")
    _certify(sk, record, out)
    record.tangency_points = sorted(out)
    record.tree_lengths = (L1, L2, L3, L4, L5)
    return record


def _tree_mid_quartet(near, near_arms, dmin, L1, L2):
    dlong = next(d for d in near_arms if d != dmin)
    s = (L2 - L1) / 2
    return (near[0] + dlong[0] * s, near[1] + dlong[1] * s)


def halve_on_components(sk: Skeleton, gamma: PlanarTropicalCurve,
                        lam: PlanarTropicalCurve,
                        records: Sequence[TangencyRecord]) -> GraphDivisor:
    """The doubled divisor 2P + 2P' + 2P'' on the skeleton."""
    D = GraphDivisor(sk.graph)
    for rec in records:
        if rec.tangency_points is None:
            locate_tangency_points(sk, lam, rec)
        for p in rec.tangency_points:
            D.add(sk.location_of_planar(p), 2)
    return D
