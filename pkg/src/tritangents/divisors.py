"""Divisor theory on metric graphs: skeletons, chip-firing, theta characteristics.

Linear equivalence is decided exactly through the tropical Abel-Jacobi map
(deg-0 divisor maps to the period lattice iff principal); the witness
piecewise-linear function is assembled from an integer flow.  A metric Dhar
reduction provides q-reduced divisors for effective inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import PlanarTropicalCurve

F0 = Fraction(0)

Location = Tuple[int, Fraction]   # (edge id, offset from edge start in [0, length])


class DegreeMismatchError(ValueError):
    pass


class NotEffectiveError(ValueError):
    pass


class ThetaValidationError(RuntimeError):
    """The constructed divisor failed the 2D ~ K contract."""


@dataclass
class MetricGraph:
    """Vertices 0..n-1, edges (u, v, length); optional planar positions."""

    n: int
    edges: List[Tuple[int, int, Fraction]]
    positions: Optional[List[Tuple[Fraction, Fraction]]] = None

    def __post_init__(self):
        if any(l <= 0 for (_, _, l) in self.edges):
            raise ValueError("edge lengths must be positive")
        if not self._connected():
            raise ValueError("metric graph must be connected")

    def _adj(self):
        adj: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(self.n)}
        for idx, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, idx))
            adj[v].append((u, idx))
        return adj

    def _connected(self) -> bool:
        if self.n == 0:
            return False
        adj = self._adj()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for (v, _) in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def genus(self) -> int:
        return len(self.edges) - self.n + 1

    def valence(self, v: int) -> int:
        c = 0
        for (u, w, _) in self.edges:
            c += (u == v) + (w == v)
        return c

    def vertex_location(self, v: int) -> Location:
        for idx, (u, w, l) in enumerate(self.edges):
            if u == v:
                return (idx, F0)
            if w == v:
                return (idx, l)
        raise ValueError(f"isolated vertex {v}")

    def canonical_loc(self, loc: Location):
        """('vertex', v) or ('interior', edge, offset)."""
        e, s = loc
        u, v, l = self.edges[e]
        if s == 0:
            return ("vertex", u)
        if s == l:
            return ("vertex", v)
        if not (0 < s < l):
            raise ValueError(f"offset {s} outside edge of length {l}")
        return ("interior", e, s)


class GraphDivisor:
    """Finite formal sum of points with integer multiplicities."""

    def __init__(self, graph: MetricGraph, entries: Sequence[Tuple[Location, int]] = ()):
        self.graph = graph
        self.chips: Dict[Tuple, int] = {}
        for loc, m in entries:
            self.add(loc, m)

    def add(self, loc: Location, m: int):
        if m == 0:
            return
        key = self.graph.canonical_loc(loc)
        self.chips[key] = self.chips.get(key, 0) + m
        if self.chips[key] == 0:
            del self.chips[key]

    def degree(self) -> int:
        return sum(self.chips.values())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.chips.values())

    def items(self):
        return sorted(self.chips.items(), key=repr)

    def minus(self, other: "GraphDivisor") -> "GraphDivisor":
        out = GraphDivisor(self.graph)
        out.chips = dict(self.chips)
        for key, m in other.chips.items():
            out.chips[key] = out.chips.get(key, 0) - m
            if out.chips[key] == 0:
                del out.chips[key]
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphDivisor) and self.chips == other.chips

    def __repr__(self) -> str:
        return f"GraphDivisor({self.chips})"


@dataclass
class PLFunction:
    """PL function on a refinement: values at model vertices, integer slopes."""

    model: "RefinedModel"
    values: List[Fraction]
    slopes: List[int]   # along each model edge, from its start vertex

    def divisor(self) -> GraphDivisor:
        div = GraphDivisor(self.model.base)
        out: Dict[int, int] = {}
        for idx, (u, v, _) in enumerate(self.model.edges):
            out[u] = out.get(u, 0) + self.slopes[idx]
            out[v] = out.get(v, 0) - self.slopes[idx]
        for mv, m in out.items():
            if m != 0:
                div.add(self.model.to_base_location(mv), m)
        return div


class RefinedModel:
    """A metric graph refined so a given point set consists of vertices."""

    def __init__(self, base: MetricGraph, points: Sequence[Tuple] = ()):
        self.base = base
        # model vertices: base vertices first, then interior points
        self.coords: List[Tuple] = [("vertex", v) for v in range(base.n)]
        interior = sorted(
            {p for p in points if p[0] == "interior"},
            key=lambda p: (p[1], p[2]),
        )
        self.coords.extend(interior)
        self.index = {c: i for i, c in enumerate(self.coords)}
        # split base edges at interior points
        self.edges: List[Tuple[int, int, Fraction]] = []
        self.base_edge_of: List[int] = []
        by_edge: Dict[int, List[Tuple[Fraction, int]]] = {}
        for c in interior:
            by_edge.setdefault(c[1], []).append((c[2], self.index[c]))
        for eidx, (u, v, l) in enumerate(base.edges):
            cuts = sorted(by_edge.get(eidx, []))
            prev_vertex, prev_off = self.index[("vertex", u)], F0
            for off, mv in cuts:
                self.edges.append((prev_vertex, mv, off - prev_off))
                self.base_edge_of.append(eidx)
                prev_vertex, prev_off = mv, off
            self.edges.append((prev_vertex, self.index[("vertex", v)], l - prev_off))
            self.base_edge_of.append(eidx)
        if any(l <= 0 for (_, _, l) in self.edges):
            raise ValueError("refinement produced a zero-length edge")
        self.offsets: Dict[int, Fraction] = {}
        for mv, c in enumerate(self.coords):
            if c[0] == "interior":
                self.offsets[mv] = c[2]

    def locate(self, key: Tuple) -> int:
        return self.index[key]

    def to_base_location(self, mv: int) -> Location:
        c = self.coords[mv]
        if c[0] == "vertex":
            return self.base.vertex_location(c[1])
        return (c[1], c[2])

    def adj(self):
        adj: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(len(self.coords))}
        for idx, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, idx))
            adj[v].append((u, idx))
        return adj

    def divisor_vector(self, D: GraphDivisor) -> List[int]:
        vec = [0] * len(self.coords)
        for key, m in D.chips.items():
            vec[self.index[key]] += m
        return vec


def _model_for(graph: MetricGraph, divisors: Sequence[GraphDivisor], extra=()) -> RefinedModel:
    pts = set(extra)
    for D in divisors:
        pts.update(D.chips.keys())
    return RefinedModel(graph, sorted(pts, key=repr))


# ---------------------------------------------------------------------------
# Abel-Jacobi equivalence and witnesses
# ---------------------------------------------------------------------------


def _spanning_tree(model: RefinedModel):
    n = len(model.coords)
    adj = model.adj()
    parent_edge = [-1] * n
    parent = [-1] * n
    order = [0]
    seen = {0}
    queue = [0]
    while queue:
        u = queue.pop(0)
        for (v, eidx) in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                parent_edge[v] = eidx
                order.append(v)
                queue.append(v)
    tree_edges = {parent_edge[v] for v in range(n) if parent_edge[v] >= 0}
    nontree = [e for e in range(len(model.edges)) if e not in tree_edges]
    return parent, parent_edge, order, tree_edges, nontree


def _tree_path_coeffs(model, parent, parent_edge, src: int, dst: int) -> Dict[int, int]:
    """Edge coefficients (+1 along edge orientation) of the tree path src->dst."""
    def to_root(v):
        path = []
        while parent[v] != -1:
            path.append(v)
            v = parent[v]
        return path, v

    pa, _ = to_root(src)
    pb, _ = to_root(dst)
    sa, sb = set(pa), set(pb)
    coeffs: Dict[int, int] = {}
    v = src
    while parent[v] != -1 and v not in sb:
        e = parent_edge[v]
        u, w, _ = model.edges[e]
        coeffs[e] = coeffs.get(e, 0) + (1 if u == v else -1)  # from v up to parent
        v = parent[v]
    meet = v
    rev = []
    v = dst
    while parent[v] != -1 and v != meet:
        rev.append(v)
        v = parent[v]
    if v != meet:
        # meet is an ancestor chain issue; recompute naively
        rev = []
        v = dst
        anc = set()
        x = src
        while True:
            anc.add(x)
            if parent[x] == -1:
                break
            x = parent[x]
        while v not in anc:
            rev.append(v)
            v = parent[v]
        meet = v
        coeffs = {}
        x = src
        while x != meet:
            e = parent_edge[x]
            u, w, _ = model.edges[e]
            coeffs[e] = coeffs.get(e, 0) + (1 if u == x else -1)
            x = parent[x]
    for v2 in reversed(rev):
        e = parent_edge[v2]
        u, w, _ = model.edges[e]
        coeffs[e] = coeffs.get(e, 0) + (1 if w == v2 else -1)  # parent down to v2
    return coeffs


def _cycle_basis(model, parent, parent_edge, nontree):
    cycles = []
    for e in nontree:
        u, v, _ = model.edges[e]
        coeffs = _tree_path_coeffs(model, parent, parent_edge, v, u)
        coeffs[e] = coeffs.get(e, 0) + 1  # close up along e from u to v
        cycles.append(coeffs)
    return cycles


def _solve_rational(M: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(M)
    A = [row[:] + [b[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def linearly_equivalent(
    graph: MetricGraph, D1: GraphDivisor, D2: GraphDivisor, want_witness: bool = True
):
    """(equivalent?, witness PL function or None).

    Uses the Abel-Jacobi criterion: D1 - D2 is principal iff its image lies in
    the period lattice of the graph.
    """
    if D1.degree() != D2.degree():
        raise DegreeMismatchError(f"deg {D1.degree()} != {D2.degree()}")
    model = _model_for(graph, [D1, D2])
    parent, parent_edge, order, tree_edges, nontree = _spanning_tree(model)
    g = len(nontree)
    diff = D1.minus(D2)
    vec = model.divisor_vector(diff)

    if g == 0:
        eq = True
    else:
        cycles = _cycle_basis(model, parent, parent_edge, nontree)
        lens = [l for (_, _, l) in model.edges]
        M = [[sum(lens[e] * ci.get(e, 0) * cj.get(e, 0) for e in set(ci) | set(cj))
              for cj in cycles] for ci in cycles]
        # AJ image of diff: sum of m * <path(0 -> p), cycle_j>
        aj = [F0] * g
        for mv, m in enumerate(vec):
            if m == 0:
                continue
            path = _tree_path_coeffs(model, parent, parent_edge, 0, mv)
            for j, cyc in enumerate(cycles):
                aj[j] += m * sum(lens[e] * path.get(e, 0) * cyc.get(e, 0) for e in set(path) & set(cyc))
        x = _solve_rational(M, aj)
        if x is None:
            raise RuntimeError("degenerate period matrix")
        eq = all(xi.denominator == 1 for xi in x)
    if not eq or not want_witness:
        return eq, None

    # witness: integer slopes with div = D1 - D2 and zero cycle defects
    slopes = [0] * len(model.edges)
    # subtree sums: process vertices in reverse BFS order
    sub = vec[:]
    for v in reversed(order):
        if parent[v] == -1:
            continue
        e = parent_edge[v]
        u, w, _ = model.edges[e]
        # slope oriented u->w; child v -> parent: chips of subtree(v) flow up
        if u == v:
            slopes[e] += sub[v]
        else:
            slopes[e] -= sub[v]
        sub[parent[v]] += sub[v]
    if g > 0:
        cycles = _cycle_basis(model, parent, parent_edge, nontree)
        lens = [l for (_, _, l) in model.edges]
        defect = [sum(lens[e] * slopes[e] * cyc.get(e, 0) for e in cyc) for cyc in cycles]
        M = [[sum(lens[e] * ci.get(e, 0) * cj.get(e, 0) for e in set(ci) | set(cj))
              for cj in cycles] for ci in cycles]
        x = _solve_rational(M, [-d for d in defect])
        assert x is not None and all(xi.denominator == 1 for xi in x)
        for j, cyc in enumerate(cycles):
            if x[j] == 0:
                continue
            for e, c in cyc.items():
                slopes[e] += int(x[j]) * c
    # integrate along the tree
    values = [None] * len(model.coords)
    values[0] = F0
    for v in order[1:]:
        e = parent_edge[v]
        u, w, l = model.edges[e]
        if w == v:
            values[v] = values[u] + slopes[e] * l
        else:
            values[v] = values[w] - slopes[e] * l
    phi = PLFunction(model, values, slopes)
    return True, phi


# ---------------------------------------------------------------------------
# q-reduced divisors (metric Dhar burning)
# ---------------------------------------------------------------------------


def reduce_divisor(graph: MetricGraph, D: GraphDivisor, q: Location, max_rounds: int = 100000) -> GraphDivisor:
    """The unique q-reduced divisor equivalent to D (D effective away from q)."""
    qkey = graph.canonical_loc(q)
    for key, m in D.chips.items():
        if m < 0 and key != qkey:
            raise NotEffectiveError("reduce_divisor requires divisors effective away from q")

    chips: Dict[Tuple, int] = dict(D.chips)
    for _ in range(max_rounds):
        model = RefinedModel(graph, sorted(set(chips) | {qkey}, key=repr))
        qv = model.locate(qkey)
        vec = [0] * len(model.coords)
        for key, m in chips.items():
            vec[model.locate(key)] += m
        adj = model.adj()
        # Dhar burning from q
        burnt = [False] * len(model.coords)
        burnt[qv] = True
        changed = True
        while changed:
            changed = False
            for v in range(len(model.coords)):
                if burnt[v] or v == qv:
                    continue
                incoming = sum(1 for (u, _) in adj[v] if burnt[u])
                if incoming > vec[v]:
                    burnt[v] = True
                    changed = True
        if all(burnt):
            out = GraphDivisor(graph)
            for mv, m in enumerate(vec):
                if m != 0:
                    out.add(model.to_base_location(mv), m)
            return out
        # fire the unburnt set
        firing_edges = []
        for idx, (u, v, l) in enumerate(model.edges):
            if burnt[u] != burnt[v]:
                firing_edges.append((idx, u if not burnt[u] else v))
        delta = min(model.edges[idx][2] for idx, _ in firing_edges)
        new_chips: Dict[Tuple, int] = {}

        def put(key, m):
            new_chips[key] = new_chips.get(key, 0) + m
            if new_chips[key] == 0:
                del new_chips[key]

        moved_from: Dict[int, int] = {}
        for idx, src in firing_edges:
            moved_from[src] = moved_from.get(src, 0) + 1
        for mv, m in enumerate(vec):
            m2 = m - moved_from.get(mv, 0)
            if m2:
                put(model.coords[mv] if model.coords[mv][0] == "vertex" else model.coords[mv], m2)
        for idx, src in firing_edges:
            u, v, l = model.edges[idx]
            dst_off = delta
            # position measured from src along the model edge
            base_e = model.base_edge_of[idx]
            # offsets of u and v on the base edge
            off_u = _model_vertex_offset(model, u, base_e, graph)
            off_v = _model_vertex_offset(model, v, base_e, graph)
            if off_u is None or off_v is None:
                raise RuntimeError("model vertex not on expected base edge")
            if src == u:
                pos = off_u + (off_v - off_u) / l * delta
            else:
                pos = off_v + (off_u - off_v) / l * delta
            key = graph.canonical_loc((base_e, pos))
            put(key, 1)
        chips = {}
        for key, m in new_chips.items():
            # normalize keys through canonical locations
            if key[0] == "vertex":
                chips[key] = chips.get(key, 0) + m
            else:
                ck = graph.canonical_loc((key[1], key[2]))
                chips[ck] = chips.get(ck, 0) + m
        chips = {k: m for k, m in chips.items() if m != 0}
    raise RuntimeError("metric Dhar reduction did not terminate")


def _model_vertex_offset(model: RefinedModel, mv: int, base_e: int, graph: MetricGraph):
    c = model.coords[mv]
    u, v, l = graph.edges[base_e]
    if c[0] == "interior":
        return c[2] if c[1] == base_e else None
    if c[1] == u:
        return F0
    if c[1] == v:
        return l
    return None


# ---------------------------------------------------------------------------
# canonical divisor, theta characteristics
# ---------------------------------------------------------------------------


def canonical_divisor(graph: MetricGraph) -> GraphDivisor:
    D = GraphDivisor(graph)
    for v in range(graph.n):
        m = graph.valence(v) - 2
        if m != 0:
            D.add(graph.vertex_location(v), m)
    return D


def cycle_space_basis(graph: MetricGraph):
    """Fundamental cycles of a spanning tree, as frozensets of edge ids (Z/2)."""
    model = RefinedModel(graph, [])
    parent, parent_edge, order, tree_edges, nontree = _spanning_tree(model)
    basis = []
    for e in nontree:
        coeffs = _cycle_basis(model, parent, parent_edge, [e])[0]
        basis.append(frozenset(k for k, c in coeffs.items() if c % 2 != 0))
    return basis


def theta_characteristics(graph: MetricGraph) -> Dict[Tuple[int, ...], GraphDivisor]:
    """The 15 effective theta characteristics, keyed by nonzero Z/2 class vector.

    Construction (Zharkov): for the cyclic subgraph K representing the class,
    chips (number of distance-decreasing directions - 1) at local maxima of
    the distance to K, plus (deg_K(v) - 2)/2 at vertices of K.  Every output
    is validated against the contract 2D ~ K_canonical.
    """
    g = graph.genus()
    basis = cycle_space_basis(graph)
    K = canonical_divisor(graph)
    out: Dict[Tuple[int, ...], GraphDivisor] = {}
    for mask in range(1, 2 ** g):
        cls = tuple((mask >> k) & 1 for k in range(g))
        edge_set = frozenset()
        for k in range(g):
            if cls[k]:
                edge_set = edge_set ^ basis[k]
        D = _zharkov_divisor(graph, edge_set)
        doubled = GraphDivisor(graph)
        for key, m in D.chips.items():
            loc = key if key[0] != "vertex" else graph.vertex_location(key[1])
            if key[0] == "vertex":
                doubled.add(graph.vertex_location(key[1]), 2 * m)
            else:
                doubled.add((key[1], key[2]), 2 * m)
        ok, _ = linearly_equivalent(graph, doubled, K, want_witness=False)
        if not ok or not D.is_effective() or D.degree() != g - 1:
            raise ThetaValidationError(f"theta candidate for class {cls} failed 2D ~ K")
        out[cls] = D
    # pairwise inequivalence
    keys = sorted(out)
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            eq, _ = linearly_equivalent(graph, out[keys[i]], out[keys[j]], want_witness=False)
            if eq:
                raise ThetaValidationError(f"classes {keys[i]} and {keys[j]} gave equivalent thetas")
    return out


def _zharkov_divisor(graph: MetricGraph, edge_set: frozenset) -> GraphDivisor:
    D = GraphDivisor(graph)
    kv: Dict[int, int] = {}
    for e in edge_set:
        u, v, _ = graph.edges[e]
        kv[u] = kv.get(u, 0) + 1
        kv[v] = kv.get(v, 0) + 1
    for v, deg in kv.items():
        assert deg % 2 == 0, "class support must have even degrees"
        if deg > 2:
            D.add(graph.vertex_location(v), (deg - 2) // 2)
    # multi-source Dijkstra from K vertices
    INF = None
    dist: List[Optional[Fraction]] = [INF] * graph.n
    heap = []
    for v in kv:
        dist[v] = F0
        heapq.heappush(heap, (F0, v))
    adj: Dict[int, List[Tuple[int, int, Fraction]]] = {i: [] for i in range(graph.n)}
    for idx, (u, v, l) in enumerate(graph.edges):
        adj[u].append((v, idx, l))
        adj[v].append((u, idx, l))
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] != d:
            continue
        for (v, idx, l) in adj[u]:
            if idx in edge_set:
                continue
            nd = d + l
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    if any(d is None for d in dist):
        raise ThetaValidationError("distance to the cyclic subgraph is not finite")
    # vertex maxima off K
    for v in range(graph.n):
        if v in kv:
            continue
        w = 0
        for (u, idx, l) in adj[v]:
            if dist[u] + l == dist[v]:
                w += 1
        if w >= 2:
            D.add(graph.vertex_location(v), w - 1)
    # edge-interior maxima
    for idx, (u, v, l) in enumerate(graph.edges):
        if idx in edge_set:
            continue
        s = (dist[v] - dist[u] + l) / 2
        if 0 < s < l:
            D.add((idx, s), 1)
    return D


def class_of_divisor(graph: MetricGraph, thetas: Dict[Tuple[int, ...], GraphDivisor],
                     candidate: GraphDivisor) -> Tuple[int, ...]:
    if candidate.degree() != graph.genus() - 1:
        raise ValueError("theta candidates must have degree g - 1")
    doubled = GraphDivisor(graph)
    for key, m in candidate.chips.items():
        if key[0] == "vertex":
            doubled.add(graph.vertex_location(key[1]), 2 * m)
        else:
            doubled.add((key[1], key[2]), 2 * m)
    ok, _ = linearly_equivalent(graph, doubled, canonical_divisor(graph), want_witness=False)
    if not ok:
        raise ValueError("not a theta characteristic: 2D is not canonical")
    for cls, theta in thetas.items():
        eq, _ = linearly_equivalent(graph, candidate, theta, want_witness=False)
        if eq:
            return cls
    raise ValueError("no matching theta class (nongeneric input or bug)")


# ---------------------------------------------------------------------------
# skeleton of an embedded curve
# ---------------------------------------------------------------------------


@dataclass
class Skeleton:
    graph: MetricGraph
    curve: PlanarTropicalCurve

    def location_of_planar(self, p) -> Location:
        where = self.curve.locate(p)
        if where is None:
            raise ValueError(f"{p} is not on the curve")
        if where[0] == "vertex":
            return self.graph.vertex_location(where[1])
        if where[0] == "leg":
            raise ValueError(f"{p} lies on a leg, outside the skeleton")
        _, eidx, s = where
        return (eidx, s)

    def planar_of_location(self, loc: Location):
        e, s = loc
        edge = self.curve.edges[e]
        A = self.curve.vertices[edge.a].position
        return (A[0] + s * edge.direction[0], A[1] + s * edge.direction[1])


def skeleton(gamma: PlanarTropicalCurve) -> Skeleton:
    """Genus-4 metric graph: the curve with leg interiors removed."""
    edges = [(e.a, e.b, e.length) for e in gamma.edges]
    positions = [v.position for v in gamma.vertices]
    graph = MetricGraph(len(gamma.vertices), edges, positions)
    return Skeleton(graph, gamma)
