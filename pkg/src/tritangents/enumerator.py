"""Enumeration of tritangent (1,1)-curves and the 15 class reports.

Liftable tritangents are rigid: every degree of freedom of the (1,1)-curve
is pinned by a tangency, and each pin is a linear equation in (v0x, v0y, t)
drawn from a finite menu (overlap lines, vertex crossings, vertex-on-feature
incidences).  Candidates are solved from independent pin triples, pruned by
cheap validity windows, then fully verified; completeness is enforced by the
per-class multiplicity sum, which must equal eight.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import (
    CROSS,
    SLOPE_MINUS,
    SLOPE_PLUS,
    PlanarTropicalCurve,
    TritangentParams,
    dual_curve,
    lambda_curve,
)
from .divisors import (
    GraphDivisor,
    Skeleton,
    class_of_divisor,
    skeleton,
    theta_characteristics,
)
from .intersect import component_chips, set_intersection, stable_intersection
from .lifting import LiftReport, analyze_lifting
from .sextic import SexticInput
from .tangency import (
    GammaNonGenericError,
    NonGenericInputError,
    NonRealizableShapeError,
    StarConstraintError,
    analyze,
    halve_on_components,
    is_tritangent,
    locate_tangency_points,
)

F0 = Fraction(0)
F1 = Fraction(1)


class EnumerationError(RuntimeError):
    pass


class ClassSumError(RuntimeError):
    """A tritangent class failed the sum-to-eight contract."""


@dataclass
class Member:
    params: TritangentParams
    records: list
    report: LiftReport
    theta_class: Optional[Tuple[int, ...]] = None
    tangency_divisor: Optional[GraphDivisor] = None


@dataclass
class ClassReport:
    theta_class: Tuple[int, ...]
    theta: GraphDivisor
    members: List[Member] = field(default_factory=list)

    def total_multiplicity(self) -> int:
        return sum(m.report.multiplicity for m in self.members)


# ---------------------------------------------------------------------------
# pin menu
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pin:
    vec: Tuple[int, int, int]     # coefficients of (v0x, v0y, t)
    rhs: Fraction
    window: Tuple                  # validity data, see _pin_valid


def _edge_windows(gamma: PlanarTropicalCurve):
    horiz, vert, diag, anti = [], [], [], []
    lines = []
    for e in gamma.edges:
        A = gamma.vertices[e.a].position
        B = gamma.vertices[e.b].position
        d = e.direction
        lo = (min(A[0], B[0]), min(A[1], B[1]))
        hi = (max(A[0], B[0]), max(A[1], B[1]))
        if d[1] == 0:
            horiz.append((A[1], lo[0], hi[0]))
        elif d[0] == 0:
            vert.append((A[0], lo[1], hi[1]))
        elif d in ((1, 1), (-1, -1)):
            diag.append((A[0] - A[1], lo[0], hi[0]))
        elif d in ((1, -1), (-1, 1)):
            anti.append((A[0] + A[1], lo[0], hi[0]))
        lines.append((d, A, lo, hi))
    return horiz, vert, diag, anti, lines


def _pins_for_kind(gamma: PlanarTropicalCurve, kind: str) -> List[Pin]:
    horiz, vert, diag, anti, lines = _edge_windows(gamma)
    verts = [v.position for v in gamma.vertices]
    pins: List[Pin] = []

    def add(vec, rhs, window):
        pins.append(Pin(vec, rhs, window))

    if kind in (SLOPE_PLUS, SLOPE_MINUS, CROSS):
        # negative horizontal leg at v0 (all kinds): v0y = c, reach leftwards
        for (c, x1, x2) in horiz:
            add((0, 1, 0), c, ("xmin0", x1))
        for w in verts:
            add((0, 1, 0), w[1], ("xmin0", w[0]))
    if kind == SLOPE_PLUS or kind == CROSS:
        # negative vertical leg at v0: v0x = c
        for (c, y1, y2) in vert:
            add((1, 0, 0), c, ("ymin0", y1))
        for w in verts:
            add((1, 0, 0), w[0], ("ymin0", w[1]))
    if kind == SLOPE_MINUS or kind == CROSS:
        # positive vertical leg at v0: v0x = c, reach upwards
        for (c, y1, y2) in vert:
            add((1, 0, 0), c, ("ymax0", y2))
        for w in verts:
            add((1, 0, 0), w[0], ("ymax0", w[1]))
    if kind == SLOPE_PLUS:
        for (dd, x1, x2) in diag:
            add((1, -1, 0), dd, ("edgewin", x1, x2))
        for w in verts:
            add((1, -1, 0), w[0] - w[1], ("edgevert", w[0]))
        # positive legs at v1 = v0 + t(1,1)
        for (c, x1, x2) in horiz:
            add((0, 1, 1), c, ("xmax1", x2))
        for w in verts:
            add((0, 1, 1), w[1], ("xmax1", w[0]))
        for (c, y1, y2) in vert:
            add((1, 0, 1), c, ("ymax1", y2))
        for w in verts:
            add((1, 0, 1), w[0], ("ymax1", w[1]))
    if kind == SLOPE_MINUS:
        for (dd, x1, x2) in anti:
            add((1, 1, 0), dd, ("edgewin", x1, x2))
        for w in verts:
            add((1, 1, 0), w[0] + w[1], ("edgevert", w[0]))
        # v1 = v0 + t(1, -1): legs (1,0) and (0,-1)
        for (c, x1, x2) in horiz:
            add((0, 1, -1), c, ("xmax1", x2))
        for w in verts:
            add((0, 1, -1), w[1], ("xmax1", w[0]))
        for (c, y1, y2) in vert:
            add((1, 0, 1), c, ("ymin1", y1))
        for w in verts:
            add((1, 0, 1), w[0], ("ymin1", w[1]))
    if kind == CROSS:
        for (c, x1, x2) in horiz:
            add((0, 1, 0), c, ("xmax0", x2))
        for w in verts:
            add((0, 1, 0), w[1], ("xmax0", w[0]))
        for (c, y1, y2) in vert:
            add((1, 0, 0), c, ("ymax0", y2))
        for w in verts:
            add((1, 0, 0), w[0], ("ymax0", w[1]))
    # vertex-on-edge-line pins for both vertices
    shifts = {SLOPE_PLUS: (1, 1), SLOPE_MINUS: (1, -1), CROSS: (0, 0)}[kind]
    for (d, A, lo, hi) in lines:
        a, b = d[1], -d[0]
        c = a * A[0] + b * A[1]
        add((a, b, 0), c, ("online", lo, hi, (0, 0)))
        if kind != CROSS:
            add((a, b, a * shifts[0] + b * shifts[1]), c, ("online", lo, hi, shifts))
    return pins


def _pin_valid(pin: Pin, v0, t, kind) -> bool:
    w = pin.window
    s = {SLOPE_PLUS: (1, 1), SLOPE_MINUS: (1, -1), CROSS: (0, 0)}[kind]
    v1 = (v0[0] + t * s[0], v0[1] + t * s[1])
    tag = w[0]
    if tag == "xmin0":
        return v0[0] > w[1]
    if tag == "ymin0":
        return v0[1] > w[1]
    if tag == "ymax0":
        return v0[1] < w[1]
    if tag == "xmax0":
        return v0[0] < w[1]
    if tag == "xmax1":
        return v1[0] < w[1]
    if tag == "ymax1":
        return v1[1] < w[1]
    if tag == "ymin1":
        return v1[1] > w[1]
    if tag == "edgewin":
        return v0[0] <= w[2] and v1[0] >= w[1]
    if tag == "edgevert":
        return v0[0] <= w[1] <= v1[0]
    if tag == "online":
        lo, hi, shift = w[1], w[2], w[3]
        p = (v0[0] + t * shift[0], v0[1] + t * shift[1])
        return lo[0] <= p[0] <= hi[0] and lo[1] <= p[1] <= hi[1]
    return True


def _solve3(p1: Pin, p2: Pin, p3: Pin):
    M = [list(p1.vec), list(p2.vec), list(p3.vec)]
    b = [p1.rhs, p2.rhs, p3.rhs]
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
           - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    if det == 0:
        return None
    xs = []
    for col in range(3):
        N = [row[:] for row in M]
        for r in range(3):
            N[r][col] = b[r]
        dd = (N[0][0] * (N[1][1] * N[2][2] - N[1][2] * N[2][1])
              - N[0][1] * (N[1][0] * N[2][2] - N[1][2] * N[2][0])
              + N[0][2] * (N[1][0] * N[2][1] - N[1][1] * N[2][0]))
        xs.append(Fraction(dd, det))
    return tuple(xs)


def candidate_parameters(gamma: PlanarTropicalCurve, kind: str):
    """Deduplicated rigid candidates (v0, t) from valid pin triples."""
    pins = _pins_for_kind(gamma, kind)
    seen: Dict[Tuple, List[Pin]] = {}
    for p in pins:
        seen.setdefault((p.vec, p.rhs), []).append(p)
    groups = list(seen.values())
    eqs = [g[0] for g in groups]
    n = len(eqs)
    out = set()

    def accept(sol, chosen):
        v0 = (sol[0], sol[1])
        t = sol[2]
        if kind == CROSS:
            if t != 0:
                return
        elif t <= 0:
            return
        for gidx in chosen:
            if not any(_pin_valid(p, v0, t, kind) for p in groups[gidx]):
                return
        out.add((v0, t))

    if kind == CROSS:
        tpin = Pin((0, 0, 1), F0, ("always",))
        for i in range(n):
            for j in range(i + 1, n):
                sol = _solve3(eqs[i], eqs[j], tpin)
                if sol is not None:
                    accept(sol, (i, j))
    else:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    sol = _solve3(eqs[i], eqs[j], eqs[k])
                    if sol is not None:
                        accept(sol, (i, j, k))
    return sorted(out)


def _pin_always(pin, v0, t, kind):
    return True


# ---------------------------------------------------------------------------
# verification and reports
# ---------------------------------------------------------------------------


def _candidate_params(gamma) -> List[TritangentParams]:
    out = []
    seen = set()
    for kind in (SLOPE_PLUS, SLOPE_MINUS, CROSS):
        for (v0, t) in candidate_parameters(gamma, kind):
            key = (kind, v0, t)
            if key in seen:
                continue
            seen.add(key)
            try:
                out.append(TritangentParams(kind, v0, t))
            except ValueError:
                continue
    return out


def _verify_chunk(payload):
    f, chunk = payload
    gamma = dual_curve(f)
    out = []
    for params in chunk:
        m = verify_candidate(f, gamma, params)
        if m is not None:
            out.append(m)
    return out


def enumerate_tritangents(f: SexticInput, gamma: Optional[PlanarTropicalCurve] = None,
                          verbose: bool = False) -> List[Member]:
    """All liftable tritangent (1,1)-curves to Gamma (positive multiplicity).

    Set TRITANGENT_THREADS > 1 to verify candidates in a process pool;
    results are merged deterministically by parameter order.
    """
    if gamma is None:
        gamma = dual_curve(f)
    candidates = _candidate_params(gamma)
    workers = int(os.environ.get("TRITANGENT_THREADS", "1") or "1")
    members: List[Member] = []
    if workers > 1 and len(candidates) > 4 * workers:
        from concurrent.futures import ProcessPoolExecutor
        size = (len(candidates) + workers - 1) // workers
        chunks = [candidates[i:i + size] for i in range(0, len(candidates), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_verify_chunk, [(f, ch) for ch in chunks]):
                members.extend(part)
    else:
        for params in candidates:
            m = verify_candidate(f, gamma, params)
            if m is not None:
                members.append(m)
    members.sort(key=lambda m: (m.params.kind, m.params.v0, m.params.t))
    return members


def verify_candidate(f: SexticInput, gamma: PlanarTropicalCurve,
                     params: TritangentParams) -> Optional[Member]:
    lam = lambda_curve(params)
    try:
        comps = set_intersection(gamma, lam)
        div = stable_intersection(gamma, lam)
        chips = component_chips(comps, div)
    except Exception:
        return None
    totals = sorted(sum(c.values()) for c in chips if c)
    if totals not in ([2, 2, 2], [2, 4], [6]):
        return None
    try:
        records = analyze(gamma, lam)
        report = analyze_lifting(f, gamma, lam, records, params)
    except (NonRealizableShapeError, StarConstraintError, NonGenericInputError):
        return None
    except GammaNonGenericError:
        raise
    if report.multiplicity == 0:
        return None
    return Member(params, records, report)


def class_of(f: SexticInput, gamma: PlanarTropicalCurve, sk: Skeleton,
             thetas, member: Member) -> Tuple[int, ...]:
    """Theta class of a tritangent via the halved stable divisor."""
    lam = lambda_curve(member.params)
    for rec in member.records:
        if rec.tangency_points is None:
            locate_tangency_points(sk, lam, rec)
    doubled = halve_on_components(sk, gamma, lam, member.records)
    half = GraphDivisor(sk.graph)
    for key, m in doubled.chips.items():
        assert m % 2 == 0
        loc = sk.graph.vertex_location(key[1]) if key[0] == "vertex" else (key[1], key[2])
        half.add(loc, m // 2)
    member.tangency_divisor = half
    cls = class_of_divisor(sk.graph, thetas, half)
    member.theta_class = cls
    return cls


def classes_report(f: SexticInput, gamma: Optional[PlanarTropicalCurve] = None,
                   strict: bool = True) -> List[ClassReport]:
    """The 15 class reports; raises ClassSumError when a class total is not 8."""
    if gamma is None:
        gamma = dual_curve(f)
    sk = skeleton(gamma)
    thetas = theta_characteristics(sk.graph)
    reports = {cls: ClassReport(cls, thetas[cls]) for cls in thetas}
    for member in enumerate_tritangents(f, gamma):
        cls = class_of(f, gamma, sk, thetas, member)
        reports[cls].members.append(member)
    out = sorted(reports.values(), key=lambda r: r.theta_class)
    if strict:
        bad = {r.theta_class: r.total_multiplicity()
               for r in out if r.total_multiplicity() != 8}
        if bad:
            raise ClassSumError(
                f"class multiplicity sums differ from 8: {bad}")
    return out
