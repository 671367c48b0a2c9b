"""Initial-form catalog: local solutions of the tangency systems per type.

``summarize`` extracts, from a classified tangency record, the data the
lifting module consumes: parameter constraints (monomial exponents on
(m, n, u) plus the leading value as an expression in coefficient initials),
multiplicative sign relations, square-class radicands, local multiplicities
and exceptional square roots.  Everything is frame-free: strata of the
(1,1)-curve map to boundary strands of its Newton square, and the induced
univariate double-root systems are solved in unimodular line coordinates.

Closed-form value entries (``entry_*``) for the local systems back the
residual acceptance tests in exact quadratic-field arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .curves import Direction, PlanarTropicalCurve
from .d4 import D4Element, all_elements, IDENTITY, T0, T1
from .exprs import Expr, square_free
from .tangency import TangencyRecord

F0 = Fraction(0)


class CatalogError(RuntimeError):
    pass


LCOEFF = {
    (0, 0): Expr.param("m"),
    (1, 0): Expr.param("n"),
    (0, 1): Expr.rat(1),
    (1, 1): Expr.param("u"),
}

LEG_STRAND = {
    (-1, 0): ((0, 0), (0, 1)),
    (1, 0): ((1, 0), (1, 1)),
    (0, -1): ((0, 0), (1, 0)),
    (0, 1): ((0, 1), (1, 1)),
}

EDGE_STRAND = {
    "slope_plus": ((1, 0), (0, 1)),
    "slope_minus": ((0, 0), (1, 1)),
}

# exponents on (m, n, u) of the ratio c0/c1 per strand
STRAND_MONOMIAL = {
    ((0, 0), (0, 1)): (1, 0, 0),    # m
    ((1, 0), (1, 1)): (0, 1, -1),   # n/u
    ((0, 0), (1, 0)): (1, -1, 0),   # m/n
    ((0, 1), (1, 1)): (0, 0, -1),   # 1/u
    ((1, 0), (0, 1)): (0, 1, 0),    # n
    ((0, 0), (1, 1)): (1, 0, -1),   # m/u
}


def lam_kind(lam: PlanarTropicalCurve) -> str:
    if len(lam.vertices) == 1:
        return "cross"
    return "slope_plus" if lam.edges[0].direction in ((1, 1), (-1, -1)) else "slope_minus"


def strand_of_carrier(lam, carrier):
    kind, data = carrier
    if kind == "leg":
        return LEG_STRAND[data]
    return EDGE_STRAND[lam_kind(lam)]


@dataclass
class Constraint:
    monomial: Tuple[int, int, int]
    value: Optional[Expr]            # leading value; None when only the direction is known
    radicand: Optional[Expr] = None  # square class of the second-order deviation


@dataclass
class Summary:
    code: str
    local_multiplicity: int
    constraints: List[Constraint] = field(default_factory=list)
    sign_relations: List[Tuple[Tuple[int, int, int], Expr]] = field(default_factory=list)
    generic_constraints: List[Tuple[Tuple[int, int, int], ...]] = field(default_factory=list)
    radicands: List[Expr] = field(default_factory=list)
    numeric_radicands: List[Expr] = field(default_factory=list)
    exceptional: Optional[str] = None
    vertex_role: Optional[str] = None
    orientation: str = "n/a"
    anchors: Dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# frame algebra
# ---------------------------------------------------------------------------


def _complement(delta: Direction) -> Direction:
    x0, x1 = 1, 0
    y0, y1 = 0, 1
    r0, r1 = delta[1], -delta[0]
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 == -1:
        x0, y0 = -x0, -y0
    elif r0 != 1:
        raise CatalogError("strand direction is not primitive")
    return (x0, y0)


def frame(delta: Direction):
    eta = _complement(delta)

    def ab(Q):
        return (Q[0] * delta[1] - Q[1] * delta[0], eta[0] * Q[1] - eta[1] * Q[0])

    return eta, ab


def _rpow(e: Expr, k: int) -> Expr:
    if k == 0:
        return Expr.rat(1)
    return e ** k


def C(ij) -> Expr:
    return Expr.coeff(ij[0], ij[1])


def _param_of_monomial(mono) -> Expr:
    out: Expr = Expr.rat(1)
    for name, k in zip("mnu", mono):
        if k:
            out = out * (Expr.param(name) ** k)
    return out


def _expo_of_lcoeff(Q) -> Tuple[int, int, int]:
    table = {(0, 0): (1, 0, 0), (1, 0): (0, 1, 0), (0, 1): (0, 0, 0), (1, 1): (0, 0, 1)}
    return table[Q]


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

ZERO_TYPES = ("1", "1'", "2b", "4b", "7", "3ab", "3cb", "3bb", "3bb1", "3bb2", "3a'")


def summarize(f, gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve,
              record: TangencyRecord, lam_params=None) -> Summary:
    code = record.code
    if code in ZERO_TYPES:
        return Summary(code, 0)
    if code in ("2a", "2a'"):
        return _sum_vertex_crossing(lam, record)
    if code in ("3c", "3c'", "3a", "3ac", "3cc", "3aa"):
        return _sum_segment(lam, record)
    if code in ("4a", "6a"):
        return _sum_4a6a(lam, record)
    if code == "5a":
        return _sum_5a(lam, record)
    if code in ("5b", "6b"):
        return _sum_5b6b(lam, record)
    if code in ("4b'", "6b'"):
        return _sum_cross_hyperflex(lam, record)
    if code in ("4a'", "6a'"):
        return _sum_4ap6ap(lam, record)
    if code == "3h":
        return _sum_3h(lam, record)
    if code == "3d":
        return _sum_3d(gamma, lam, record)
    if code == "3f":
        return _sum_3f(gamma, lam, record)
    if code == "8":
        return _sum_tree_shape(f, gamma, lam, record, lam_params)
    raise CatalogError(f"no catalog entry for type {code}")


# ----- (2a): transverse crossing at a Gamma vertex -------------------------


def _sum_vertex_crossing(lam, record) -> Summary:
    cell = sorted(record.gamma_anchor["gamma_cell"])
    strand = strand_of_carrier(lam, record.type.carrier)
    L0, L1 = strand
    delta = (L1[0] - L0[0], L1[1] - L0[1])
    eta, ab = frame(delta)
    pts = sorted(cell, key=lambda Q: ab(Q)[0])
    (aA, bA), (aB, bB), (aC, bC) = (ab(Q) for Q in pts)
    if (aB - aA, aC - aB) != (1, 1):
        raise CatalogError("(2a) cell is not width 2 across the stratum line")
    k = 2 * bB - bA - bC
    if k not in (1, -1):
        raise CatalogError("(2a) cell not unimodular in line coordinates")
    A, B, Cc = (C(Q) for Q in pts)
    rho = _rpow(4 * A * Cc / (B * B), k)
    mono = STRAND_MONOMIAL[strand]
    s = Summary(record.code, 1, orientation=record.type.orientation)
    s.constraints.append(Constraint(mono, -rho))
    s.sign_relations.append((mono, square_free(-rho)))
    s.anchors = {"cell": tuple(pts), "k": k, "delta": delta, "eta": eta,
                 "b": (bA, bB, bC)}
    return s


# ----- overlap segments ------------------------------------------------------


def _sum_segment(lam, record) -> Summary:
    strand = strand_of_carrier(lam, record.type.carrier)
    seg = _segment_core(lam, record, strand, record.gamma_anchor)
    mono = STRAND_MONOMIAL[strand]
    s = Summary(record.code, 2, orientation=record.type.orientation)
    s.constraints.append(Constraint(mono, seg["mu"], radicand=seg["radicand"]))
    s.sign_relations.append((mono, square_free(seg["mu"])))
    s.radicands.append(seg["radicand"])
    s.anchors = seg
    return s


def _segment_core(lam, record, strand, anchor, lam_vertices=None) -> Dict:
    """Double-root data of an overlap tangency: eps^2 = 4AC/B^2."""
    L0, L1 = strand
    delta = (L1[0] - L0[0], L1[1] - L0[1])
    eta, ab = frame(delta)
    E0, E1 = anchor["gamma_dual"]
    if (E1[0] - E0[0], E1[1] - E0[1]) != delta:
        E0, E1 = E1, E0
    if (E1[0] - E0[0], E1[1] - E0[1]) != delta:
        raise CatalogError("Gamma strand not parallel to the Lambda strand")
    aE, bE = ab(E0)
    mu = C(E0) / C(E1)
    rho = Expr.rat(-1) * mu
    ends = []
    for name in ("cell_A", "cell_B"):
        if name in anchor:
            cell = anchor[name]
            apex = next(Q for Q in cell if Q not in (E0, E1))
            aP, bP = ab(apex)
            ends.append((aP, C(apex) * _rpow(rho, bP)))
    verts = record.lam_vertices if lam_vertices is None else lam_vertices
    for vi in verts:
        vcell = sorted(lam.vertices[vi].dual_cell)
        extras = [Q for Q in vcell if Q not in (L0, L1)]
        if len(extras) != 1:
            raise CatalogError("4-valent vertex end has two next coefficients")
        L2 = extras[0]
        # on V(l) near the line: x^(L1-L0) = -c0/c1 - (c2/c1) x^(L2-L0)
        a2, b2 = ab((L2[0] - L0[0], L2[1] - L0[1]))
        term = Expr.rat(-1) * C(E1) * (LCOEFF[L2] / LCOEFF[L1]) * _rpow(rho, bE + b2)
        ends.append((aE + a2, term))
    if len(ends) != 2:
        raise CatalogError(f"segment with {len(ends)} recognized ends")
    ends.sort(key=lambda t: t[0])
    (aLo, termA), (aHi, termC) = ends
    if (aLo, aHi) != (aE - 1, aE + 1):
        raise CatalogError("segment end terms not adjacent to the strand")
    Bterm = Expr.rat(-1) * C(E1) * _rpow(rho, bE)
    rad = square_free(termA * termC * Bterm * Bterm)
    return {"mu": mu, "rho": rho, "A": termA, "B": Bterm, "C": termC,
            "radicand": rad, "delta": delta, "eta": eta, "strand": (E0, E1)}


# ----- vertex tangencies (4a), (6a) -----------------------------------------


def _vertex_legs(lam, vi):
    return [l.direction for l in lam.legs if l.vertex == vi]


def _adjacent_span(lam, vi):
    return tuple(STRAND_MONOMIAL[LEG_STRAND[d]] for d in _vertex_legs(lam, vi))


def _edge_monomial(lam):
    return STRAND_MONOMIAL[EDGE_STRAND[lam_kind(lam)]]


def _sum_4a6a(lam, record) -> Summary:
    orient = record.type.orientation
    vi = record.gamma_anchor["lam_vertex"]
    s = Summary(record.code, 1 if orient in ("horizontal", "vertical") else 2,
                orientation=orient, vertex_role=record.type.carrier[1])
    s.generic_constraints.append(_adjacent_span(lam, vi))
    if record.code == "4a":
        E0, E1 = record.gamma_anchor["gamma_dual"]
    else:
        cell = sorted(record.gamma_anchor["gamma_cell"])
        if orient == "diagonal":
            delta = (-1, 1) if lam_kind(lam) == "slope_plus" else (1, 1)
            E0, E1 = _extreme_pair(cell, delta)
        else:
            axis = (1, 0) if orient == "horizontal" else (0, 1)
            E0, E1 = _width2_pair(cell, axis)
    s.anchors = {"strand": (E0, E1)}
    if orient == "diagonal":
        known = _param_of_monomial(_edge_monomial(lam))
        s.radicands.append(square_free(Expr.rat(-1) * C(E0) * C(E1) * known))
    else:
        # sign of the product of the responsible leg's strand coefficients
        legdirs = [d for d in _vertex_legs(lam, vi)
                   if (d[1] == 0) == (orient == "horizontal")]
        if legdirs:
            st = LEG_STRAND[legdirs[0]]
            e0 = _expo_of_lcoeff(st[0])
            e1 = _expo_of_lcoeff(st[1])
            prod = tuple(e0[t] + e1[t] for t in range(3))
            s.sign_relations.append((prod, square_free(Expr.rat(-1) * C(E0) * C(E1))))
    return s


def _extreme_pair(cell, delta):
    """The two cell points extreme in the line coordinates across delta."""
    avals = sorted(cell, key=lambda Q: Q[0] * delta[1] - Q[1] * delta[0])
    return (avals[0], avals[-1])


def _width2_pair(cell, axis):
    delta = (0, 1) if axis == (1, 0) else (1, 0)
    eta, ab = frame(delta)
    pts = sorted(cell, key=lambda Q: ab(Q)[0])
    return (pts[0], pts[2])


# ----- (5a) -------------------------------------------------------------------


def _sum_5a(lam, record) -> Summary:
    cell = sorted(record.gamma_anchor["gamma_cell"])
    vi = record.gamma_anchor["lam_vertex"]
    s = Summary("5a", 2, vertex_role=record.type.carrier[1])
    s.generic_constraints.append(_adjacent_span(lam, vi))
    Q0, Qx, Qy = _corner_split(cell)
    legs = _vertex_legs(lam, vi)
    horiz = [d for d in legs if d[1] == 0][0]
    known = _param_of_monomial(STRAND_MONOMIAL[LEG_STRAND[horiz]])
    s.radicands.append(square_free(C(Qx) * C(Qy) * known))
    s.anchors = {"corner": Q0, "bx": Qx, "cy": Qy}
    return s


def _corner_split(cell):
    for Q0 in cell:
        others = [Q for Q in cell if Q != Q0]
        d1 = (others[0][0] - Q0[0], others[0][1] - Q0[1])
        d2 = (others[1][0] - Q0[0], others[1][1] - Q0[1])
        if d1[0] * d2[0] + d1[1] * d2[1] == 0 and abs(d1[0] * d2[1] - d1[1] * d2[0]) == 1:
            if d1[1] == 0:
                return Q0, others[0], others[1]
            if d2[1] == 0:
                return Q0, others[1], others[0]
    raise CatalogError("(5a) cell is not an axis corner triangle")


# ----- hyperflexes (5b), (6b) -------------------------------------------------


def _match_cell_shape(cell, target, degree=3):
    """D4 element g and base shift with {g(cell)} - base == target."""
    for g in all_elements():
        img = {g.on_exponent(Q, degree) for Q in cell}
        bx = min(q[0] for q in img)
        by = min(q[1] for q in img)
        if {(q[0] - bx, q[1] - by) for q in img} == target:
            return g, (bx, by)
    return None, None


def _pullback_coeff(g, base, Q) -> Expr:
    gi = g.inverse()
    ij = gi.on_exponent((base[0] + Q[0], base[1] + Q[1]), 3)
    return C(ij)


def _sum_5b6b(lam, record) -> Summary:
    code = record.code
    s = Summary(code, 1, vertex_role=record.type.carrier[1])
    s.exceptional = "sqrt3" if code == "6b" else "sqrt2"
    cell = sorted(record.gamma_anchor["gamma_cell"])
    vi = record.gamma_anchor["lam_vertex"]
    target = ({(0, 0), (0, 1), (1, 3)} if code == "6b" else {(0, 0), (1, 2), (1, 3)})
    g, base = _match_cell_shape(cell, target)
    if g is None:
        raise CatalogError(f"({code}) cell does not match the canonical hyperflex shape")
    if code == "6b":
        a = _pullback_coeff(g, base, (0, 0))
        b = _pullback_coeff(g, base, (0, 1))
        c = _pullback_coeff(g, base, (1, 3))
        m_val = Expr.rat(-8) * a / b
        n_val = Expr.rat(-64) * a ** 3 * c / (b ** 4)
    else:
        a = _pullback_coeff(g, base, (0, 0))
        bp = _pullback_coeff(g, base, (1, 2))
        c = _pullback_coeff(g, base, (1, 3))
        m_val = Expr.rat(-1) * bp / c
        n_val = Expr.rat(Fraction(-1, 4)) * bp ** 4 / (a * c ** 3)
    # in the canonical frame the pinned monomials are m and m/n (the two legs
    # of the lower vertex); transport to the actual legs through g
    vals_canonical = {(1, 0, 0): m_val, (0, 1, 0): n_val}
    for d in _vertex_legs(lam, vi):
        mono = STRAND_MONOMIAL[LEG_STRAND[d]]
        val = _value_of_image_monomial(g, mono, m_val, n_val)
        s.constraints.append(Constraint(mono, val))
        sf = square_free(val)
        if sf is not None:
            s.sign_relations.append((mono, sf))
    s.anchors = {"cell": tuple(cell), "g": g, "a": a,
                 "b": b if code == "6b" else bp, "c": c}
    return s


def _value_of_image_monomial(g, mono, m_val, n_val) -> Expr:
    """Value of the pinned leg monomial: its image under g lies in the span
    of the canonical (m', n'), whose values are known."""
    img = _monomial_in_new_params(g, mono)
    a, b, c = img
    if c != 0:
        raise CatalogError("hyperflex leg monomial involves the unpinned parameter")
    out: Expr = Expr.rat(1)
    if a:
        out = out * (m_val ** a)
    if b:
        out = out * (n_val ** b)
    return out


def _monomial_in_new_params(g: D4Element, mono) -> Tuple[int, int, int]:
    """Exponents (a,b,c) with monomial(m,n,u) = m'^a n'^b u'^c for the
    transformed parameters (m', n', u') = g(m, n, u)."""
    M = g.param_matrix()   # e' -> P e' in old params
    # need the inverse: solve P x = mono over the integers (P unimodular)
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
           - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [[M[r][c2] for c2 in range(3) if c2 != j] for r in range(3) if r != i]
            cof = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            adj[j][i] = ((-1) ** (i + j)) * cof
    inv = [[adj[i][j] * det for j in range(3)] for i in range(3)]
    return tuple(sum(inv[r][k] * mono[k] for k in range(3)) for r in range(3))


# ----- cross hyperflexes (4b'), (6b') -----------------------------------------


def _sum_cross_hyperflex(lam, record) -> Summary:
    code = record.code
    s = Summary(code, 1, vertex_role="v")
    s.exceptional = "sqrt3" if code == "4b'" else "Delta"
    cell = sorted(record.gamma_anchor.get("gamma_cell", ())) if code == "6b'" else None
    if code == "4b'":
        E0, E1 = record.gamma_anchor["gamma_dual"]
        ge, base = _match_cell_shape(set((E0, E1)), {(0, 0), (1, 3)})
        if ge is None:
            raise CatalogError("(4b') strand does not match the canonical (1,3) shape")
        a = _pullback_coeff(ge, base, (0, 0))
        c = _pullback_coeff(ge, base, (1, 3))
        lpp = _canonical_lambda2(ge)
        # (m', n', u') = (-8 l'', -64 c l''^4 / a, -64 c l''^3 / a)
        mvals = {
            (1, 0, 0): Expr.rat(-8) * lpp,
            (0, 1, 0): Expr.rat(-64) * c * lpp ** 4 / a,
            (0, 0, 1): Expr.rat(-64) * c * lpp ** 3 / a,
        }
        s.anchors = {"a": a, "c": c, "g": ge}
        _push_cross_constraints(s, ge, mvals)
    else:
        g, base = _match_cell_shape(set(cell), {(0, 0), (0, 1), (1, 3)})
        if g is None:
            raise CatalogError("(6b') cell does not match the canonical shape")
        a = _pullback_coeff(g, base, (0, 0))
        b = _pullback_coeff(g, base, (0, 1))
        c = _pullback_coeff(g, base, (1, 3))
        lpp = _canonical_lambda2(g)
        denom = (b * lpp - a) ** 2
        mvals = {
            (1, 0, 0): Expr.rat(-8) * a * lpp * (b * lpp + a) / denom,
            (0, 1, 0): Expr.rat(-64) * a ** 3 * c * lpp ** 4 / (denom * denom),
            (0, 0, 1): Expr.rat(-64) * a ** 3 * c * lpp ** 3 / (denom * denom),
        }
        delta = 3 * b * b * lpp * lpp - 2 * a * b * lpp + 3 * a * a
        s.anchors = {"a": a, "b": b, "c": c, "g": g, "Delta": delta}
        _push_cross_constraints(s, g, mvals)
    return s


def _canonical_lambda2(g: D4Element) -> Expr:
    """lambda'' = n'/u' of the canonical frame, as a monomial in (m, n, u)."""
    img = g.on_param_monomial((0, 1, -1))
    return _param_of_monomial(tuple(img))


def _push_cross_constraints(s: Summary, g: D4Element, mvals: Dict):
    """Two independent pinned directions beyond lambda'': m'u'/n' and n'^-3 u'^4."""
    for mono_new, combo in (((1, -1, 1), None), ((0, -3, 4), None)):
        mono_old = tuple(g.on_param_monomial(mono_new))
        value: Expr = Expr.rat(1)
        for key, k in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), mono_new):
            if k:
                value = value * (mvals[key] ** k)
        s.constraints.append(Constraint(mono_old, value))
        sf = square_free(value)
        if sf is not None:
            s.sign_relations.append((mono_old, sf))


# ----- (4a'), (6a') -------------------------------------------------------------


def _sum_4ap6ap(lam, record) -> Summary:
    s = Summary(record.code, 1, vertex_role="v")   # mu decided by the lifting layer
    s.generic_constraints.append(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    if record.code == "4a'":
        E0, E1 = record.gamma_anchor["gamma_dual"]
        s.anchors = {"strand": (E0, E1)}
    else:
        s.anchors = {"cell": tuple(sorted(record.gamma_anchor.get("gamma_cell", ())))}
    return s


def mu_radicand_4ap(record, lam_prime_mono, u_mono) -> Expr:
    """Radicand -a_E0 a_E1 u lambda' for a (4a') with mu = 2."""
    E0, E1 = record.gamma_anchor["gamma_dual"]
    return square_free(Expr.rat(-1) * C(E0) * C(E1)
                       * _param_of_monomial(u_mono) * _param_of_monomial(lam_prime_mono))


# ----- (3h) ---------------------------------------------------------------------


def _sum_3h(lam, record) -> Summary:
    s = Summary("3h", 2, orientation="diagonal")
    cellA = record.gamma_anchor.get("cell_A")
    cellB = record.gamma_anchor.get("cell_B")
    if cellA is None or cellB is None:
        raise CatalogError("(3h) record lacks its two vertex cells")
    got = None
    for g in all_elements():
        for top, bot in ((cellA, cellB), (cellB, cellA)):
            img_top = {g.on_exponent(Q, 3) for Q in top}
            img_bot = {g.on_exponent(Q, 3) for Q in bot}
            if img_top == {(0, 2), (0, 3), (1, 1)} and img_bot == {(0, 2), (1, 1), (1, 0)}:
                got = g
                break
        if got:
            break
    if got is None:
        raise CatalogError("(3h) cells do not match the canonical shape")
    gi = got.inverse()
    a = C(gi.on_exponent((0, 2), 3))
    b = C(gi.on_exponent((0, 3), 3))
    c = C(gi.on_exponent((1, 1), 3))
    bp = C(gi.on_exponent((1, 0), 3))
    lpp = _canonical_lambda2(got)
    nbar = Expr.rat(-4) * b * c * lpp / ((b * lpp - a) ** 2)
    ubar = Expr.rat(-4) * b * c / ((b * lpp - a) ** 2)
    # constraints: n' and u' of the canonical frame pinned (values non-monomial
    # in general but with square-free monomial sign parts)
    for mono_new, val in (((0, 1, 0), nbar), ((0, 0, 1), ubar)):
        mono_old = tuple(got.on_param_monomial(mono_new))
        s.constraints.append(Constraint(mono_old, val))
        sf = _sign_part(val)
        if sf is not None:
            s.sign_relations.append((mono_old, sf))
    # m' is pinned too, with the quadratic radicand a n (a n - c)
    mono_m = tuple(got.on_param_monomial((1, 0, 0)))
    s.constraints.append(Constraint(mono_m, None))
    s.numeric_radicands.append(a * nbar * (a * nbar - c))
    s.anchors = {"a": a, "b": b, "c": c, "bp": bp, "g": got}
    return s


def _sign_part(e: Expr) -> Optional[Expr]:
    """Square-free monomial sign of an expression of the form mono * square."""
    sf = square_free(e)
    if sf is not None:
        return sf
    # handle mono / (non-zero square): peel Pow(expr, even) factors
    def peel(x: Expr):
        if x.op == "pow" and x.payload[1] % 2 == 0:
            return Expr.rat(1)
        if x.op == "mul":
            return peel(x.payload[0]) * peel(x.payload[1])
        return x
    stripped = peel(e)
    return square_free(stripped)


# ----- (3d) ---------------------------------------------------------------------


def _sum_3d(gamma, lam, record) -> Summary:
    s = Summary("3d", 2, orientation="diagonal")
    # the two-chip vertex pins n via u (eq:3d); the arm tangency is a
    # two-apex segment pinning m with its quadratic radicand
    P = record.gamma_anchor["P"]
    arm = record.gamma_anchor["arm_chips"]
    cellP = record.gamma_anchor.get("cell_P")
    # segment part: the arm between the two unit chips
    a_pt, b_pt = arm
    mid = ((a_pt[0] + b_pt[0]) / 2, (a_pt[1] + b_pt[1]) / 2)
    loc = gamma.locate(mid)
    if loc is None or loc[0] != "edge":
        raise CatalogError("(3d) arm midpoint is not on a Gamma edge")
    edge = gamma.edges[loc[1]]
    anchor = {"gamma_dual": edge.dual}
    for name, pt in (("cell_A", a_pt), ("cell_B", b_pt)):
        w = gamma.locate(pt)
        if w is not None and w[0] == "vertex":
            anchor[name] = gamma.vertices[w[1]].dual_cell
    from .tangency import _stratum_of_lambda
    stratum = _stratum_of_lambda(lam, mid)
    strand = LEG_STRAND[stratum[1]] if stratum[0] == "leg" else EDGE_STRAND[lam_kind(lam)]
    seg = _segment_core(lam, record, strand, anchor, lam_vertices=())
    mono = STRAND_MONOMIAL[strand]
    s.constraints.append(Constraint(mono, seg["mu"], radicand=seg["radicand"]))
    s.sign_relations.append((mono, square_free(seg["mu"])))
    s.radicands.append(seg["radicand"])
    # vertex part (eq:3d): n' = -(b u' - c)^2 / (4 a c u'): sign -(a c u')
    if cellP is not None:
        a_e, c_e = _3d_vertex_coeffs(gamma, lam, record, cellP)
        vi = [i for i, v in enumerate(lam.vertices) if v.position == P]
        if vi:
            span = _adjacent_span(lam, vi[0]) + (_edge_monomial(lam),)
            s.generic_constraints.append(span)
    else:
        s.generic_constraints.append(((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    s.anchors = {"segment": seg, "P": P}
    return s


def _3d_vertex_coeffs(gamma, lam, record, cellP):
    pts = sorted(cellP)
    return C(pts[0]), C(pts[-1])


# ----- (3f) ---------------------------------------------------------------------


def _sum_3f(gamma, lam, record) -> Summary:
    s = Summary("3f", 4, vertex_role=record.type.carrier[1])
    center = record.gamma_anchor["center"]
    arms = record.gamma_anchor["arms"]
    vi = record.gamma_anchor["lam_vertex"]
    from .tangency import _stratum_of_lambda
    # constraints: strand ties along two of the arms (third is dependent)
    seen = []
    for (d, e) in arms:
        midpt = ((center[0] + e[0]) / 2, (center[1] + e[1]) / 2)
        stratum = _stratum_of_lambda(lam, midpt)
        if stratum[0] == "vertex":
            continue
        strand = (LEG_STRAND[stratum[1]] if stratum[0] == "leg"
                  else EDGE_STRAND[lam_kind(lam)])
        loc = gamma.locate(midpt)
        if loc is None or loc[0] != "edge":
            raise CatalogError("(3f) arm midpoint is not on a Gamma edge")
        E0, E1 = gamma.edges[loc[1]].dual
        L0, L1 = strand
        delta = (L1[0] - L0[0], L1[1] - L0[1])
        if (E1[0] - E0[0], E1[1] - E0[1]) != delta:
            E0, E1 = E1, E0
        mono = STRAND_MONOMIAL[strand]
        if mono in seen:
            continue
        seen.append(mono)
        val = C(E0) / C(E1)
        if len(s.constraints) < 2:
            s.constraints.append(Constraint(mono, val))
            s.sign_relations.append((mono, square_free(val)))
    s.radicands.extend(_3f_radicands(gamma, record))
    return s


def _3f_radicands(gamma, record) -> List[Expr]:
    """Case-keyed radicands of eq:3fmn2Case123.

    Normalize by D4 so the tripod sits at the lower vertex with the cell
    {(1,1),(1,2),(2,1)}; if an axis arm is shortest, normalize it to the
    vertical one and use the printed case; a shortest diagonal arm is handled
    by the local cyclic substitution (x,y) -> (y, 4-x-y).
    """
    center = record.gamma_anchor["center"]
    arms = record.gamma_anchor["arms"]
    cell = set(record.gamma_anchor["gamma_cell"])

    lengths = {}
    for (d, e) in arms:
        lengths[d] = abs(e[0] - center[0]) + abs(e[1] - center[1]) \
            if 0 in d else abs(e[0] - center[0])
    # D4 normalization: cell -> {(1,1),(1,2),(2,1)}
    g, base = _match_cell_shape(cell, {(0, 0), (0, 1), (1, 0)})
    if g is None or base is None:
        raise CatalogError("(3f) cell is not a unimodular corner triangle")
    # base + {(0,0),(0,1),(1,0)} should be {(1,1),(1,2),(2,1)} after shifting:
    # work with the actual image cell
    img_cell = {g.on_exponent(Q, 3) for Q in cell}
    # arm directions transform by the plane action
    img_lengths = {g.on_direction(d): l for d, l in lengths.items()}
    lv = img_lengths.get((0, -1))
    lh = img_lengths.get((-1, 0))
    ld = img_lengths.get((1, 1))
    if lv is None or lh is None or ld is None:
        raise CatalogError("(3f) arms do not match the canonical star after D4")
    gi = g.inverse()

    def coeff_at(Q):
        return C(gi.on_exponent(Q, 3))

    # apexes in the image frame relative to the image cell's base corner
    bx = min(q[0] for q in img_cell)
    by = min(q[1] for q in img_cell)

    def apex_of(edge_pts):
        # cell adjacent to v-cell across the given edge: apex = reflected point
        p, q = edge_pts
        for vtx in gamma.vertices:
            img = {g.on_exponent(Q, 3) for Q in vtx.dual_cell}
            if p in img and q in img and img != img_cell:
                return next(z for z in img if z not in (p, q))
        raise CatalogError("(3f) neighbour cell not found")

    c11 = (bx, by)
    c12 = (bx, by + 1)
    c21 = (bx + 1, by)
    if not {c11, c12, c21} == img_cell:
        raise CatalogError("(3f) normalized cell mismatch")

    if ld < min(lh, lv):
        # shortest diagonal arm: pull the printed vertical-min formulas back
        # through the local substitution phi(x,y) = (y, 4-x-y), under which
        # arm slots rotate horizontal -> diagonal -> vertical -> horizontal
        # and the central cell permutes (1,1)->(1,2)->(2,1)->(1,1)
        apex_h = apex_of((c11, c12))      # old horizontal-arm apex (0,i)
        apex_v = apex_of((c11, c21))      # old vertical (j,0)
        apex_d = apex_of((c12, c21))      # old diagonal (k,4-k)
        i_old = apex_h[1] - by + 1
        j_old = apex_v[0] - bx + 1
        k_old = apex_d[0] - bx + 1
        i, j, k = 4 - j_old, 4 - k_old, i_old
        A0i = coeff_at(apex_v)
        Aj0 = coeff_at(apex_d)
        Ak = coeff_at(apex_h)
        A11 = coeff_at(c21)
        A12 = coeff_at(c11)
        A21 = coeff_at(c12)
    else:
        # axis arm shortest: normalize to vertical via t0 if needed
        if lh < lv:
            # reflect: swap x and y inside the image frame by composing g with t0;
            # recompute through the t0-composed element
            return _3f_radicands_with(gamma, record, T0 * g)
        apex_h = apex_of((c11, c12))
        apex_v = apex_of((c11, c21))
        apex_d = apex_of((c12, c21))
        i = apex_h[1] - by + 1
        j = apex_v[0] - bx + 1
        k = apex_d[0] - bx + 1
        A0i, Aj0, Ak = coeff_at(apex_h), coeff_at(apex_v), coeff_at(apex_d)
        A11, A12, A21 = coeff_at(c11), coeff_at(c12), coeff_at(c21)

    sign_m = Expr.rat((-1) ** ((i + j) % 2))
    sign_n = Expr.rat((-1) ** ((j + k) % 2))
    rad_m = square_free(sign_m * A0i * Aj0 * _rpow(A21, 2 - j)
                        * _rpow(A11, i + j - 2) * _rpow(A12, -i))
    rad_n = square_free(sign_n * Aj0 * Ak * _rpow(A21, 6 - j - k)
                        * _rpow(A11, j - 2) * _rpow(A12, k - 4))
    return [rad_m, rad_n]


def _3f_radicands_with(gamma, record, g):
    rec2 = record
    # recompute with the composed element by temporarily overriding: simplest
    # is to redo the computation inline with the new g
    center = rec2.gamma_anchor["center"]
    arms = rec2.gamma_anchor["arms"]
    cell = set(rec2.gamma_anchor["gamma_cell"])
    img_cell = {g.on_exponent(Q, 3) for Q in cell}
    lengths = {}
    for (d, e) in arms:
        lengths[d] = abs(e[0] - center[0]) + abs(e[1] - center[1]) \
            if 0 in d else abs(e[0] - center[0])
    img_lengths = {g.on_direction(d): l for d, l in lengths.items()}
    gi = g.inverse()

    def coeff_at(Q):
        return C(gi.on_exponent(Q, 3))

    bx = min(q[0] for q in img_cell)
    by = min(q[1] for q in img_cell)
    c11, c12, c21 = (bx, by), (bx, by + 1), (bx + 1, by)

    def apex_of(edge_pts):
        p, q = edge_pts
        for vtx in gamma.vertices:
            img = {g.on_exponent(Q, 3) for Q in vtx.dual_cell}
            if p in img and q in img and img != img_cell:
                return next(z for z in img if z not in (p, q))
        raise CatalogError("(3f) neighbour cell not found")

    apex_h = apex_of((c11, c12))
    apex_v = apex_of((c11, c21))
    apex_d = apex_of((c12, c21))
    i = apex_h[1] - by + 1
    j = apex_v[0] - bx + 1
    k = apex_d[0] - bx + 1
    A0i, Aj0, Ak = coeff_at(apex_h), coeff_at(apex_v), coeff_at(apex_d)
    A11, A12, A21 = coeff_at(c11), coeff_at(c12), coeff_at(c21)
    sign_m = Expr.rat((-1) ** ((i + j) % 2))
    sign_n = Expr.rat((-1) ** ((j + k) % 2))
    rad_m = square_free(sign_m * A0i * Aj0 * _rpow(A21, 2 - j)
                        * _rpow(A11, i + j - 2) * _rpow(A12, -i))
    rad_n = square_free(sign_n * Aj0 * Ak * _rpow(A21, 6 - j - k)
                        * _rpow(A11, j - 2) * _rpow(A12, k - 4))
    return [rad_m, rad_n]


# ----- type (8) -------------------------------------------------------------------


def _sum_tree_shape(f, gamma, lam, record, lam_params) -> Summary:
    s = Summary("8", 8)
    # the five strand ties pin m, n, u; extract the three independent ones
    v0 = record.gamma_anchor["v0"]
    v1 = record.gamma_anchor["v1"]
    from .tangency import _stratum_of_lambda
    seen = {}
    probes = []
    for (d, e) in record.gamma_anchor["arms0"]:
        probes.append((((v0[0] + e[0]) / 2, (v0[1] + e[1]) / 2)))
    for (d, e) in record.gamma_anchor["arms1"]:
        probes.append((((v1[0] + e[0]) / 2, (v1[1] + e[1]) / 2)))
    probes.append(((v0[0] + v1[0]) / 2, (v0[1] + v1[1]) / 2))
    for midpt in probes:
        stratum = _stratum_of_lambda(lam, midpt)
        if stratum[0] == "vertex":
            continue
        strand = (LEG_STRAND[stratum[1]] if stratum[0] == "leg"
                  else EDGE_STRAND[lam_kind(lam)])
        loc = gamma.locate(midpt)
        if loc is None or loc[0] != "edge":
            continue
        E0, E1 = gamma.edges[loc[1]].dual
        L0, L1 = strand
        delta = (L1[0] - L0[0], L1[1] - L0[1])
        if (E1[0] - E0[0], E1[1] - E0[1]) != delta:
            E0, E1 = E1, E0
        mono = STRAND_MONOMIAL[strand]
        if mono in seen:
            continue
        seen[mono] = C(E0) / C(E1)
    rank_basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    count = 0
    for mono, val in seen.items():
        s.constraints.append(Constraint(mono, val))
        s.sign_relations.append((mono, square_free(val)))
        count += 1
        if count == 3:
            break
    s.radicands.extend(tree_shape_radicands(f, gamma, lam, record))
    return s


def tree_shape_markers(gamma, record):
    """Markers (i, j, r, k) and the D4 normalizer into the modification frame.

    Normalized frame: slope-plus quartet, L1 = shortest leaf = the (0,-1)-arm
    at the lower vertex; markers are the apexes (0,i), (j,0), (3,r) [across
    the far horizontal arm] and (k,3) [across the far vertical arm].
    """
    v0 = record.gamma_anchor["v0"]
    v1 = record.gamma_anchor["v1"]
    arms0 = dict(record.gamma_anchor["arms0"])
    arms1 = dict(record.gamma_anchor["arms1"])

    def ln(b, e):
        return abs(e[0] - b[0]) + abs(e[1] - b[1])

    leaf = []
    for d, e in arms0.items():
        leaf.append((ln(v0, e), "v0", d))
    for d, e in arms1.items():
        leaf.append((ln(v1, e), "v1", d))
    leaf.sort()
    if leaf[0][0] == leaf[1][0]:
        from .tangency import GammaNonGenericError
        raise GammaNonGenericError("shortest quartet leaf ties")
    _, side, dmin = leaf[0]
    # normalizer: the min leaf becomes the (0,-1)-arm of the lower vertex of
    # a slope-plus quartet; the edge direction away from the min-side vertex
    # must map to (1,1)
    near0 = v0 if side == "v0" else v1
    far0 = v1 if side == "v0" else v0
    from .curves import primitive
    dnf = primitive((far0[0] - near0[0], far0[1] - near0[1]))
    gn = None
    for g in all_elements():
        if g.on_direction(dmin) == (0, -1) and g.on_direction(dnf) == (1, 1):
            gn = g
            break
    if gn is None:
        raise CatalogError("no Klein normalizer for the quartet")
    gi = gn.inverse()

    def cell_img(vertex_cell):
        return {gn.on_exponent(Q, 3) for Q in vertex_cell}

    # cells at the arm ends, via the gamma curve
    def end_cell(base, d, arms):
        e = arms[d]
        for vtx in gamma.vertices:
            if vtx.position == e:
                return vtx.dual_cell
        raise CatalogError("quartet arm end is not a Gamma vertex")

    near_arms = arms0 if side == "v0" else arms1
    far = v1 if side == "v0" else v0
    far_arms = arms1 if side == "v0" else arms0
    near = v0 if side == "v0" else v1

    # markers: read the apexes off the four end cells in the image frame
    def apex_marker(base_pt, d, arms, expect):
        cell = None
        e = arms[d]
        for vtx in gamma.vertices:
            if vtx.position == e:
                cell = vtx.dual_cell
                break
        if cell is None:
            raise CatalogError("quartet arm end is not a Gamma vertex")
        img = cell_img(cell)
        core = {(1, 1), (1, 2), (2, 1), (2, 2)}
        apex = next(q for q in img if q not in core)
        return apex

    inv_near = {gn.on_direction(d): d for d in near_arms}
    inv_far = {gn.on_direction(d): d for d in far_arms}
    a_j = apex_marker(near, inv_near[(0, -1)], near_arms, "j0")   # (j, 0)
    a_i = apex_marker(near, inv_near[(-1, 0)], near_arms, "0i")   # (0, i)
    a_r = apex_marker(far, inv_far[(1, 0)], far_arms, "3r")       # (3, r)
    a_k = apex_marker(far, inv_far[(0, 1)], far_arms, "k3")       # (k, 3)
    i = a_i[1]
    j = a_j[0]
    r = a_r[1]
    k = a_k[0]

    def ln2(b, e):
        return abs(e[0] - b[0]) + abs(e[1] - b[1])

    L1 = ln2(near, near_arms[inv_near[(0, -1)]])
    L2 = ln2(near, near_arms[inv_near[(-1, 0)]])
    L5h = ln2(far, far_arms[inv_far[(1, 0)]])    # horizontal far arm
    L4v = ln2(far, far_arms[inv_far[(0, 1)]])    # vertical far arm
    L3 = abs(v1[0] - v0[0])
    return {"g": gn, "i": i, "j": j, "r": r, "k": k,
            "L1": L1, "L2": L2, "L3": L3, "L4v": L4v, "L5h": L5h}


def tree_shape_case(markers) -> str:
    L1, L3 = markers["L1"], markers["L3"]
    vals = {"I": markers["L4v"] - L1, "II": L3, "III": markers["L5h"] - L1}
    items = sorted(vals.items(), key=lambda kv: kv[1])
    if items[0][1] == items[1][1]:
        from .tangency import GammaNonGenericError
        raise GammaNonGenericError("min{L3, L4-L1, L5-L1} ties")
    return items[0][0]


def modified_coefficient_initials(f, gamma, record) -> Dict[str, Expr]:
    """Closed initial forms of the Appendix-B coefficients, a12-normalized.

    Keys: at00, at20, at40, at60, ah04, ah06 (tilde/hat), plus the case tag.
    Expressions are in the original coefficient initials; every Coeff(1,2)'
    of the normalized frame is divided out explicitly.
    """
    markers = tree_shape_markers(gamma, record)
    case = tree_shape_case(markers)
    g = markers["g"]
    gi = g.inverse()

    def A(Q):
        # coefficient of the normalized (a12 = 1) frame: a'_Q / a'_{12}
        return C(gi.on_exponent(Q, 3)) / C(gi.on_exponent((1, 2), 3))

    i, j, r, k = markers["i"], markers["j"], markers["r"], markers["k"]
    out: Dict[str, Expr] = {"case": Expr.rat({"I": 1, "II": 2, "III": 3}[case])}
    out["at00"] = Expr.rat((-1) ** (i % 2)) * A((0, i)) * _rpow(A((1, 1)), i)
    if j == 1:
        out["at20"] = Expr.rat(-1) * A((1, 0)) * A((2, 1)) / A((1, 1))
    else:
        out["at20"] = A((2, 0))
    out["at60"] = Expr.rat((-1) ** (r % 2)) * A((3, r)) * _rpow(A((2, 1)), r) \
        * _rpow(A((2, 2)), 3 - r)
    out["ah06"] = Expr.rat((-1) ** (k % 2)) * A((k, 3)) * _rpow(A((2, 2)), 3 - k)
    if case == "I":
        out["at40"] = Expr.rat((-1) ** (k % 2)) * A((k, 3)) * _rpow(A((2, 2)), 1 - k) \
            * _rpow(A((2, 1)), 3)
        out["ah04"] = None
    elif case == "II":
        out["at40"] = Expr.rat((-1) ** (j % 2)) * A((j, 0)) * _rpow(A((2, 2)), 2) \
            * _rpow(A((2, 1)) / A((1, 1)), 2 - j)
        out["ah04"] = Expr.rat((-1) ** (j % 2)) * _rpow(A((2, 2)), 2) \
            * (A((j, 0)) / A((1, 1))) * _rpow(A((2, 1)) / A((1, 1)), 1 - j)
    else:
        out["at40"] = Expr.rat((-1) ** (r % 2)) * A((3, r)) * _rpow(A((2, 1)), r) \
            * _rpow(A((2, 2)), 1 - r)
        out["ah04"] = Expr.rat((-1) ** (r % 2)) * A((3, r)) \
            * _rpow(A((2, 2)) / A((2, 1)), 1 - r)
    out["markers"] = (i, j, r, k)
    out["normalizer"] = g
    return out


def tree_shape_radicands(f, gamma, lam, record) -> List[Expr]:
    mods = modified_coefficient_initials(f, gamma, record)
    case = int(mods["case"].payload[0])
    at00, at20, at40 = mods["at00"], mods["at20"], mods["at40"]
    at60, ah04, ah06 = mods["at60"], mods["ah04"], mods["ah06"]
    rads = [square_free(at20 * at00)]
    if case == 1:
        rads.append(square_free(at20 * at40))
        rads.append(square_free(at40 * at60))
    elif case == 2:
        rads.append(square_free(at40 * at60))
        rads.append(square_free(ah04 * ah06))
    else:
        rads.append(square_free(at20 * at40))
        rads.append(square_free(ah04 * ah06))
    return rads
