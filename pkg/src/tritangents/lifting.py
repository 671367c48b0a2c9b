"""Lifting multiplicities, parameter constraints, and field discriminants.

The lifting multiplicity of a tritangent is the product of local
multiplicities (grouping a (4a)/(6a) vertex with a tangency on an adjacent
leg), provided the tropical parameter constraints pin all three parameters:
the exponent vectors of the constraints must have rank 3, with vertex
relations counted as generic elements of the span of their adjacent-leg
monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import (
    CatalogError,
    Constraint,
    STRAND_MONOMIAL,
    LEG_STRAND,
    Summary,
    lam_kind,
    mu_radicand_4ap,
    summarize,
)
from .curves import PlanarTropicalCurve
from .exprs import Expr, expr_str
from .tangency import TangencyRecord

ZERO_CODES = ("1", "1'", "2b", "4b", "7", "3ab", "3cb", "3bb", "3bb1", "3bb2", "3a'")


@dataclass
class LiftReport:
    multiplicity: int
    constraints: List[Constraint] = field(default_factory=list)
    discriminants: List[Expr] = field(default_factory=list)
    numeric_discriminants: List[Expr] = field(default_factory=list)
    exceptional: List[str] = field(default_factory=list)
    summaries: List[Summary] = field(default_factory=list)
    records: List[TangencyRecord] = field(default_factory=list)
    reason: str = ""

    def discriminant_count_matches(self) -> bool:
        if self.multiplicity == 0:
            return True
        k = len(self.discriminants) + len(self.numeric_discriminants)
        return self.multiplicity == 2 ** k

    def to_json(self) -> Dict:
        return {
            "multiplicity": self.multiplicity,
            "constraints": [
                {"monomial": c.monomial,
                 "value": expr_str(c.value) if c.value is not None else None,
                 "radicand": expr_str(c.radicand) if c.radicand is not None else None}
                for c in self.constraints
            ],
            "discriminants": [expr_str(d) for d in self.discriminants],
            "numeric_discriminants": [expr_str(d) for d in self.numeric_discriminants],
            "exceptional": self.exceptional,
            "types": [s.code for s in self.summaries],
            "reason": self.reason,
        }


def _rank(vectors: Sequence[Tuple[int, int, int]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    cols = 3
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def generic_rank(fixed: Sequence[Tuple[int, int, int]],
                 spans: Sequence[Tuple[Tuple[int, int, int], ...]]) -> int:
    """Rank of fixed vectors plus one generic vector from each span."""
    if not spans:
        return _rank(fixed)
    best = 0
    choices = []
    for span in spans:
        opts = list(span)
        for a, b in itertools.combinations(span, 2):
            opts.append(tuple(a[k] + b[k] for k in range(3)))
        choices.append(opts)
    for combo in itertools.product(*choices):
        best = max(best, _rank(list(fixed) + list(combo)))
        if best == 3:
            return 3
    return best


def base_multiplicity(summary: Summary, code: str, context: Dict) -> int:
    """Local multiplicity per Table 1 with the context rules."""
    if code in ZERO_CODES:
        return 0
    if code in ("2a", "2a'", "5b", "6b", "4b'", "6b'"):
        return 1
    if code in ("3a", "3c", "3c'", "3aa", "3ac", "3cc", "3d", "3h"):
        return 2
    if code == "5a":
        return 2
    if code == "3f":
        return 4
    if code == "8":
        return 8
    if code in ("4a", "6a"):
        if context.get("grouped"):
            return 1
        return 2 if summary.orientation == "diagonal" else 1
    if code in ("4a'", "6a'"):
        return context.get("mu", 1)
    raise CatalogError(code)


def _carrier_key(record: TangencyRecord):
    kind, data = record.type.carrier
    if kind == "leg":
        return ("leg", data)
    if kind == "edge":
        return ("edge",)
    return None


def _legs_of_vertex(lam, vi):
    return [l.direction for l in lam.legs if l.vertex == vi]


def analyze_lifting(f, gamma: PlanarTropicalCurve, lam: PlanarTropicalCurve,
                    records: Sequence[TangencyRecord], lam_params=None) -> LiftReport:
    summaries = [summarize(f, gamma, lam, rec, lam_params) for rec in records]
    report = LiftReport(0, summaries=list(summaries), records=list(records))

    # zero types kill the lift
    for s in summaries:
        if s.code in ZERO_CODES:
            report.reason = f"component of type ({s.code}) never lifts"
            return report

    # two tangencies sharing the relative interior of one leg or edge
    carriers = [
        _carrier_key(r) for r in records if r.type.position in ("leg", "edge")
    ]
    for key in set(c for c in carriers if c is not None):
        if carriers.count(key) > 1:
            report.reason = "two tangencies share a stratum interior (nongeneric system)"
            return report

    # vertex tangencies of type (4a)/(6a): grouping with adjacent legs
    context: List[Dict] = [dict() for _ in records]
    for idx, rec in enumerate(records):
        if rec.code not in ("4a", "6a"):
            continue
        vi = rec.gamma_anchor["lam_vertex"]
        adj = set(_legs_of_vertex(lam, vi))
        neighbours = [
            j for j, other in enumerate(records)
            if j != idx and other.type.position == "leg"
            and other.type.carrier[1] in adj
        ]
        if len(neighbours) >= 2:
            report.reason = "(4a)/(6a) vertex with tangencies on both adjacent legs"
            return report
        if len(neighbours) == 1:
            context[idx]["grouped"] = True

    # mu for 4-valent vertex types
    for idx, rec in enumerate(records):
        if rec.code == "6a'":
            context[idx]["mu"] = 1
        elif rec.code == "4a'":
            context[idx]["mu"] = _mu_of_4ap(gamma, lam, records, idx)
            if context[idx]["mu"] == 2:
                lam_prime, u_mono = _4ap_known_monomials(lam, records, idx)
                summaries[idx].radicands.append(
                    mu_radicand_4ap(rec, lam_prime, u_mono))

    # rank of the constraint system
    fixed = []
    for s in summaries:
        for c in s.constraints:
            fixed.append(c.monomial)
    spans = [sp for s in summaries for sp in s.generic_constraints]
    rank = generic_rank(fixed, spans)
    if rank < 3:
        report.reason = f"parameter constraints have rank {rank} < 3"
        return report

    mult = 1
    for s, rec, ctx in zip(summaries, records, context):
        mult *= base_multiplicity(s, s.code, ctx)
    report.multiplicity = mult
    for s in summaries:
        report.constraints.extend(s.constraints)
        report.discriminants.extend([r for r in s.radicands if r is not None])
        report.numeric_discriminants.extend(s.numeric_radicands)
        if s.exceptional:
            report.exceptional.append(s.exceptional)
    # diagonal (4a)/(6a) grouped with a leg lose their own discriminant;
    # grouped vertices have multiplicity one and contribute no radicand
    _drop_grouped_radicands(report, summaries, records, context)
    return report


def _drop_grouped_radicands(report, summaries, records, context):
    drop = []
    for s, rec, ctx in zip(summaries, records, context):
        if rec.code in ("4a", "6a") and ctx.get("grouped") and s.orientation == "diagonal":
            drop.extend(s.radicands)
    if drop:
        report.discriminants = [d for d in report.discriminants if not any(d is x for x in drop)]


def _mu_of_4ap(gamma, lam, records, idx) -> int:
    rec = records[idx]
    E0, E1 = rec.gamma_anchor["gamma_dual"]
    e = gamma.edges[rec.gamma_anchor["gamma_edge"]]
    d = e.direction
    v = lam.vertices[0].position
    sides = []
    for j, other in enumerate(records):
        if j == idx:
            continue
        pts = sorted(other.chips)
        p = pts[0]
        s = d[0] * (p[1] - v[1]) - d[1] * (p[0] - v[0])
        if s != 0:
            sides.append(1 if s > 0 else -1)
    if len(sides) == 2 and sides[0] == sides[1]:
        return 2
    return 1


def _4ap_known_monomials(lam, records, idx):
    """(lambda', u)-style monomials pinned by the other two tangencies."""
    monos = []
    for j, other in enumerate(records):
        if j == idx or other.type.position != "leg":
            continue
        monos.append(STRAND_MONOMIAL[LEG_STRAND[other.type.carrier[1]]])
    while len(monos) < 2:
        monos.append((0, 0, 1))
    return monos[0], monos[1]


def liftability(f, gamma, lam, records, lam_params=None) -> bool:
    return analyze_lifting(f, gamma, lam, records, lam_params).multiplicity > 0


def lifting_multiplicity(f, gamma, lam, records, lam_params=None) -> int:
    return analyze_lifting(f, gamma, lam, records, lam_params).multiplicity


def parameter_constraints(f, gamma, lam, records, lam_params=None) -> List[Constraint]:
    return analyze_lifting(f, gamma, lam, records, lam_params).constraints


def field_discriminants(f, gamma, lam, records, lam_params=None):
    rep = analyze_lifting(f, gamma, lam, records, lam_params)
    return rep.discriminants, rep.numeric_discriminants, rep.exceptional
