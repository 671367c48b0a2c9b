"""JSON input/output for sextic data, divisors, reports.

Input schema:
    {"bidegree": [3, 3],
     "coefficients": [{"i": 0, "j": 0, "val": "3/2", "sign": 1,
                       "residue": "5/7"}, ...]}
Rationals are "p/q" strings (or integers); residue is optional.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Optional

from .sextic import CoefficientDatum, InvalidInputError, SexticInput


def parse_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int,)):
        return Fraction(x)
    raise InvalidInputError(f"not an exact rational: {x!r} (floats are not accepted)")


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def sextic_from_json(data) -> SexticInput:
    if isinstance(data, str):
        data = json.loads(data)
    if data.get("bidegree") not in ([3, 3], (3, 3), None):
        raise InvalidInputError(f"unsupported bidegree {data.get('bidegree')}")
    coeffs = []
    for row in data["coefficients"]:
        residue = row.get("residue")
        coeffs.append(CoefficientDatum(
            int(row["i"]), int(row["j"]),
            parse_fraction(row["val"]),
            int(row.get("sign", 1)),
            parse_fraction(residue) if residue is not None else None,
        ))
    return SexticInput(coeffs)


def sextic_to_json(f: SexticInput) -> Dict:
    rows = []
    for (i, j) in f.points():
        c = f.datum(i, j)
        row = {"i": i, "j": j, "val": frac_str(c.val), "sign": c.sign}
        if c.residue is not None:
            row["residue"] = frac_str(c.residue)
        rows.append(row)
    return {"bidegree": [3, 3], "coefficients": rows}


def point_json(p):
    return [frac_str(p[0]), frac_str(p[1])]


def curve_to_json(curve) -> Dict:
    return {
        "vertices": [{"position": point_json(v.position),
                      "dual_cell": sorted(map(list, v.dual_cell))}
                     for v in curve.vertices],
        "edges": [{"from": e.a, "to": e.b, "direction": list(e.direction),
                   "weight": e.weight, "length": frac_str(e.length),
                   "dual": [list(e.dual[0]), list(e.dual[1])]}
                  for e in curve.edges],
        "legs": [{"vertex": l.vertex, "direction": list(l.direction),
                  "weight": l.weight,
                  "dual": [list(l.dual[0]), list(l.dual[1])]}
                 for l in curve.legs],
    }


def subdivision_to_json(sub) -> Dict:
    return {
        "cells": [sorted(map(list, c.tight)) for c in sub.cells],
        "marked": sorted(map(list, sub.marked)),
        "smooth": all(len(c.tight) == 3 and c.doubled_area() == 1 for c in sub.cells),
    }


def divisor_to_json(D) -> list:
    out = []
    for key, m in D.items():
        if key[0] == "vertex":
            out.append({"vertex": key[1], "multiplicity": m})
        else:
            out.append({"edge": key[1], "offset": frac_str(key[2]), "multiplicity": m})
    return out


def record_to_json(rec) -> Dict:
    out = {
        "type": rec.code,
        "orientation": rec.type.orientation,
        "position": rec.type.position,
        "carrier": [rec.type.carrier[0], list(rec.type.carrier[1])
                    if isinstance(rec.type.carrier[1], tuple) else rec.type.carrier[1]],
        "stable_points": [{"point": point_json(p), "multiplicity": m}
                          for p, m in sorted(rec.chips.items())],
    }
    if rec.tangency_points is not None:
        out["tangency_points"] = [point_json(p) for p in rec.tangency_points]
    if rec.tree_lengths is not None and isinstance(rec.tree_lengths, tuple) \
            and len(rec.tree_lengths) == 5:
        out["tree_lengths"] = [frac_str(x) for x in rec.tree_lengths]
    return out


def params_to_json(params) -> Dict:
    return {"kind": params.kind, "v0": point_json(params.v0),
            "t": frac_str(params.t)}


def params_from_json(data) -> "TritangentParams":
    from .curves import TritangentParams
    v0 = (parse_fraction(data["v0"][0]), parse_fraction(data["v0"][1]))
    return TritangentParams(data["kind"], v0, parse_fraction(data["t"]))
