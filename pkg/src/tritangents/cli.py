"""Command-line front end.

Subcommands: tropicalize, classify, tritangents, lift, real, classes,
render, verify.  Exit codes: 0 success, 1 invalid input, 2 nongeneric
input, 3 invariant violation; errors carry a machine-readable JSON body.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import jsonio
from .curves import dual_curve, lambda_curve
from .divisors import skeleton, theta_characteristics
from .enumerator import ClassSumError, classes_report, enumerate_tritangents, class_of
from .intersect import UnboundedComponentError, stable_intersection, set_intersection, component_chips
from .lifting import analyze_lifting
from .residuefields import ResidueFieldSpec, real_liftable
from .sextic import InvalidInputError
from .subdivision import NotSmoothError, is_smooth, regular_subdivision
from .tangency import (
    GammaNonGenericError,
    NonGenericInputError,
    NonRealizableShapeError,
    StarConstraintError,
    analyze,
    is_tritangent,
    locate_tangency_points,
)

EXIT_INVALID = 1
EXIT_NONGENERIC = 2
EXIT_INVARIANT = 3


def _load_input(path: str):
    with open(path) as fh:
        return jsonio.sextic_from_json(json.load(fh))


def _field_spec(text: str) -> ResidueFieldSpec:
    if text == "real":
        return ResidueFieldSpec.real()
    if text.startswith("fp:"):
        body = text[3:]
        if "^" in body:
            p, n = body.split("^")
            return ResidueFieldSpec.finite(int(p), int(n))
        return ResidueFieldSpec.finite(int(body))
    raise InvalidInputError(f"unknown field spec {text!r} (use real or fp:P^N)")


def _emit(args, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def cmd_tropicalize(args) -> int:
    f = _load_input(args.input)
    sub = regular_subdivision(f)
    payload = {"subdivision": jsonio.subdivision_to_json(sub)}
    if is_smooth(sub):
        gamma = dual_curve(f, sub)
        payload["curve"] = jsonio.curve_to_json(gamma)
        if args.svg:
            with open(args.svg, "w") as fh:
                from .render_svg import render_svg
                fh.write(render_svg(gamma))
    _emit(args, payload)
    return 0


def cmd_classify(args) -> int:
    f = _load_input(args.input)
    gamma = dual_curve(f)
    with open(args.tritangent) as fh:
        params = jsonio.params_from_json(json.load(fh))
    lam = lambda_curve(params)
    records = analyze(gamma, lam)
    sk = skeleton(gamma)
    for rec in records:
        locate_tangency_points(sk, lam, rec)
    _emit(args, {"tritangent": is_tritangent(gamma, lam),
                 "records": [jsonio.record_to_json(r) for r in records]})
    return 0


def cmd_tritangents(args) -> int:
    f = _load_input(args.input)
    gamma = dual_curve(f)
    members = enumerate_tritangents(f, gamma)
    _emit(args, {"count": len(members),
                 "members": [{"params": jsonio.params_to_json(m.params),
                              "types": [r.code for r in m.records],
                              "multiplicity": m.report.multiplicity}
                             for m in members]})
    return 0


def cmd_lift(args) -> int:
    f = _load_input(args.input)
    gamma = dual_curve(f)
    members = enumerate_tritangents(f, gamma)
    _emit(args, {"lifts": [{"params": jsonio.params_to_json(m.params),
                            **m.report.to_json()} for m in members]})
    return 0


def cmd_real(args) -> int:
    f = _load_input(args.input)
    spec = _field_spec(args.field)
    gamma = dual_curve(f)
    members = enumerate_tritangents(f, gamma)
    out = []
    for m in members:
        v = real_liftable(m.report, f, spec)
        out.append({"params": jsonio.params_to_json(m.params),
                    "multiplicity": m.report.multiplicity,
                    "verdict": v.to_json()})
    _emit(args, {"field": args.field, "verdicts": out})
    return 0


def cmd_classes(args) -> int:
    f = _load_input(args.input)
    spec = _field_spec(args.field)
    reports = classes_report(f)
    rows = []
    total_kbar = 0
    total_real = 0
    undetermined = False
    for rep in reports:
        verdicts = [real_liftable(m.report, f, spec) for m in rep.members]
        counts = sum(v.count for v in verdicts)
        statuses = sorted({v.status for v in verdicts})
        per_class = {"class": list(rep.theta_class),
                     "members": len(rep.members),
                     "multiplicity_sum": rep.total_multiplicity(),
                     "real_count": counts,
                     "statuses": statuses}
        if any(v.status == "needs-residues" for v in verdicts):
            per_class["real_count"] = None
            undetermined = True
        elif counts not in (0, 8):
            raise _InvariantViolation(
                f"class {rep.theta_class} has real count {counts}, not 0 or 8")
        else:
            total_real += counts
        total_kbar += rep.total_multiplicity()
        rows.append(per_class)
    payload = {"classes": rows, "total_multiplicity": total_kbar,
               "total_real": None if undetermined else total_real}
    _emit(args, payload)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("class,members,multiplicity_sum,real_count\n")
            for row in rows:
                fh.write(",".join([
                    "".join(map(str, row["class"])), str(row["members"]),
                    str(row["multiplicity_sum"]), str(row["real_count"]),
                ]) + "\n")
    return 0


class _InvariantViolation(RuntimeError):
    pass


def cmd_render(args) -> int:
    f = _load_input(args.input)
    gamma = dual_curve(f)
    members = enumerate_tritangents(f, gamma)
    sk = skeleton(gamma)
    thetas = theta_characteristics(sk.graph)
    labels = []
    points = []
    for m in members:
        cls = class_of(f, gamma, sk, thetas, m)
        labels.append("".join(map(str, cls)))
        for rec in m.records:
            points.extend(rec.tangency_points or [])
    from .render_svg import render_svg
    svg = render_svg(gamma, members, labels=labels, tangency_points=points)
    path = args.svg or args.out or "tritangents.svg"
    with open(path, "w") as fh:
        fh.write(svg)
    print(path)
    return 0


def cmd_verify(args) -> int:
    f = _load_input(args.input)
    sub = regular_subdivision(f)
    if not is_smooth(sub):
        raise NotSmoothError("input subdivision is not unimodular")
    gamma = dual_curve(f, sub)
    checks = {}
    # Bezout spot checks
    import random
    rng = random.Random(args.seed)
    from .curves import SLOPE_PLUS, TritangentParams
    for _ in range(25):
        v0 = (Fraction(rng.randint(-40, 40), 7), Fraction(rng.randint(-40, 40), 5))
        lam = lambda_curve(TritangentParams(SLOPE_PLUS, v0, Fraction(rng.randint(1, 9), 2)))
        if stable_intersection(gamma, lam).degree() != 6:
            raise _InvariantViolation("stable intersection degree differs from 6")
    checks["bezout_degree_6"] = "pass"
    sk = skeleton(gamma)
    thetas = theta_characteristics(sk.graph)
    checks["theta_characteristics_15"] = "pass" if len(thetas) == 15 else "fail"
    reports = classes_report(f, gamma)
    checks["class_sums_8"] = "pass"
    _emit(args, {"checks": checks})
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tritangents",
        description="Tropical tritangent (1,1)-curves to smooth (3,3)-curves")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tritangent=False):
        p.add_argument("--input", required=True, help="sextic JSON file")
        p.add_argument("--out", help="output JSON file (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--svg", help="SVG output path")
        if tritangent:
            p.add_argument("--tritangent", required=True,
                           help="JSON file with kind/v0/t of the (1,1)-curve")

    common(sub.add_parser("tropicalize", help="subdivision and dual curve"))
    common(sub.add_parser("classify", help="tangency records for a given curve"),
           tritangent=True)
    common(sub.add_parser("tritangents", help="enumerate liftable tritangents"))
    common(sub.add_parser("lift", help="lifting reports"))
    p_real = sub.add_parser("real", help="real/residue-field verdicts")
    common(p_real)
    p_real.add_argument("--field", default="real")
    p_classes = sub.add_parser("classes", help="15-class report")
    common(p_classes)
    p_classes.add_argument("--field", default="real")
    p_classes.add_argument("--csv", help="CSV summary path")
    common(sub.add_parser("render", help="SVG figure"))
    common(sub.add_parser("verify", help="run the invariant suite"))

    args = parser.parse_args(argv)
    handler = {
        "tropicalize": cmd_tropicalize,
        "classify": cmd_classify,
        "tritangents": cmd_tritangents,
        "lift": cmd_lift,
        "real": cmd_real,
        "classes": cmd_classes,
        "render": cmd_render,
        "verify": cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except (InvalidInputError, NotSmoothError, FileNotFoundError, KeyError,
            json.JSONDecodeError) as exc:
        return _fail(EXIT_INVALID, type(exc).__name__, str(exc))
    except (GammaNonGenericError, NonGenericInputError, NonRealizableShapeError,
            StarConstraintError, UnboundedComponentError) as exc:
        return _fail(EXIT_NONGENERIC, type(exc).__name__, str(exc))
    except (ClassSumError, _InvariantViolation) as exc:
        return _fail(EXIT_INVARIANT, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
