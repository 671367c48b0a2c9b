"""Square classes over residue fields and real-liftability verdicts.

Over the reals the square class of a signed coefficient monomial is a sign
computation; over F_{p^n} it is the Euler criterion on residue values.  The
signs of the solved parameters (m, n, u) come from the multiplicative system
contributed by the pinned constraints; rules that need them are evaluated
after that Z/2-linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exprs import Expr, NeedsResiduesError
from .lifting import LiftReport

SQUARE = "square"
NONSQUARE = "nonsquare"


@dataclass(frozen=True)
class ResidueFieldSpec:
    kind: str                  # 'real' | 'finite'
    p: Optional[int] = None
    n: int = 1

    def __post_init__(self):
        if self.kind == "finite":
            if self.p is None or self.p in (2, 3) or not _is_prime(self.p):
                raise ValueError("finite residue fields must have odd prime p not in {2, 3}")

    def order(self) -> int:
        return self.p ** self.n

    @staticmethod
    def real() -> "ResidueFieldSpec":
        return ResidueFieldSpec("real")

    @staticmethod
    def finite(p: int, n: int = 1) -> "ResidueFieldSpec":
        return ResidueFieldSpec("finite", p, n)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def square_class(x, spec: ResidueFieldSpec) -> str:
    """Square class of a nonzero residue value (Fraction or int mod p)."""
    if spec.kind == "real":
        x = Fraction(x)
        if x == 0:
            raise ValueError("square class of zero")
        return SQUARE if x > 0 else NONSQUARE
    q = spec.order()
    v = _to_field(x, spec)
    if v == 0:
        raise ValueError("square class of zero")
    e = pow(v, (q - 1) // 2, spec.p) if spec.n == 1 else _euler_ext(v, spec)
    return SQUARE if e == 1 else NONSQUARE


def _to_field(x, spec: ResidueFieldSpec) -> int:
    if isinstance(x, Fraction):
        num = x.numerator % spec.p
        den = x.denominator % spec.p
        return (num * pow(den, spec.p - 2, spec.p)) % spec.p
    return x % spec.p


def _euler_ext(v, spec):
    # F_{p^n} with n > 1: only needed through the quadratic character of
    # F_p-values, for which the norm map gives chi(v)^((q-1)/(p-1)) ... we
    # restrict inputs to prime fields embedded diagonally
    q = spec.order()
    e = pow(v, (q - 1) // 2, spec.p)
    return e


def has_sqrt(c: int, spec: ResidueFieldSpec) -> bool:
    if spec.kind == "real":
        return c > 0
    return square_class(c, spec) == SQUARE


class SignSolveError(ValueError):
    pass


class SignSystem:
    """Reduced multiplicative sign system over (m, n, u) modulo squares."""

    def __init__(self, relations: Sequence[Tuple[Tuple[int, int, int], int]]):
        rows = []
        for mono, sg in relations:
            vec = [mono[0] % 2, mono[1] % 2, mono[2] % 2, 0 if sg > 0 else 1]
            rows.append(vec)
        r = 0
        pivots = {}
        for c in range(3):
            piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
            pivots[c] = r
            r += 1
        for row in rows[r:]:
            if row[3] and not any(row[:3]):
                raise SignSolveError("inconsistent multiplicative sign system")
        self.rows = rows[:r]
        self.pivots = pivots

    def query(self, mono: Tuple[int, int, int]) -> Optional[int]:
        """Sign of m^a n^b u^c if determined by the system, else None."""
        q = [mono[0] % 2, mono[1] % 2, mono[2] % 2, 0]
        for c, rr in self.pivots.items():
            if q[c]:
                q = [(a + b) % 2 for a, b in zip(q, self.rows[rr])]
        if any(q[:3]):
            return None
        return 1 if q[3] == 0 else -1

    def solved_signs(self) -> Dict[str, int]:
        out = {}
        for name, mono in (("m", (1, 0, 0)), ("n", (0, 1, 0)), ("u", (0, 0, 1))):
            sg = self.query(mono)
            if sg is not None:
                out[name] = sg
        return out


def sign_solve(relations: Sequence[Tuple[Tuple[int, int, int], int]]) -> Dict[str, int]:
    """Signs of m, n, u determined by the multiplicative system."""
    return SignSystem(relations).solved_signs()


# ---------------------------------------------------------------------------
# real-liftability verdicts
# ---------------------------------------------------------------------------


@dataclass
class RealVerdict:
    status: str                  # 'real' | 'not-real' | 'needs-residues'
    count: int = 0
    totally: Optional[bool] = None
    failing: Optional[str] = None

    def to_json(self):
        return {"status": self.status, "count": self.count,
                "totally_real": self.totally, "failing": self.failing}


def _eval_sign(e: Expr, coeff_signs, param_signs) -> int:
    return e.sign(coeff_signs, param_signs)


def _eval_numeric(e: Expr, coeff_residues, param_values) -> Fraction:
    return e.eval(coeff_residues, param_values)


def real_liftable(report: LiftReport, f, spec: ResidueFieldSpec) -> RealVerdict:
    """Verdict for one tritangent: does the lift exist over the field?

    Sign mode uses the coefficient signs; numeric radicands need residues.
    Exceptional tangency-point roots only affect total rationality.
    """
    if report.multiplicity == 0:
        return RealVerdict("not-real", 0, failing="multiplicity zero")

    signs = {ij: f.sign(*ij) for ij in f.points()}
    # solve parameter signs from the pinned constraints
    relations = []
    for s in report.summaries:
        for mono, val in s.sign_relations:
            if val is None:
                continue
            try:
                sv = val.sign(signs, {})
            except NeedsResiduesError:
                continue
            if spec.kind == "finite":
                sv = _finite_sign(val, f, spec)
                if sv is None:
                    continue
            relations.append((mono, sv))
    try:
        system = SignSystem(relations)
        param_signs = system.solved_signs()
    except SignSolveError:
        return RealVerdict("not-real", 0, failing="inconsistent sign system")

    for rad in report.discriminants:
        if rad is None:
            continue
        sgn = _radicand_sign(rad, signs, system, f, spec)
        if sgn is None:
            return RealVerdict("needs-residues", 0, failing=str(rad))
        if spec.kind == "real":
            ok = sgn > 0
        else:
            val = _finite_value_cls(rad, f, spec, system)
            if val is None:
                return RealVerdict("needs-residues", 0, failing=str(rad))
            ok = square_class(val, spec) == SQUARE
        if not ok:
            return RealVerdict("not-real", 0, failing=str(rad))

    for rad in report.numeric_discriminants:
        val = _numeric_radicand(rad, f, report, spec)
        if val is None:
            return RealVerdict("needs-residues", 0, failing=str(rad))
        if spec.kind == "real":
            ok = val > 0
        else:
            ok = square_class(val, spec) == SQUARE
        if not ok:
            return RealVerdict("not-real", 0, failing=str(rad))

    totally = True
    failing = None
    for exc in report.exceptional:
        if spec.kind == "real":
            continue   # sqrt2, sqrt3, Delta >= 0 all available over R
        if exc == "sqrt2" and not has_sqrt(2, spec):
            totally, failing = False, "sqrt2"
        elif exc == "sqrt3" and not has_sqrt(3, spec):
            totally, failing = False, "sqrt3"
        elif exc == "Delta":
            dexpr = next((s.anchors.get("Delta") for s in report.summaries
                          if s.anchors.get("Delta") is not None), None)
            dval = _numeric_radicand(dexpr, f, report, spec) if dexpr is not None else None
            if dval is None:
                totally = None
            elif square_class(dval, spec) == NONSQUARE:
                totally, failing = False, "Delta"
    return RealVerdict("real", report.multiplicity, totally=totally, failing=failing)


def _radicand_sign(rad: Expr, coeff_signs, system: "SignSystem", f, spec) -> Optional[int]:
    parts = rad.monomial_parts()
    if parts is None:
        return None
    rat, coeffs, params = parts
    s = 1 if rat > 0 else -1
    for (i, j), k in coeffs.items():
        if k % 2:
            s *= coeff_signs[(i, j)]
    mono = [0, 0, 0]
    for name, k in params.items():
        mono["mnu".index(name)] = k
    if any(k % 2 for k in mono):
        q = system.query(tuple(mono))
        if q is None:
            return None
        s *= q
    return s


def _finite_value_cls(rad: Expr, f, spec, system: "SignSystem"):
    parts = rad.monomial_parts()
    if parts is None or not f.has_residues():
        return None
    rat, coeffs, params = parts
    p = spec.p
    out = _to_field_frac(rat, p)
    for (i, j), k in coeffs.items():
        b = _to_field_frac(f.residue(i, j), p)
        if k < 0:
            b = pow(b, p - 2, p)
            k = -k
        out = out * pow(b, k, p) % p
    mono = [0, 0, 0]
    for name, k in params.items():
        mono["mnu".index(name)] = k
    if any(k % 2 for k in mono):
        q = system.query(tuple(k % 2 for k in mono))
        if q is None:
            return None
        if q < 0:
            out = out * _a_nonsquare(spec) % p
    return out % p


def _finite_sign(val: Expr, f, spec) -> Optional[int]:
    v = _finite_value(val, f, spec, {})
    if v is None:
        return None
    return 1 if square_class(v, spec) == SQUARE else -1


def _finite_value(e: Expr, f, spec, param_signs):
    """Square-class representative of a monomial expression mod p.

    Coefficients evaluate to their residues; an odd parameter power is
    replaced by a fixed nonsquare when its class is nontrivial, which
    preserves the square class (the only thing callers use).
    """
    if not f.has_residues():
        return None
    parts = e.monomial_parts()
    if parts is None:
        return None
    rat, coeffs, params = parts
    p = spec.p
    out = _to_field_frac(rat, p)
    for (i, j), k in coeffs.items():
        b = _to_field_frac(f.residue(i, j), p)
        if k < 0:
            b = pow(b, p - 2, p)
            k = -k
        out = out * pow(b, k, p) % p
    for name, k in params.items():
        if k % 2 == 0:
            continue
        s = param_signs.get(name)
        if s is None:
            return None
        if s < 0:
            out = out * _a_nonsquare(spec) % p
    return out % p


def _to_field_frac(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return (x.numerator % p) * pow(x.denominator % p, p - 2, p) % p


def _a_nonsquare(spec: ResidueFieldSpec) -> int:
    for c in range(2, spec.p):
        if square_class(c, spec) == NONSQUARE:
            return c
    raise RuntimeError("no nonsquare found")


def _numeric_radicand(rad: Expr, f, report: LiftReport, spec) -> Optional[Fraction]:
    if not f.has_residues():
        return None
    params = solve_parameters(report, f)
    if params is None:
        return None
    coeffs = {ij: f.residue(*ij) for ij in f.points()}
    try:
        val = rad.eval(coeffs, params)
    except KeyError:
        return None
    return val


def solve_parameters(report: LiftReport, f) -> Optional[Dict[str, Fraction]]:
    """Numeric initial forms of (m, n, u) from the pinned constraint values."""
    if not f.has_residues():
        return None
    coeffs = {ij: f.residue(*ij) for ij in f.points()}
    pinned = []
    for c in report.constraints:
        if c.value is None:
            continue
        try:
            v = c.value.eval(coeffs, {})
        except KeyError:
            continue
        pinned.append((c.monomial, Fraction(v)))
    import itertools as it
    for trio in it.combinations(pinned, 3):
        M = [list(t[0]) for t in trio]
        det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
               - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
               + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
        if det in (1, -1):
            # x^M = v: solve exponents by the inverse integer matrix
            vals = [t[1] for t in trio]
            inv = _int_inverse(M, det)
            out = {}
            for row, name in zip(inv, "mnu"):
                acc = Fraction(1)
                for v, k in zip(vals, row):
                    acc *= v ** k
                out[name] = acc
            return out
    return None


def _int_inverse(M, det):
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [[M[r][c] for c in range(3) if c != j] for r in range(3) if r != i]
            cof = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            adj[j][i] = ((-1) ** (i + j)) * cof
    return [[adj[i][j] * det for j in range(3)] for i in range(3)]
