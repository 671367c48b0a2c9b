"""Residue-field expressions: signed monomials and small expression trees.

A ``ResidueExpr`` stands for an element of the residue field built from the
initial forms of the sextic coefficients and of the parameters (m, n, u) or
their solved companions.  Sign evaluation works for (Laurent) monomials
only; numeric evaluation works for any tree once residues are supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple


class NeedsResiduesError(ValueError):
    """The requested evaluation needs numeric residues, not just signs."""


@dataclass(frozen=True)
class Expr:
    op: str                   # 'coeff' | 'param' | 'rat' | 'add' | 'mul' | 'pow'
    payload: Tuple = ()

    # -- constructors --------------------------------------------------------

    @staticmethod
    def coeff(i: int, j: int) -> "Expr":
        return Expr("coeff", (i, j))

    @staticmethod
    def param(name: str) -> "Expr":
        return Expr("param", (name,))

    @staticmethod
    def rat(q) -> "Expr":
        return Expr("rat", (Fraction(q),))

    def __add__(self, other):
        return Expr("add", (self, _as_expr(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Expr("add", (self, Expr("mul", (Expr.rat(-1), _as_expr(other)))))

    def __rsub__(self, other):
        return Expr("add", (_as_expr(other), Expr("mul", (Expr.rat(-1), self))))

    def __mul__(self, other):
        return Expr("mul", (self, _as_expr(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Expr("mul", (self, Expr("pow", (_as_expr(other), -1))))

    def __rtruediv__(self, other):
        return Expr("mul", (_as_expr(other), Expr("pow", (self, -1))))

    def __neg__(self):
        return Expr("mul", (Expr.rat(-1), self))

    def __pow__(self, k: int):
        return Expr("pow", (self, int(k)))

    # -- structure -----------------------------------------------------------

    def monomial_parts(self):
        """(rational factor, coeff exponents, param exponents) or None."""
        rat = Fraction(1)
        coeffs: Dict[Tuple[int, int], int] = {}
        params: Dict[str, int] = {}

        def walk(e: "Expr", k: int):
            nonlocal rat
            if e.op == "rat":
                q = e.payload[0]
                if q == 0:
                    raise ZeroDivisionError("zero in a monomial")
                rat *= q ** k
            elif e.op == "coeff":
                key = e.payload
                coeffs[key] = coeffs.get(key, 0) + k
            elif e.op == "param":
                params[e.payload[0]] = params.get(e.payload[0], 0) + k
            elif e.op == "mul":
                walk(e.payload[0], k)
                walk(e.payload[1], k)
            elif e.op == "pow":
                walk(e.payload[0], k * e.payload[1])
            else:
                raise _NotMonomial()

        try:
            walk(self, 1)
        except _NotMonomial:
            return None
        return (rat, {k: v for k, v in coeffs.items() if v},
                {k: v for k, v in params.items() if v})

    def is_monomial(self) -> bool:
        return self.monomial_parts() is not None

    # -- evaluation -----------------------------------------------------------

    def eval(self, coeff_values: Dict[Tuple[int, int], object],
             param_values: Dict[str, object], one=Fraction(1)):
        if self.op == "rat":
            return one * self.payload[0]
        if self.op == "coeff":
            return one * coeff_values[self.payload]
        if self.op == "param":
            return one * param_values[self.payload[0]]
        if self.op == "add":
            return (self.payload[0].eval(coeff_values, param_values, one)
                    + self.payload[1].eval(coeff_values, param_values, one))
        if self.op == "mul":
            return (self.payload[0].eval(coeff_values, param_values, one)
                    * self.payload[1].eval(coeff_values, param_values, one))
        if self.op == "pow":
            base = self.payload[0].eval(coeff_values, param_values, one)
            k = self.payload[1]
            if k >= 0:
                return base ** k
            return (one * 1) / (base ** (-k))
        raise ValueError(self.op)

    def sign(self, coeff_signs: Dict[Tuple[int, int], int],
             param_signs: Dict[str, int]) -> int:
        """Sign of a monomial under a real sign assignment."""
        parts = self.monomial_parts()
        if parts is None:
            raise NeedsResiduesError("sign of a non-monomial expression")
        rat, coeffs, params = parts
        s = 1 if rat > 0 else -1
        for (i, j), k in coeffs.items():
            if k % 2:
                s *= coeff_signs[(i, j)]
        for name, k in params.items():
            if k % 2:
                if name not in param_signs:
                    raise NeedsResiduesError(f"sign of parameter {name} undetermined")
                s *= param_signs[name]
        return s

    def __repr__(self) -> str:
        return expr_str(self)


class _NotMonomial(Exception):
    pass


def _as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Expr.rat(x)


def expr_str(e: Expr) -> str:
    if e.op == "rat":
        return str(e.payload[0])
    if e.op == "coeff":
        return f"a[{e.payload[0]}][{e.payload[1]}]"
    if e.op == "param":
        return e.payload[0]
    if e.op == "add":
        return f"({expr_str(e.payload[0])} + {expr_str(e.payload[1])})"
    if e.op == "mul":
        return f"{expr_str(e.payload[0])}*{expr_str(e.payload[1])}"
    if e.op == "pow":
        return f"{expr_str(e.payload[0])}^{e.payload[1]}"
    return "?"


def square_free(e: Expr) -> Optional[Expr]:
    """Monomial radicands reduced mod squares (exponents mod 2, sign kept)."""
    parts = e.monomial_parts()
    if parts is None:
        return None
    rat, coeffs, params = parts
    out: Expr = Expr.rat(1 if rat > 0 else -1)
    for (i, j), k in sorted(coeffs.items()):
        if k % 2:
            out = out * Expr.coeff(i, j)
    for name, k in sorted(params.items()):
        if k % 2:
            out = out * Expr.param(name)
    return out
