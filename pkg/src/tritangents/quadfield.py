"""Exact arithmetic in multi-quadratic extensions of Q, and Puiseux jets.

``QuadNum`` represents elements of Q(sqrt(d1), ..., sqrt(dk)) as coefficient
dictionaries over the 2^k square-root basis; the radicands are fixed per
value and assumed multiplicatively independent (no simplification across
roots is attempted).  ``Jet`` is a truncated Puiseux series used to certify
initial-form formulas of modified coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

F0 = Fraction(0)
F1 = Fraction(1)


class QuadNum:
    """Element of Q(sqrt(d_1),...,sqrt(d_k)); coeffs keyed by bitmask."""

    __slots__ = ("rads", "coeffs")

    def __init__(self, rads: Tuple[Fraction, ...], coeffs: Dict[int, Fraction]):
        self.rads = rads
        self.coeffs = {m: c for m, c in coeffs.items() if c != 0}

    @staticmethod
    def of(x, rads: Tuple[Fraction, ...] = ()) -> "QuadNum":
        return QuadNum(rads, {0: Fraction(x)})

    @staticmethod
    def root(index: int, rads: Tuple[Fraction, ...]) -> "QuadNum":
        return QuadNum(rads, {1 << index: F1})

    def _lift(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other.rads == self.rads:
                return other
            if not other.coeffs or set(other.coeffs) == {0}:
                return QuadNum(self.rads, dict(other.coeffs))
            raise ValueError("mixing incompatible radicand sets")
        return QuadNum.of(other, self.rads)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.coeffs)
        for m, c in o.coeffs.items():
            out[m] = out.get(m, F0) + c
        return QuadNum(self.rads, out)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(self.rads, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        out: Dict[int, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in o.coeffs.items():
                m = m1 ^ m2
                c = c1 * c2
                common = m1 & m2
                k = 0
                while common:
                    if common & 1:
                        c *= self.rads[k]
                    common >>= 1
                    k += 1
                out[m] = out.get(m, F0) + c
        return QuadNum(self.rads, out)

    __rmul__ = __mul__

    def inverse(self) -> "QuadNum":
        if not self.coeffs:
            raise ZeroDivisionError("QuadNum inverse of zero")
        # peel roots one at a time: x = a + b*sqrt(d_last)
        x = self
        num = QuadNum.of(1, self.rads)
        for k in reversed(range(len(self.rads))):
            bit = 1 << k
            if not any(m & bit for m in x.coeffs):
                continue
            # conjugate of x w.r.t. root k: negate every sqrt(d_k) component
            conj = QuadNum(self.rads, {m: (-c if m & bit else c)
                                       for m, c in x.coeffs.items()})
            num = num * conj
            x = x * conj  # no sqrt(d_k) component remains
        # x is now rational
        assert set(x.coeffs) <= {0}
        r = x.coeffs.get(0, F0)
        if r == 0:
            raise ZeroDivisionError("QuadNum inverse of zero divisor (degenerate radicands)")
        return num * QuadNum.of(Fraction(1, 1) / r, self.rads)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadNum.of(1, self.rads)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def rational_part(self) -> Fraction:
        return self.coeffs.get(0, F0)

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {0}

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ValueError:
            return False
        return (self - o).is_zero()

    def __repr__(self):
        return f"QuadNum({self.coeffs} over sqrt{self.rads})"


# ---------------------------------------------------------------------------
# Puiseux jets
# ---------------------------------------------------------------------------


class Jet:
    """Truncated Puiseux series sum c_w t^w, exact coefficients, order bound.

    Terms with exponent >= order are unknown.  Addition intersects orders;
    multiplication propagates them through valuations.
    """

    __slots__ = ("terms", "order")

    def __init__(self, terms: Dict[Fraction, object], order) -> None:
        self.order = order
        out = {}
        for w, c in terms.items():
            if isinstance(c, (int, Fraction)):
                c = Fraction(c)
                if c == 0:
                    continue
            elif hasattr(c, "is_zero") and c.is_zero():
                continue
            w = Fraction(w)
            if order is None or w < order:
                out[w] = c
        self.terms = out

    @staticmethod
    def of(c, w=F0, order=None) -> "Jet":
        return Jet({Fraction(w): c}, order)

    @staticmethod
    def zero(order=None) -> "Jet":
        return Jet({}, order)

    def val(self) -> Optional[Fraction]:
        """Valuation, or None when zero to the known order."""
        return min(self.terms) if self.terms else None

    def initial(self):
        v = self.val()
        if v is None:
            raise ValueError("jet is zero to its known order")
        return self.terms[v]

    def _min_order(self, other: "Jet"):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = Jet.of(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, F0) + c
        return Jet(out, self._min_order(other))

    __radd__ = __add__

    def __neg__(self):
        return Jet({w: -c for w, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            other = Jet.of(other)
        return self + (-other)

    def __rsub__(self, other):
        return Jet.of(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = Jet.of(other)
        # order of the product: min over (order1 + val2, order2 + val1)
        v1 = self.val()
        v2 = other.val()
        cand = []
        if self.order is not None:
            cand.append(self.order + (v2 if v2 is not None else (other.order if other.order is not None else F0)))
        if other.order is not None:
            cand.append(other.order + (v1 if v1 is not None else (self.order if self.order is not None else F0)))
        order = min(cand) if cand else None
        out: Dict[Fraction, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                if order is not None and w >= order:
                    continue
                out[w] = out.get(w, F0) + c1 * c2
        return Jet(out, order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        assert k >= 0
        out = Jet.of(1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "Jet":
        v = self.val()
        if v is None:
            raise ZeroDivisionError("jet inverse of (truncated) zero")
        c0 = self.terms[v]
        # write self = c0 t^v (1 + r); invert the unit by geometric series
        rel_order = None if self.order is None else self.order - v
        r = Jet({w - v: c / c0 for w, c in self.terms.items() if w != v}, rel_order)
        inv_unit = Jet.of(1, order=rel_order)
        power = Jet.of(1, order=rel_order)
        if r.terms:
            rv = r.val()
            n = 1
            while rel_order is None or n * rv < rel_order:
                power = power * (-r)
                inv_unit = inv_unit + power
                n += 1
                if rel_order is None and n > 40:
                    raise RuntimeError("refusing to invert an untruncated non-monomial jet")
        return Jet({w - v: c / c0 for w, c in inv_unit.terms.items()},
                   None if rel_order is None else rel_order - v)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = Jet.of(other)
        return self * other.inverse()

    def __repr__(self):
        parts = [f"{c}*t^{w}" for w, c in sorted(self.terms.items())]
        return " + ".join(parts) + (f" + O(t^{self.order})" if self.order is not None else "")
