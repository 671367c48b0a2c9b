"""Dihedral symmetries of the bidegree square and their induced actions.

The group of order eight is generated by the swap ``t0`` and the rotation
``t1``.  On lattice exponents of a bidegree-(d,d) polynomial they act by

    t0: (i, j) -> (j, i)          t1: (i, j) -> (j, d - i)

on points of the tropical plane by

    t0: (X, Y) -> (Y, X)          t1: (X, Y) -> (Y, -X)

and on the coefficients (m, n, u) of a normalized (1,1)-polynomial
``y + m + n x + u x y`` by the monomial substitutions

    t0: (m, n, u) -> (m/n, 1/n, u/n)
    t1: (m, n, u) -> (n/m, u/m, 1/m).

Every element is stored as a reduced word in the generators; composition,
inverses and all actions are derived from the generator actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

Point = Tuple[Fraction, Fraction]

# Rotation matrix of t1 on the tropical plane, (X,Y) -> (Y,-X).
_T1_MAT = ((0, 1), (-1, 0))
_T0_MAT = ((0, 1), (1, 0))

# Action of the generators on exponent vectors of monomials in (m, n, u).
# Columns are the images of m, n, u; e.g. under t0, m -> m * n^-1.
_T0_PARAM = ((1, 0, 0), (-1, -1, -1), (0, 0, 1))   # rows: exponents of m, n, u
_T1_PARAM = ((-1, -1, -1), (1, 0, 0), (0, 1, 0))


def _mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


def _mat_vec(A, v):
    return tuple(sum(A[i][k] * v[k] for k in range(len(v))) for i in range(len(A)))


@dataclass(frozen=True)
class D4Element:
    """One of the eight symmetries, as a reduced word in ('t0','t1')."""

    word: Tuple[str, ...]

    @staticmethod
    def identity() -> "D4Element":
        return D4Element(())

    @staticmethod
    def t0() -> "D4Element":
        return D4Element(("t0",))

    @staticmethod
    def t1() -> "D4Element":
        return D4Element(("t1",))

    def __mul__(self, other: "D4Element") -> "D4Element":
        # (self * other) acts by applying other first, then self.
        return _canonical(self.word + other.word)

    def inverse(self) -> "D4Element":
        inv: Tuple[str, ...] = ()
        for g in reversed(self.word):
            if g == "t0":
                inv = inv + ("t0",)
            else:
                inv = inv + ("t1", "t1", "t1")
        return _canonical(inv)

    # -- actions -----------------------------------------------------------

    def on_exponent(self, ij: Tuple[int, int], degree: int) -> Tuple[int, int]:
        i, j = ij
        for g in reversed(self.word):
            if g == "t0":
                i, j = j, i
            else:
                i, j = j, degree - i
        return (i, j)

    def on_point(self, p: Point) -> Point:
        x, y = p
        for g in reversed(self.word):
            if g == "t0":
                x, y = y, x
            else:
                x, y = y, -x
        return (x, y)

    def on_direction(self, d: Tuple[int, int]) -> Tuple[int, int]:
        x, y = d
        for g in reversed(self.word):
            if g == "t0":
                x, y = y, x
            else:
                x, y = y, -x
        return (x, y)

    def plane_matrix(self):
        M = ((1, 0), (0, 1))
        for g in self.word:
            M = _mat_mul(_T0_MAT if g == "t0" else _T1_MAT, M)
        return M

    def param_matrix(self):
        """Matrix P with: monomial e in the transformed curve's parameters
        equals monomial P @ e in the original parameters."""
        M = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for g in reversed(self.word):
            M = _mat_mul(M, _T0_PARAM if g == "t0" else _T1_PARAM)
        return M

    def on_param_values(self, m, n, u):
        """Parameter values of the transformed curve, given the original ones."""
        for g in reversed(self.word):
            if g == "t0":
                m, n, u = m / n, 1 / n, u / n
            else:
                m, n, u = n / m, u / m, 1 / m
        return (m, n, u)

    def on_param_monomial(self, expo: Tuple[int, int, int]) -> Tuple[int, int, int]:
        """Exponents in (m,n,u) of the pullback of m'^a n'^b u'^c."""
        return _mat_vec(self.param_matrix(), expo)

    def on_classical_point(self, xy, field_one=1):
        """Image of a residue-field point under the monomial map.

        t0: (x, y) -> (y, x); t1: (x, y) -> (y, 1/x).  Entries must support
        division (Fraction or quadratic-field elements).
        """
        x, y = xy
        for g in reversed(self.word):
            if g == "t0":
                x, y = y, x
            else:
                x, y = y, field_one / x
        return (x, y)

    def __repr__(self) -> str:
        return "*".join(self.word) if self.word else "e"


def _canonical(word: Iterable[str]) -> D4Element:
    # Reduce a word to the normal form t0^a t1^b with a in {0,1}, b in {0..3},
    # using t1*t0 = t0*t1^3.
    a = 0
    b = 0
    for g in word:
        if g == "t0":
            # move the new t0 to the front: current is t0^a t1^b, appending g
            # on the right: t0^a t1^b t0 = t0^(a+1) t1^(-b)
            a ^= 1
            b = (-b) % 4
        else:
            b = (b + 1) % 4
    w: Tuple[str, ...] = ()
    if a:
        w = w + ("t0",)
    w = w + ("t1",) * b
    return D4Element(w)


def all_elements() -> Tuple[D4Element, ...]:
    out = []
    for a in (0, 1):
        for b in range(4):
            w: Tuple[str, ...] = (("t0",) if a else ()) + ("t1",) * b
            out.append(D4Element(w))
    return tuple(out)


IDENTITY = D4Element.identity()
T0 = D4Element.t0()
T1 = D4Element.t1()
