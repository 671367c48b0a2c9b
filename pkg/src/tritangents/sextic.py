"""Valued-coefficient input data for bidegree-(d,d) tropical polynomials.

A coefficient is a triple (valuation, sign, optional residue) standing for an
element of a real closed (or general) non-Archimedean field; only this data
enters the tropical and initial-form computations.  The main object is the
bidegree-(3,3) input whose tropicalization is the curve Gamma.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .d4 import D4Element


class InvalidInputError(ValueError):
    """Raised when coefficient data violates the input contract."""


@dataclass(frozen=True)
class CoefficientDatum:
    """One coefficient a_ij: lattice position, valuation, sign, optional residue."""

    i: int
    j: int
    val: Fraction
    sign: int = 1
    residue: Optional[Fraction] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInputError(f"sign must be +-1, got {self.sign}")
        if self.residue is not None:
            if self.residue == 0:
                raise InvalidInputError("residue must be nonzero")
            if (self.residue > 0) != (self.sign > 0):
                raise InvalidInputError(
                    f"residue sign disagrees with sign field at ({self.i},{self.j})"
                )


class PolyInput:
    """The 16 (or 4) coefficients of a bidegree-(d,d) polynomial, d=3 or 1."""

    def __init__(self, degree: int, coefficients):
        self.degree = degree
        table: Dict[Tuple[int, int], CoefficientDatum] = {}
        for c in coefficients:
            if not (0 <= c.i <= degree and 0 <= c.j <= degree):
                raise InvalidInputError(f"exponent ({c.i},{c.j}) outside the {degree}x{degree} square")
            if (c.i, c.j) in table:
                raise InvalidInputError(f"duplicate coefficient at ({c.i},{c.j})")
            table[(c.i, c.j)] = c
        for corner in ((0, 0), (degree, 0), (0, degree), (degree, degree)):
            if corner not in table:
                raise InvalidInputError(f"missing corner coefficient {corner}")
        self.table = table

    # -- access --------------------------------------------------------------

    def __contains__(self, ij) -> bool:
        return tuple(ij) in self.table

    def datum(self, i: int, j: int) -> CoefficientDatum:
        return self.table[(i, j)]

    def val(self, i: int, j: int) -> Fraction:
        return self.table[(i, j)].val

    def sign(self, i: int, j: int) -> int:
        return self.table[(i, j)].sign

    def residue(self, i: int, j: int) -> Optional[Fraction]:
        return self.table[(i, j)].residue

    def points(self):
        return sorted(self.table)

    def has_residues(self) -> bool:
        return all(c.residue is not None for c in self.table.values())

    def signs(self) -> Dict[Tuple[int, int], int]:
        return {ij: c.sign for ij, c in self.table.items()}

    # -- transforms ------------------------------------------------------------

    def d4_apply(self, g: D4Element) -> "PolyInput":
        out = []
        for (i, j), c in self.table.items():
            ni, nj = g.on_exponent((i, j), self.degree)
            out.append(CoefficientDatum(ni, nj, c.val, c.sign, c.residue))
        return PolyInput(self.degree, out)

    def with_signs(self, signs: Dict[Tuple[int, int], int]) -> "PolyInput":
        out = []
        for (i, j), c in self.table.items():
            s = signs.get((i, j), c.sign)
            res = c.residue
            if res is not None and (res > 0) != (s > 0):
                res = -res
            out.append(CoefficientDatum(i, j, c.val, s, res))
        return PolyInput(self.degree, out)

    def with_residues(self, residues: Dict[Tuple[int, int], Fraction]) -> "PolyInput":
        out = []
        for (i, j), c in self.table.items():
            r = Fraction(residues[(i, j)])
            out.append(CoefficientDatum(i, j, c.val, 1 if r > 0 else -1, r))
        return PolyInput(self.degree, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyInput) and self.degree == other.degree and self.table == other.table

    def __repr__(self) -> str:
        return f"PolyInput(degree={self.degree}, {len(self.table)} coefficients)"


class SexticInput(PolyInput):
    """Bidegree-(3,3) input; its tropicalization is the curve Gamma."""

    def __init__(self, coefficients):
        super().__init__(3, coefficients)


def sextic_from_heights(
    heights: Dict[Tuple[int, int], Fraction],
    signs: Optional[Dict[Tuple[int, int], int]] = None,
    residues: Optional[Dict[Tuple[int, int], Fraction]] = None,
) -> SexticInput:
    coeffs = []
    for (i, j), h in heights.items():
        s = 1 if signs is None else signs.get((i, j), 1)
        r = None if residues is None else residues.get((i, j))
        if r is not None:
            s = 1 if r > 0 else -1
        coeffs.append(CoefficientDatum(i, j, Fraction(h), s, r))
    return SexticInput(coeffs)


def honeycomb_heights() -> Dict[Tuple[int, int], Fraction]:
    """Heights inducing the honeycomb triangulation of the 3x3 square.

    The quadratic form i^2 + ij + j^2 is Delaunay for the triangular lattice,
    so its restriction to the grid induces the subdivision into the triangles
    {(i,j),(i+1,j),(i,j+1)} and {(i+1,j),(i,j+1),(i+1,j+1)}.
    """
    return {(i, j): Fraction(i * i + i * j + j * j) for i in range(4) for j in range(4)}


def honeycomb_sextic(signs=None, residues=None, generic: bool = False) -> SexticInput:
    """Input in honeycomb form; with generic=True the heights are perturbed
    inside the secondary cone so edge lengths of the curve become generic."""
    heights = honeycomb_heights()
    if generic:
        for (i, j), eps in _HONEYCOMB_PERTURBATION.items():
            heights[(i, j)] = heights[(i, j)] + eps
    return sextic_from_heights(heights, signs=signs, residues=residues)


# Small deterministic perturbation staying inside the honeycomb secondary
# cone; chosen so that skeleton edge lengths avoid ties (checked in tests).
_HONEYCOMB_PERTURBATION = {
    (i, j): Fraction(k, 997)
    for (i, j), k in {
        (0, 0): 5, (1, 0): -11, (2, 0): 23, (3, 0): -7,
        (0, 1): 17, (1, 1): -7, (2, 1): 41, (3, 1): 13,
        (0, 2): -19, (1, 2): 29, (2, 2): 2, (3, 2): -31,
        (0, 3): 37, (1, 3): -13, (2, 3): 7, (3, 3): 43,
    }.items()
}


def example120_signs() -> Dict[Tuple[int, int], int]:
    """Sign assignment of the totally-real honeycomb example: a00, a20, a02,
    a22 positive, all other coefficients negative."""
    pos = {(0, 0), (2, 0), (0, 2), (2, 2)}
    return {(i, j): (1 if (i, j) in pos else -1) for i in range(4) for j in range(4)}


def random_smooth_sextic(seed: int, max_tries: int = 400) -> SexticInput:
    """A random sextic input with smooth tropicalization.

    Heights are a random positive-definite quadratic form plus small rational
    noise; the form guarantees a coherent triangulation nearby, the noise
    varies the combinatorial type.  Retries until the induced subdivision is
    unimodular.
    """
    from .subdivision import regular_subdivision, is_smooth

    rng = random.Random(seed)
    for _ in range(max_tries):
        a = rng.randint(1, 3)
        c = rng.randint(1, 3)
        b = rng.randint(-min(a, c), min(a, c))  # |b| <= min keeps 4ac-b^2 > 0
        den = rng.choice([4, 5, 6, 7, 8])
        amp = rng.choice([1, 2, 3])
        heights = {}
        for i in range(4):
            for j in range(4):
                noise = Fraction(rng.randint(-amp * den, amp * den), den)
                heights[(i, j)] = Fraction(a * i * i + b * i * j + c * j * j) + noise
        f = sextic_from_heights(heights, signs={ij: rng.choice([1, -1]) for ij in heights})
        if is_smooth(regular_subdivision(f)):
            return f
    raise RuntimeError(f"no smooth sextic found from seed {seed}")
