"""Square classes, sign solving, verdict invariances."""

import random
from fractions import Fraction

import pytest

from tritangents.exprs import Expr
from tritangents.residuefields import (
    NONSQUARE,
    SQUARE,
    ResidueFieldSpec,
    SignSolveError,
    SignSystem,
    sign_solve,
    square_class,
)

F = Fraction


class TestSquareClass:
    def test_real(self):
        spec = ResidueFieldSpec.real()
        assert square_class(F(4), spec) == SQUARE
        assert square_class(F(-1, 3), spec) == NONSQUARE
        with pytest.raises(ValueError):
            square_class(F(0), spec)

    def test_f7(self):
        spec = ResidueFieldSpec.finite(7)
        # brute-force squares mod 7: {1, 2, 4}
        squares = {(x * x) % 7 for x in range(1, 7)}
        assert squares == {1, 2, 4}
        assert square_class(-1, spec) == NONSQUARE
        assert square_class(2, spec) == SQUARE
        assert square_class(3, spec) == NONSQUARE

    def test_multiplicative(self):
        rng = random.Random(3)
        spec = ResidueFieldSpec.finite(11)
        for _ in range(60):
            x = rng.randint(1, 10)
            y = rng.randint(1, 10)
            cx, cy = square_class(x, spec), square_class(y, spec)
            cxy = square_class(x * y, spec)
            assert (cxy == SQUARE) == ((cx == SQUARE) == (cy == SQUARE))

    def test_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            ResidueFieldSpec.finite(2)
        with pytest.raises(ValueError):
            ResidueFieldSpec.finite(9)


class TestSignSolve:
    def test_spec_example_direct(self):
        # {n/u = +, u = -, m = +} -> (m, n, u) = (+, -, -)
        signs = sign_solve([((0, 1, -1), 1), ((0, 0, 1), -1), ((1, 0, 0), 1)])
        assert signs == {"m": 1, "n": -1, "u": -1}

    def test_example64_class13(self):
        # n/u > 0, u < 0 => n < 0
        system = SignSystem([((0, 1, -1), 1), ((0, 0, 1), -1)])
        assert system.query((0, 1, 0)) == -1
        assert system.query((1, 0, 0)) is None

    def test_composite(self):
        # {m/n = +, n = +} => m > 0
        signs = sign_solve([((1, -1, 0), 1), ((0, 1, 0), 1)])
        assert signs["m"] == 1

    def test_inconsistent(self):
        with pytest.raises(SignSolveError):
            SignSystem([((1, 0, 0), 1), ((1, 0, 0), -1)])

    def test_query_combination_underdetermined_parts(self):
        system = SignSystem([((1, 0, 1), -1)])
        assert system.query((1, 0, 1)) == -1
        assert system.query((1, 0, 0)) is None
        # even powers are always determined
        assert system.query((2, 0, 0)) == 1


class TestScalingInvariance:
    def test_square_scaling_preserves_verdict(self):
        """Scaling every residue by a common positive square changes nothing."""
        from tritangents.sextic import honeycomb_sextic, example120_signs
        from tritangents.enumerator import enumerate_tritangents
        from tritangents.residuefields import real_liftable
        from tritangents.curves import dual_curve
        import random as _r
        rng = _r.Random(5)
        signs = example120_signs()
        res1 = {(i, j): F(rng.randint(1, 30), rng.randint(1, 9)) * signs[(i, j)]
                for i in range(4) for j in range(4)}
        scale = F(9, 4)   # a positive square
        res2 = {k: v * scale for k, v in res1.items()}
        f1 = honeycomb_sextic(residues=res1, generic=True)
        f2 = honeycomb_sextic(residues=res2, generic=True)
        g = dual_curve(f1)
        spec = ResidueFieldSpec.real()
        members = enumerate_tritangents(f1, g)[:6]
        for m in members:
            v1 = real_liftable(m.report, f1, spec)
            v2 = real_liftable(m.report, f2, spec)
            assert v1.status == v2.status
