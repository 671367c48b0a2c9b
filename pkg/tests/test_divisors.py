"""Metric-graph divisor theory tests."""

import random
from fractions import Fraction

import pytest

from tritangents.curves import dual_curve
from tritangents.divisors import (
    DegreeMismatchError,
    GraphDivisor,
    MetricGraph,
    canonical_divisor,
    class_of_divisor,
    linearly_equivalent,
    reduce_divisor,
    skeleton,
    theta_characteristics,
)
from tritangents.sextic import honeycomb_sextic, random_smooth_sextic

F = Fraction


def circle(length=F(1)) -> MetricGraph:
    # one vertex, a loop is not allowed by the refinement; use two arcs
    return MetricGraph(2, [(0, 1, length / 2), (0, 1, length / 2)])


def theta_wedge() -> MetricGraph:
    return MetricGraph(2, [(0, 1, F(1)), (0, 1, F(2)), (0, 1, F(3))])


def banana5() -> MetricGraph:
    """Two vertices joined by five edges: genus 4."""
    return MetricGraph(2, [(0, 1, F(k)) for k in range(1, 6)])


class TestEquivalence:
    def test_self_equivalent(self):
        G = theta_wedge()
        D = GraphDivisor(G, [((0, F(1, 2)), 2)])
        eq, phi = linearly_equivalent(G, D, D)
        assert eq
        assert phi.divisor().degree() == 0
        assert phi.divisor().chips == {}

    def test_circle_two_points_not_equivalent(self):
        G = circle(F(1))
        D1 = GraphDivisor(G, [(G.vertex_location(0), 1)])
        D2 = GraphDivisor(G, [((0, F(1, 4)), 1)])
        eq, _ = linearly_equivalent(G, D1, D2)
        assert not eq

    def test_circle_degree_two_jacobian(self):
        # on a circle D ~ D' iff the position sums agree on R/LZ: here
        # v0 + v1 ~ 2*(midpoint of arc 0), both summing to 1 mod 2
        G = circle(F(2))  # two arcs of length 1: vertices 0,1 antipodal
        P = GraphDivisor(G, [(G.vertex_location(0), 1), (G.vertex_location(1), 1)])
        Q = GraphDivisor(G, [((0, F(1, 2)), 2)])
        eq, phi = linearly_equivalent(G, P, Q)
        assert eq
        assert phi is not None
        assert phi.divisor() == P.minus(Q)
        # the two antipodal midpoints sum to 0 mod 2 instead: not equivalent
        R = GraphDivisor(G, [((0, F(1, 2)), 1), ((1, F(1, 2)), 1)])
        assert not linearly_equivalent(G, P, R, want_witness=False)[0]

    def test_degree_mismatch(self):
        G = theta_wedge()
        D1 = GraphDivisor(G, [(G.vertex_location(0), 1)])
        D2 = GraphDivisor(G, [(G.vertex_location(0), 2)])
        with pytest.raises(DegreeMismatchError):
            linearly_equivalent(G, D1, D2)

    def test_witness_divisor_matches(self):
        rng = random.Random(11)
        G = banana5()
        for _ in range(20):
            # random pair: D1 random, D2 = D1 + div(random fire) is always
            # equivalent; also test random D2 of equal degree
            D1 = GraphDivisor(G)
            D2 = GraphDivisor(G)
            for _ in range(3):
                e = rng.randrange(5)
                off = F(rng.randint(1, 3), 4) * G.edges[e][2]
                D1.add((e, off), 1)
                e2 = rng.randrange(5)
                off2 = F(rng.randint(1, 3), 4) * G.edges[e2][2]
                D2.add((e2, off2), 1)
            eq, phi = linearly_equivalent(G, D1, D2)
            if eq:
                assert phi.divisor() == D1.minus(D2)

    def test_equivalence_is_transitive_on_fuzz(self):
        rng = random.Random(5)
        G = theta_wedge()
        divs = []
        for _ in range(6):
            D = GraphDivisor(G)
            for _ in range(2):
                e = rng.randrange(3)
                off = F(rng.randint(1, 5), 6) * G.edges[e][2]
                D.add((e, off), 1)
            divs.append(D)
        rel = {}
        for i in range(6):
            for j in range(6):
                rel[i, j] = linearly_equivalent(G, divs[i], divs[j], want_witness=False)[0]
        for i in range(6):
            assert rel[i, i]
            for j in range(6):
                assert rel[i, j] == rel[j, i]
                for k in range(6):
                    if rel[i, j] and rel[j, k]:
                        assert rel[i, k]


class TestReduce:
    def test_already_reduced_identity(self):
        G = theta_wedge()
        q = G.vertex_location(0)
        D = GraphDivisor(G, [(q, 3)])
        assert reduce_divisor(G, D, q) == D

    def test_circle_antipode(self):
        # 2 chips at the antipode of q: the q-reduced form keeps them there
        # (no subset not containing q can fire without going negative);
        # brute-force oracle: compare against AJ-equivalent effective forms
        G = circle(F(2))
        q = G.vertex_location(0)
        D = GraphDivisor(G, [(G.vertex_location(1), 2)])
        R = reduce_divisor(G, D, q)
        eq, _ = linearly_equivalent(G, R, D)
        assert eq
        assert R.is_effective()
        # fire once from the complement of q: both chips move distance 1 and
        # arrive at q; the reduced divisor is 2q? verify via brute force below
        brute = _bruteforce_reduced_on_circle(G, D, q)
        assert R == brute

    def test_tree_chips_all_to_q(self):
        G = MetricGraph(4, [(0, 1, F(1)), (1, 2, F(2)), (1, 3, F(1))])
        q = G.vertex_location(0)
        D = GraphDivisor(G, [(G.vertex_location(2), 2), ((2, F(1, 2)), 1)])
        R = reduce_divisor(G, D, q)
        assert R.chips == {("vertex", 0): 3}

    def test_reduce_idempotent(self):
        G = banana5()
        q = (2, F(1, 3))
        D = GraphDivisor(G, [(G.vertex_location(1), 2), ((0, F(1, 2)), 1)])
        R = reduce_divisor(G, D, q)
        assert reduce_divisor(G, R, q) == R

    def test_reduce_agrees_with_aj(self):
        rng = random.Random(3)
        G = banana5()
        q = G.vertex_location(0)
        for _ in range(10):
            D1 = GraphDivisor(G)
            D2 = GraphDivisor(G)
            for _ in range(2):
                e = rng.randrange(5)
                D1.add((e, G.edges[e][2] / 2), 1)
                e = rng.randrange(5)
                D2.add((e, G.edges[e][2] / 3), 1)
            eq, _ = linearly_equivalent(G, D1, D2, want_witness=False)
            same_reduced = reduce_divisor(G, D1, q) == reduce_divisor(G, D2, q)
            assert eq == same_reduced


def _bruteforce_reduced_on_circle(G, D, q):
    # the circle Jacobian: reduced divisor of degree d is (d-1) q + one point
    # at arc position = "sum" of positions; brute force over a fine grid
    from itertools import product
    deg = D.degree()
    candidates = []
    for e in range(len(G.edges)):
        L = G.edges[e][2]
        for k in range(0, 24):
            off = L * F(k, 24)
            if off == L:
                continue
            cand = GraphDivisor(G, [(q, deg - 1), ((e, off), 1)] if off > 0 or e == 0 else [])
            if cand.degree() != deg:
                continue
            eq, _ = linearly_equivalent(G, cand, D, want_witness=False)
            if eq:
                candidates.append(cand)
    assert candidates, "no effective representative found on the grid"
    return candidates[0]


class TestCanonicalAndTheta:
    def test_canonical_on_wedge(self):
        G = theta_wedge()
        K = canonical_divisor(G)
        assert K.chips == {("vertex", 0): 1, ("vertex", 1): 1}

    def test_canonical_on_circle_zero(self):
        G = circle()
        assert canonical_divisor(G).chips == {}

    def test_skeleton_genus4(self):
        for seed in range(4):
            sk = skeleton(dual_curve(random_smooth_sextic(seed)))
            assert sk.graph.genus() == 4
            K = canonical_divisor(sk.graph)
            assert K.degree() == 6
            # curve vertices are trivalent; skeleton valences drop by the
            # number of legs removed there
            for key, m in K.chips.items():
                v = key[1]
                assert m == sk.graph.valence(v) - 2

    def test_canonical_on_trivalent_genus4(self):
        # triangular prism: 6 trivalent vertices, 9 edges, genus 4
        prism = MetricGraph(6, [
            (0, 1, F(1)), (1, 2, F(1)), (2, 0, F(1)),
            (3, 4, F(1)), (4, 5, F(1)), (5, 3, F(1)),
            (0, 3, F(2)), (1, 4, F(2)), (2, 5, F(2)),
        ])
        K = canonical_divisor(prism)
        assert K.degree() == 6
        assert sorted(K.chips.values()) == [1] * 6

    def test_theta_on_banana(self):
        G = banana5()
        thetas = theta_characteristics(G)
        assert len(thetas) == 15
        for cls, D in thetas.items():
            assert D.degree() == 3
            assert D.is_effective()

    def test_theta_on_honeycomb_skeleton(self):
        sk = skeleton(dual_curve(honeycomb_sextic()))
        thetas = theta_characteristics(sk.graph)
        assert len(thetas) == 15
        for D in thetas.values():
            assert D.degree() == 3 and D.is_effective()

    def test_class_of_divisor_roundtrip(self):
        G = banana5()
        thetas = theta_characteristics(G)
        for cls, D in thetas.items():
            assert class_of_divisor(G, thetas, D) == cls

    def test_class_of_divisor_rejects_non_theta(self):
        G = banana5()
        thetas = theta_characteristics(G)
        D = GraphDivisor(G, [(G.vertex_location(0), 3)])
        doubled_ok = True
        try:
            class_of_divisor(G, thetas, D)
        except ValueError:
            doubled_ok = False
        # 6 * vertex0: 2D = 6v0; K = 3v0+3v1: equivalent only if 3v0 ~ 3v1
        # on this graph they are not; expect rejection
        assert not doubled_ok
