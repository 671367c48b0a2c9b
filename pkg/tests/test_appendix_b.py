"""Jet verification of the modified-coefficient initial forms (type 8).

The two projections of the re-embedded sextic are composed exactly over
truncated Puiseux series with random residues; the closed initial forms
used for the tree-shape discriminants must match the jet initials.
"""

import random
from fractions import Fraction

import pytest

from tritangents.quadfield import Jet

F = Fraction


def compose_tilde(a, M, N, U, top=3):
    """f~(x,z) = sum a_ij x^i (z - M - N x)^j (1 + U x)^(3-j) as {(i,j): Jet}."""
    out = {}
    zm = {(0, 0): -M, (1, 0): -N, (0, 1): Jet.of(1)}
    ux = {(0, 0): Jet.of(1), (1, 0): U}

    def pmul(p, q):
        r = {}
        for (i1, j1), c1 in p.items():
            for (i2, j2), c2 in q.items():
                key = (i1 + i2, j1 + j2)
                r[key] = r.get(key, Jet.zero()) + c1 * c2
        return r

    def ppow(p, k):
        r = {(0, 0): Jet.of(1)}
        for _ in range(k):
            r = pmul(r, p)
        return r

    for (i, j), c in a.items():
        term = pmul(ppow(zm, j), ppow(ux, top - j))
        for key, cc in term.items():
            k2 = (key[0] + i, key[1])
            out[k2] = out.get(k2, Jet.zero()) + c * cc
    return out


def compose_hat(a, M, N, U, top=3):
    """f^(z,y) = sum a_ij (z - M - y)^i y^j (N + U y)^(3-i) as {(i,j): Jet}.

    Keyed by (z-exponent, y-exponent).
    """
    out = {}
    zy = {(1, 0): Jet.of(1), (0, 0): -M, (0, 1): Jet.of(-1)}
    nu = {(0, 0): N, (0, 1): U}

    def pmul(p, q):
        r = {}
        for (i1, j1), c1 in p.items():
            for (i2, j2), c2 in q.items():
                key = (i1 + i2, j1 + j2)
                r[key] = r.get(key, Jet.zero()) + c1 * c2
        return r

    def ppow(p, k):
        r = {(0, 0): Jet.of(1)}
        for _ in range(k):
            r = pmul(r, p)
        return r

    for (i, j), c in a.items():
        term = pmul(ppow(zy, i), ppow(nu, top - i))
        for key, cc in term.items():
            k2 = (key[0], key[1] + j)
            out[k2] = out.get(k2, Jet.zero()) + c * cc
    return out


def build_tree_jets(rng, L, markers, order=None):
    """Coefficient jets for a type-(8) valuation structure, a12-normalized.

    L = (L1, L2, L3, L4v, L5h) in the modification frame (L4v = vertical far
    arm <-> (k,3)-markers, L5h = horizontal <-> (3,r)).  Every boundary point
    gets the maximum of its family bounds plus slack, except the four marker
    points which sit exactly at their family bound (feasibility asserted).
    """
    L1, L2, L3, L4v, L5h = L
    i, j, r, k = markers

    def res():
        v = F(rng.randint(1, 40), rng.randint(1, 11))
        return v if rng.random() < 0.5 else -v

    def bounds(Q):
        x, y = Q
        out = []
        if x == 0:
            out.append(L2)
        if y == 0:
            out.append(L1)
        if x == 3:
            out.append(L5h + y * L3)
        if y == 3:
            out.append(L4v + x * L3)
        return out

    vals = {(1, 1): F(0), (2, 1): F(0), (1, 2): F(0), (2, 2): L3}
    marker_pts = {(0, i): L2, (j, 0): L1, (3, r): L5h + r * L3, (k, 3): L4v + k * L3}
    for x in range(4):
        for y in range(4):
            Q = (x, y)
            if Q in vals:
                continue
            base = max(bounds(Q))
            if Q in marker_pts:
                want = marker_pts[Q]
                assert want >= base, f"marker {Q} infeasible for L = {L}"
                vals[Q] = want
            else:
                vals[Q] = base + F(rng.randint(2, 9), 3)
    a = {}
    for key, v in vals.items():
        a[key] = Jet.of(F(1) if key == (1, 2) else res(), v, order=order)
    return a, vals


CASES = [
    # (case tag, L with the minimum of {L3, L4v-L1, L5h-L1} as required)
    ("I", (F(1), F(4), F(6), F(3), F(9))),     # L4v - L1 = 2 minimal
    ("II", (F(1), F(4), F(2), F(7), F(9))),    # L3 = 2 minimal
    ("III", (F(1), F(4), F(6), F(9), F(3))),   # L5h - L1 = 2 minimal
]


def test_case1_k0_closed_solution():
    """Case I with k = 0: the joint (n1, u1) initials of the lemma."""
    rng = random.Random(7)
    L = (F(1), F(2), F(6), F(3), F(9))   # L4v >= L2 so the (0,3)-marker fits
    L1, L2, L3, L4v, L5h = L
    for _ in range(12):
        markers = (rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2), 0)
        order = 4 * (L3 + L4v + L5h)
        a, vals = build_tree_jets(rng, L, markers, order=order)
        m1, n1, u1 = first_order_roots(a, L, markers, "I", order)
        tilde = compose_tilde(a, a[(1, 1)] + m1, a[(2, 1)] + n1, a[(2, 2)] + u1)
        A = {key: jet.initial() for key, jet in a.items() if jet.terms}
        i, j, r, k = markers
        want = (-1) ** k * A[(k, 3)] * A[(2, 2)] ** (1 - k) * A[(2, 1)] ** 3
        assert tilde[(4, 0)].val() == L3 + L4v
        assert tilde[(4, 0)].initial() == want
        # the sigma7 radicand inputs are consistent: at20 at L1 as well
        assert tilde[(2, 0)].val() == L1


def first_order_roots(a, L, markers, case, order):
    """(m1, n1, u1) jets per the case recipes (leading terms only)."""
    L1, L2, L3, L4v, L5h = L
    i, j, r, k = markers
    # m1: root of (a10 - a11^3 a13) + a11 m1 + ...
    const = a[(1, 0)] - a[(1, 1)] ** 3 * a[(1, 3)]
    m1 = Jet.of(-const.initial() / a[(1, 1)].initial(), const.val(), order=order)
    if case == "I":
        # joint (n1, u1) from b30/b50; closed initials only for k = 0, 2
        if k == 0:
            n1 = Jet.of(a[(0, 3)].initial() * a[(2, 1)].initial() ** 2, L4v, order=order)
            u1 = Jet.of(a[(0, 3)].initial() * a[(2, 2)].initial() * a[(2, 1)].initial(),
                        L3 + L4v, order=order)
        elif k == 2:
            n1 = Jet.zero(order=min(order, L4v + F(1, 1000)) if order else None)
            n1 = Jet.zero(order=L4v + F(1, 2))
            u1 = Jet.of(-a[(2, 3)].initial() * a[(2, 1)].initial() / a[(2, 2)].initial(),
                        L3 + L4v, order=order)
        else:
            n1 = Jet.zero(order=L4v + F(1, 2))
            u1 = Jet.zero(order=L3 + L4v + F(1, 2))
        return m1, n1, u1
    # cases II and III: u1 from b05 = (a02 a22^3 - a32) + ...
    cu = a[(0, 2)] * a[(2, 2)] ** 3 - a[(3, 2)]
    u1 = Jet.of(cu.initial() / a[(2, 2)].initial(), cu.val() - L3, order=order)
    if case == "III":
        cn = a[(3, 0)] - a[(0, 3)] * a[(2, 1)] ** 3
        n1 = Jet.of(-cn.initial() / a[(2, 1)].initial(), cn.val(), order=order)
    else:
        # case II: n1 root of b50 given u1; from the Q1 local equation
        # a20 a22^3 + a21 a22^2 n1 = 0, pinned only for j = 2
        if j == 2:
            n1 = Jet.of(-a[(2, 0)].initial() * a[(2, 2)].initial()
                        / a[(2, 1)].initial(), L1 + L3, order=order)
        else:
            n1 = Jet.zero(order=L1 + L3 + F(1, 2))
    return m1, n1, u1


@pytest.mark.parametrize("case,L", CASES)
def test_modified_initials_match_jets(case, L):
    rng = random.Random(hash(case) % 1000)
    L1, L2, L3, L4v, L5h = L
    for _ in range(12):
        markers = (rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2),
                   rng.randint(1, 2))
        i, j, r, k = markers
        order = 4 * (L3 + L4v + L5h)
        a, vals = build_tree_jets(rng, L, markers, order=order)
        M_ = a[(1, 1)]
        N_ = a[(2, 1)]
        U_ = a[(2, 2)]
        m1, n1, u1 = first_order_roots(a, L, markers, case, order)
        M = M_ + m1
        N = N_ + n1
        U = U_ + u1
        tilde = compose_tilde(a, M, N, U)
        hat = compose_hat(a, M, N, U)

        A = {key: jet.initial() for key, jet in a.items() if jet.terms}

        def expect(key_jet, want_val, want_init, label):
            assert key_jet.val() == want_val, (label, key_jet.val(), want_val, markers)
            assert key_jet.initial() == want_init, (label, markers)

        # case-independent initials
        expect(tilde[(0, 0)], L2, (-1) ** i * A[(0, i)] * A[(1, 1)] ** i, "at00")
        at20_want = (-A[(1, 0)] * A[(2, 1)] / A[(1, 1)]) if j == 1 else A[(2, 0)]
        expect(tilde[(2, 0)], L1, at20_want, "at20")
        expect(tilde[(6, 0)], 3 * L3 + L5h,
               (-1) ** r * A[(3, r)] * A[(2, 1)] ** r * A[(2, 2)] ** (3 - r), "at60")
        expect(hat[(0, 6)], 3 * L3 + L4v,
               (-1) ** k * A[(k, 3)] * A[(2, 2)] ** (3 - k), "ah06")

        if case == "I":
            if k in (0, 2):
                expect(tilde[(4, 0)], L3 + L4v,
                       (-1) ** k * A[(k, 3)] * A[(2, 2)] ** (1 - k) * A[(2, 1)] ** 3,
                       "at40 case I")
        elif case == "II":
            if j == 2:
                expect(tilde[(4, 0)], 2 * L3 + L1,
                       (-1) ** j * A[(j, 0)] * A[(2, 2)] ** 2
                       * (A[(2, 1)] / A[(1, 1)]) ** (2 - j), "at40 case II")
                expect(hat[(0, 4)], 2 * L3 + L1,
                       (-1) ** j * A[(2, 2)] ** 2 * (A[(j, 0)] / A[(1, 1)])
                       * (A[(2, 1)] / A[(1, 1)]) ** (1 - j), "ah04 case II")
        else:
            expect(tilde[(4, 0)], L3 + L5h,
                   (-1) ** r * A[(3, r)] * A[(2, 1)] ** r * A[(2, 2)] ** (1 - r),
                   "at40 case III")
            expect(hat[(0, 4)], L3 + L5h,
                   (-1) ** r * A[(3, r)] * (A[(2, 2)] / A[(2, 1)]) ** (1 - r),
                   "ah04 case III")


def test_case2_j1_initials():
    """Case II with j = 1: at40/ah04 come from the m1-term."""
    rng = random.Random(99)
    L = CASES[1][1]
    L1, L2, L3, L4v, L5h = L
    for _ in range(12):
        markers = (rng.randint(1, 2), 1, rng.randint(1, 2), rng.randint(1, 2))
        order = 4 * (L3 + L4v + L5h)
        a, vals = build_tree_jets(rng, L, markers, order=order)
        m1, n1, u1 = first_order_roots(a, L, markers, "II", order)
        tilde = compose_tilde(a, a[(1, 1)] + m1, a[(2, 1)] + n1, a[(2, 2)] + u1)
        hat = compose_hat(a, a[(1, 1)] + m1, a[(2, 1)] + n1, a[(2, 2)] + u1)
        A = {key: jet.initial() for key, jet in a.items() if jet.terms}
        i, j, r, k = markers
        want40 = (-1) ** j * A[(j, 0)] * A[(2, 2)] ** 2 * (A[(2, 1)] / A[(1, 1)]) ** (2 - j)
        want04 = (-1) ** j * A[(2, 2)] ** 2 * (A[(j, 0)] / A[(1, 1)]) \
            * (A[(2, 1)] / A[(1, 1)]) ** (1 - j)
        assert tilde[(4, 0)].val() == 2 * L3 + L1 and tilde[(4, 0)].initial() == want40
        assert hat[(0, 4)].val() == 2 * L3 + L1 and hat[(0, 4)].initial() == want04
