"""Closed-form solutions of the local tangency systems, in exact arithmetic.

Each ``entry_*`` solves one canonical local system (f_P, l_P, W_P) and
returns the initial forms of the parameters and tangency points, over Q or
over the quadratic extension generated by the entry's radicand.  The
residual test suite substitutes these values back into the systems and
demands exact zeros; the enumerator uses them for numeric-mode reports.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .quadfield import QuadNum

F0 = Fraction(0)
F1 = Fraction(1)


def _q(x, rads=()):
    if isinstance(x, QuadNum):
        return x
    return QuadNum.of(Fraction(x), rads)


def wronskian(f_terms, l_terms, x, y, one):
    """det J(f, l) at (x, y) for term lists [(coeff, (i, j)), ...]."""
    def partials(terms):
        fx = one * 0
        fy = one * 0
        for c, (i, j) in terms:
            mon_x = (one * c) * (x ** (i - 1) if i - 1 >= 0 else one / (x ** (1 - i))) \
                * (y ** j if j >= 0 else one / (y ** (-j)))
            mon_y = (one * c) * (x ** i if i >= 0 else one / (x ** (-i))) \
                * (y ** (j - 1) if j - 1 >= 0 else one / (y ** (1 - j)))
            fx = fx + i * mon_x
            fy = fy + j * mon_y
        return fx, fy

    fx, fy = partials(f_terms)
    lx, ly = partials(l_terms)
    return fx * ly - fy * lx


def evaluate(terms, x, y, one):
    out = one * 0
    for c, (i, j) in terms:
        xm = x ** i if i >= 0 else one / (x ** (-i))
        ym = y ** j if j >= 0 else one / (y ** (-j))
        out = out + (one * c) * xm * ym
    return out


# ---------------------------------------------------------------------------
# (2a): transverse crossing of a leg/edge line with a Gamma vertex
# ---------------------------------------------------------------------------


def entry_2a(cell_pts, cell_coeffs, delta, eta, k, b_exps) -> Dict:
    """Solve the double-root system for a width-2 triangle across a line.

    Returns rho (value of x^delta on the line), the double root s in the
    complementary coordinate, and the planar point (x, y).
    """
    A, B, C = (Fraction(c) for c in cell_coeffs)
    bA, bB, bC = b_exps
    rho = (4 * A * C / (B * B)) ** k
    s = -(B * rho ** bB) / (2 * C * rho ** bC)
    x = s ** delta[1] * rho ** (-eta[1]) if delta[1] >= 0 else None
    # x = s^{delta_y} rho^{-eta_y}, y = s^{-delta_x} rho^{eta_x}
    def ipow(base, kk):
        return base ** kk if kk >= 0 else 1 / (base ** (-kk))
    x = ipow(s, delta[1]) * ipow(rho, -eta[1])
    y = ipow(s, -delta[0]) * ipow(rho, eta[0])
    return {"rho": rho, "s": s, "x": x, "y": y}


# ---------------------------------------------------------------------------
# overlap segments: eps^2 = 4AC/B^2
# ---------------------------------------------------------------------------


def entry_segment(A: Fraction, B: Fraction, C: Fraction) -> Dict:
    rad = A * C
    rads = (rad,)
    root = QuadNum.root(0, rads)
    eps = 2 * root / _q(B, rads)
    s = -_q(B, rads) * eps / (2 * _q(C, rads))
    return {"eps": eps, "eps_conj": -eps, "s": s, "rads": rads, "radicand": rad}


def check_segment(A, B, C) -> bool:
    """F(s) = A + B eps s + C s^2 has a double root at the returned s."""
    sol = entry_segment(A, B, C)
    rads = sol["rads"]
    one = QuadNum.of(1, rads)
    for eps in (sol["eps"], sol["eps_conj"]):
        s = -_q(B, rads) * eps / (2 * _q(C, rads))
        F = _q(A, rads) + _q(B, rads) * eps * s + _q(C, rads) * s * s
        dF = _q(B, rads) * eps + 2 * _q(C, rads) * s
        if not (F.is_zero() and dF.is_zero()):
            return False
    return True


# ---------------------------------------------------------------------------
# vertex tangencies (4a)/(6a)
# ---------------------------------------------------------------------------


def entry_4a6a_axis(a, b, c, n, eps: int) -> Dict:
    """f_P = a y + eps b x y + c x^2, l_P = y + n x + u x y; unique solution."""
    a, b, c, n = map(Fraction, (a, b, c, n))
    g = eps * b * n - c
    u = -(g * g) / (4 * a * c * n)
    x = -2 * a * n / g
    y = 4 * a * c * n * n / (g * (eps * b * n + c))
    return {"u": u, "x": x, "y": y}


def entry_4a6a_diag(a, c, b, n, eps: int) -> Dict:
    """f_P = a + c x y + eps b x, l_P = y + n x + u x y; two solutions."""
    a, c, b, n = map(Fraction, (a, c, b, n))
    rad = -a * c * n
    rads = (rad,)
    r = QuadNum.root(0, rads)
    sols = []
    for sgn in (1, -1):
        sq = r * sgn
        u = (_q(eps * b, rads) + 2 * sq) / _q(a, rads)
        x = -_q(a, rads) / (_q(eps * b, rads) + sq)
        y = sq / _q(c, rads)
        sols.append({"u": u, "x": x, "y": y})
    return {"solutions": sols, "rads": rads, "radicand": rad}


def entry_5a(a, b, c, n) -> Dict:
    """f_P = a + b x + c y, l_P = y + n x + u x y; two lifts (eq:5aNoAdjacentLeg)."""
    a, b, c, n = map(Fraction, (a, b, c, n))
    rad = b * c * n
    rads = (rad,)
    r = QuadNum.root(0, rads)
    sols = []
    for sgn in (1, -1):
        sq = r * sgn                 # sqrt(b c n)
        piece = _q(b, rads) + sq     # b (1 + sqrt(c n / b)) = b + sqrt(b c n)
        u = piece * piece / (_q(a, rads) * _q(b, rads))
        x = -_q(a, rads) * (_q(b, rads) + sq) / (piece * piece) * _q(b, rads) / _q(b, rads)
        x = -_q(a, rads) / piece     # from 2 b u x = c n - a u - b ... use direct solve below
        sols.append({"u": u, "sq": sq})
    # solve x, y from W and f exactly per solution
    out = []
    for sol in sols:
        u = sol["u"]
        # W_P = c n + c u y - b - b u x = 0 and f = a + b x + c y = 0
        # y = -(a + b x)/c; substitute: c n + u(-(a + b x)) - b - b u x = 0
        # => c n - u a - b = 2 b u x
        x = (_q(c * n, rads) - u * _q(a, rads) - _q(b, rads)) / (2 * _q(b, rads) * u)
        y = -( _q(a, rads) + _q(b, rads) * x) / _q(c, rads)
        out.append({"u": u, "x": x, "y": y})
    return {"solutions": out, "rads": rads, "radicand": rad}


def entry_5a_leg(a, b, c, lam1) -> Dict:
    """(5a) with the adjacent-leg value lambda' = n/u known (eq:bardu5aAdjLeg)."""
    a, b, c, lam1 = map(Fraction, (a, b, c, lam1))
    rad = a * c * lam1
    rads = (rad,)
    r = QuadNum.root(0, rads)
    den = (a - c * lam1) ** 2
    sols = []
    for sgn in (1, -1):
        u = _q(b, rads) * (_q(a + c * lam1, rads) + 2 * r * sgn) / _q(den, rads)
        n = u * _q(lam1, rads)
        x = (_q(c, rads) * n - u * _q(a, rads) - _q(b, rads)) / (2 * _q(b, rads) * u)
        y = -(_q(a, rads) + _q(b, rads) * x) / _q(c, rads)
        sols.append({"u": u, "n": n, "x": x, "y": y})
    return {"solutions": sols, "rads": rads, "radicand": rad}


# ---------------------------------------------------------------------------
# hyperflexes
# ---------------------------------------------------------------------------


def entry_6b(a, b, c) -> Dict:
    """Lambda_l: f = a + b y + c x y^3; m, n unique, points over sqrt(3)."""
    a, b, c = map(Fraction, (a, b, c))
    m = Fraction(-8) * a / b
    n = Fraction(-64) * a ** 3 * c / b ** 4
    rads = (Fraction(3),)
    s3 = QuadNum.root(0, rads)
    x = -_q(b ** 3, rads) * (3 + s3) / _q(32 * a * a * c, rads)
    y = _q(2 * a, rads) * (1 - s3) / _q(b, rads)
    r = -_q(b ** 3, rads) * (3 - s3) / _q(32 * a * a * c, rads)
    s = _q(2 * a, rads) * (1 + s3) / _q(b, rads)
    return {"m": m, "n": n, "p": (x, y), "pp": (r, s), "rads": rads}


def entry_5b(a, bp, c) -> Dict:
    """Lambda_r: f = a + b' x y^2 + c x y^3; m, n unique, points over sqrt(2)."""
    a, bp, c = map(Fraction, (a, bp, c))
    m = -bp / c
    n = -bp ** 4 / (4 * a * c ** 3)
    rads = (Fraction(2),)
    s2 = QuadNum.root(0, rads)
    x = -_q(2 * a * c * c, rads) * (2 + s2) / _q(bp ** 3, rads)
    y = -s2 * _q(bp, rads) / _q(2 * c, rads)
    r = -_q(2 * a * c * c, rads) * (2 - s2) / _q(bp ** 3, rads)
    s = s2 * _q(bp, rads) / _q(2 * c, rads)
    return {"m": m, "n": n, "p": (x, y), "pp": (r, s), "rads": rads}


def entry_4bp(a, c, lam2) -> Dict:
    """(4b'): f = a + c x y^3; (m, n, u) from lambda''; points over sqrt(3)."""
    a, c, lam2 = map(Fraction, (a, c, lam2))
    m = -8 * lam2
    n = -64 * c * lam2 ** 4 / a
    u = -64 * c * lam2 ** 3 / a
    rads = (Fraction(3),)
    s3 = QuadNum.root(0, rads)
    pts = []
    for sgn in (1, -1):
        y = _q(2 * lam2, rads) * (1 + s3 * sgn)
        x = -_q(a, rads) / (_q(c, rads) * y ** 3)
        pts.append((x, y))
    return {"m": m, "n": n, "u": u, "p": pts[0], "pp": pts[1], "rads": rads}


def entry_6bp(a, b, c, lam2) -> Dict:
    """(6b'): f = a + b y + c x y^3 (eq:values6b_Cross); points over sqrt(Delta)."""
    a, b, c, lam2 = map(Fraction, (a, b, c, lam2))
    den = (b * lam2 - a) ** 2
    m = -8 * a * lam2 * (b * lam2 + a) / den
    n = -64 * a ** 3 * c * lam2 ** 4 / den ** 2
    u = -64 * a ** 3 * c * lam2 ** 3 / den ** 2
    delta = 3 * b * b * lam2 * lam2 - 2 * a * b * lam2 + 3 * a * a
    rads = (delta,)
    sq = QuadNum.root(0, rads)
    pts = []
    for sgn in (1, -1):
        y = _q(2 * a * lam2, rads) * (_q(b * lam2 + a, rads) + sq * sgn) / _q(den, rads)
        x = -(_q(a, rads) + _q(b, rads) * y) / (_q(c, rads) * y ** 3)
        pts.append((x, y))
    return {"m": m, "n": n, "u": u, "p": pts[0], "pp": pts[1],
            "rads": rads, "Delta": delta}


# ---------------------------------------------------------------------------
# (3h), (3d)
# ---------------------------------------------------------------------------


def entry_3h(a, b, c, bp, lam2) -> Dict:
    """(3h): top system f_P = (a y + b y + c x) y ... per eq:3h with
    f_P = a y^2 + b y^3 + c x y (canonical frame), plus the bottom system."""
    a, b, c, bp, lam2 = map(Fraction, (a, b, c, bp, lam2))
    den = (b * lam2 - a) ** 2
    u = -4 * b * c / den
    n = u * lam2
    x_top = -(b * b * lam2 * lam2 - a * a) / (4 * b * c)
    y_top = -(b * lam2 + a) / (2 * b)
    rad = a * n * (a * n - c)
    rads = (rad,)
    sq = QuadNum.root(0, rads)
    bottoms = []
    for sgn in (1, -1):
        # roots of c(c - an) y^2 + 2 b'(c - an) y + b'^2 = 0
        y = -_q(bp, rads) * (_q(a * n - c, rads) - sq * sgn) / (_q(c, rads) * _q(a * n - c, rads))
        x = -_q(a, rads) * y * y / (_q(c, rads) * y + _q(bp, rads))
        m = -y - _q(n, rads) * x
        bottoms.append({"m": m, "x": x, "y": y})
    return {"u": u, "n": n, "p_top": (x_top, y_top), "bottoms": bottoms,
            "rads": rads, "radicand": rad}


def entry_3d(a, b, c, u) -> Dict:
    """(3d) top vertex (eq:3d): unique (n, p) given u."""
    a, b, c, u = map(Fraction, (a, b, c, u))
    n = -((b * u - c) ** 2) / (4 * a * c * u)
    x = -(b * u + c) / (2 * c * u)
    y = (b * b * u * u - c * c) / (4 * a * c * u * u)
    return {"n": n, "x": x, "y": y}


# ---------------------------------------------------------------------------
# type (8) sigma-chart systems
# ---------------------------------------------------------------------------


def entry_tree_sigma(a_lo, a_mid, a_hi) -> Dict:
    """Generic sigma-chart system A + M x z + B x^2 with line z + e = 0.

    Covers eq:m2 (sigma5), eq:ltilde10 (sigma7), eq:ltilde20 (sigma8) and
    eq:u2 (sigma9) after renaming: the solutions are
    e = +- 2 sqrt(A B)/M, x = -+ sqrt(A B)/B, z = -e.
    """
    A, M, B = map(Fraction, (a_lo, a_mid, a_hi))
    rad = A * B
    rads = (rad,)
    sq = QuadNum.root(0, rads)
    sols = []
    for sgn in (1, -1):
        e = 2 * sq * sgn / _q(M, rads)
        x = sq * sgn / _q(B, rads)
        z = -e
        sols.append({"e": e, "x": x, "z": z})
    return {"solutions": sols, "rads": rads, "radicand": rad}
