"""Independent reference computations used by the tests.

Nothing here imports the engine's algebra: the factorization oracle works in
sympy with two commuting symbols x = x^g1, y = x^g2 and solves for every
unknown outgoing coefficient simultaneously, one total degree at a time.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy as sp

X, Y, T = sp.symbols("x y t")


def _trunc(expr, order):
    p = sp.Poly(sp.expand(expr), X, Y)
    return sum((c * X ** i * Y ** j for (i, j), c in p.terms() if i + j <= order), sp.Integer(0))


def _mul(a, b, order):
    return _trunc(sp.expand(a * b), order)


def _pow(f, k, order):
    """f^k for f with constant term 1, any integer k, truncated."""
    if k == 0:
        return sp.Integer(1)
    if k < 0:
        g = sp.Integer(1) - f
        inv = sp.Integer(1)
        term = sp.Integer(1)
        for _ in range(order):
            term = _mul(term, g, order)
            inv = inv + term
        f, k = _trunc(inv, order), -k
    out = sp.Integer(1)
    for _ in range(k):
        out = _mul(out, f, order)
    return out


def _automorphism(ray, f, pairing, order):
    """Images of (x, y) under x^mu -> x^mu f^<mu, r> for r = p g1 + q g2."""
    p, q = ray
    # <g1, r> = q k, <g2, r> = -p k
    # images x F, y G carry one extra degree
    return (_mul(X, _pow(f, q * pairing, order), order + 1), _mul(Y, _pow(f, -p * pairing, order), order + 1))


def _compose(first, second, order):
    """second o first: substitute second's images into first's."""
    sx, sy = second
    return tuple(_trunc(sp.expand(e.subs({X: sx, Y: sy}, simultaneous=True)), order + 1) for e in first)


def _product(walls, pairing, order):
    img = (X, Y)
    for ray, f in walls:
        img = _compose(img, _automorphism(ray, f, pairing, order), order)
    return img


def _rays(order):
    out = []
    for p in range(0, order + 1):
        for q in range(0, order + 1 - p):
            if (p, q) != (0, 0) and math.gcd(p, q) == 1:
                out.append((p, q))
    # outgoing phase order runs from the g2 side to the g1 side
    return sorted(out, key=lambda r: -math.atan2(r[1], r[0]))


def oracle_factorization(f1, f2, pairing: int, order: int) -> dict[tuple[int, int], list[Fraction]]:
    """Outgoing ray functions for incoming [(g1, f1(x)), (g2, f2(y))].

    f1, f2 are coefficient lists [1, c1, c2, ...] in powers of x^g1, x^g2.
    Returns {(p, q): [1, a1, a2, ...]} with a_d the coefficient of (x^p y^q)^d.
    """
    inc1 = sum((sp.Rational(c) * X ** d for d, c in enumerate(f1) if d <= order), sp.Integer(0))
    inc2 = sum((sp.Rational(c) * Y ** d for d, c in enumerate(f2) if d <= order), sp.Integer(0))
    lhs = _product([((1, 0), inc1), ((0, 1), inc2)], pairing, order)
    rays = _rays(order)
    unknown = {}
    funcs = {}
    for r in rays:
        m = r[0] + r[1]
        cs = [sp.Symbol(f"c_{r[0]}_{r[1]}_{d}") for d in range(1, order // m + 1)]
        unknown[r] = cs
        funcs[r] = 1 + sum(c * (X ** r[0] * Y ** r[1]) ** (d + 1) for d, c in enumerate(cs))
    solved: dict = {}
    for deg in range(1, order + 1):
        cur = [(r, funcs[r].subs(solved)) for r in rays]
        rhs = _product(cur, pairing, deg)
        eqs = []
        for a, b in zip(lhs, rhs):
            diff = sp.Poly(sp.expand(_trunc(a, deg + 1) - b), X, Y)
            eqs += [c for (i, j), c in diff.terms() if i + j == deg + 1]
        vars_ = [c for r in rays for d, c in enumerate(unknown[r], start=1)
                 if d * (r[0] + r[1]) == deg]
        if not vars_:
            continue
        sol = sp.solve(eqs, vars_, dict=True)
        if len(sol) != 1:
            raise AssertionError(f"oracle: no unique solution in degree {deg}")
        solved.update(sol[0])
        for v in vars_:
            solved.setdefault(v, sp.Integer(0))
    out = {}
    for r in rays:
        coeffs = [Fraction(1)] + [Fraction(str(sp.nsimplify(c.subs(solved)))) for c in unknown[r]]
        if any(coeffs[1:]):
            out[r] = coeffs
    return out


def ov_value(d: int) -> Fraction:
    d = abs(d)
    return Fraction((-1) ** (d - 1), d * d)


def integer_bps_from_series(coeffs: list[Fraction], sigma: int) -> list[int]:
    """Omega_n with f(t) = prod_n (1 - sigma^n t^n)^(n Omega_n), matched term by term in sympy."""
    order = len(coeffs) - 1
    target = sum(sp.Rational(c.numerator, c.denominator) * T ** d for d, c in enumerate(coeffs))
    omegas = []
    prod = sp.Integer(1)
    for n in range(1, order + 1):
        om = sp.Symbol("om")
        trial = sp.series(prod * (1 - sigma ** n * T ** n) ** (n * om), T, 0, n + 1).removeO()
        eq = sp.expand(trial - target).coeff(T, n)
        val = sp.solve(eq, om)[0]
        omegas.append(int(val))
        prod = prod * (1 - sigma ** n * T ** n) ** (n * val)
    return omegas


def wall_distance_pm1(u: complex) -> float:
    """Distance from u to {Im u = 0, |Re u| >= 1}, the analytic wall of the +-1 scene."""
    x = u.real
    if abs(x) >= 1:
        return abs(u.imag)
    return abs(u - (1 if x >= 0 else -1))


def hand_tropical_counts(pairing: int) -> dict:
    """Hand-enumerated N^trop for two directions with <g1, g2> = pairing."""
    k = abs(pairing)
    return {
        ((1,), (1,)): k,
        ((2,), (2,)): 4 * k,
        ((1, 1), (2,)): 4 * k * k,
        ((1, 1), (1, 1)): 2 * k ** 3,
    }
