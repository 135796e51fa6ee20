"""Polynomial factorisation over Q (via sympy) and over finite fields."""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from .fields import QQ, Field
from .upoly import UPoly

_T = sympy.Symbol("T")


def to_sympy(f: UPoly, var=_T):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)]
                      or [0], var, domain="QQ")


def from_sympy(expr, var=_T) -> UPoly:
    p = sympy.Poly(expr, var, domain="QQ")
    return UPoly([Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())], QQ)


def factor_over_Q(f: UPoly) -> list[tuple[UPoly, int]]:
    """Monic irreducible factors with multiplicity (the leading constant is dropped)."""
    if f.degree() <= 0:
        return []
    _, facs = to_sympy(f).factor_list()
    out = [(from_sympy(g.as_expr()).monic(), e) for g, e in facs]
    return sorted(out, key=lambda t: (t[0].degree(), [str(c) for c in t[0].coeffs]))


def _finite_order(F: Field) -> int:
    return F.order


def squarefree_decomposition(f: UPoly) -> list[tuple[UPoly, int]]:
    """Yun-style decomposition valid in characteristic p (handles p-th powers)."""
    F = f.field
    p = F.characteristic
    f = f.monic()
    out: list[tuple[UPoly, int]] = []
    if f.degree() <= 0:
        return out
    fp = f.derivative()
    if fp.is_zero():
        # f = g(x^p); take p-th root of coefficients
        q = F.order
        root_exp = q // p
        g = UPoly([F.pow(f[i * p], root_exp) for i in range(f.degree() // p + 1)], F)
        return [(h, e * p) for h, e in squarefree_decomposition(g)]
    c = f.gcd(fp)
    w = f.exact_div(c)
    i = 1
    while w.degree() > 0:
        y = w.gcd(c)
        z = w.exact_div(y)
        if z.degree() > 0:
            out.append((z.monic(), i))
        i += 1
        w, c = y, c.exact_div(y)
    if c.degree() > 0:
        q = F.order
        root_exp = q // p
        g = UPoly([F.pow(c[i2 * p], root_exp) for i2 in range(c.degree() // p + 1)], F)
        out += [(h, e * p) for h, e in squarefree_decomposition(g)]
    return out


def distinct_degree(f: UPoly) -> list[tuple[UPoly, int]]:
    """Split a squarefree monic f into products of irreducibles of equal degree."""
    F = f.field
    q = F.order
    x = UPoly.x(F)
    out = []
    h = x % f if f.degree() > 0 else x
    d = 0
    while f.degree() >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = f.gcd(h - x)
        if g.degree() > 0:
            out.append((g, d))
            f = f.exact_div(g)
            h = h % f
    if f.degree() > 0:
        out.append((f, f.degree()))
    return out


def equal_degree(f: UPoly, d: int, rng: random.Random) -> list[UPoly]:
    """Cantor-Zassenhaus splitting (odd characteristic)."""
    F = f.field
    if f.degree() == d:
        return [f.monic()]
    q = F.order
    n = f.degree()
    while True:
        a = UPoly([F.random_element(rng) for _ in range(n)], F)
        if a.degree() <= 0:
            continue
        b = a.powmod((q ** d - 1) // 2, f) - 1
        g = f.gcd(b)
        if 0 < g.degree() < n:
            return equal_degree(g, d, rng) + equal_degree(f.exact_div(g), d, rng)


def _sort_key(F, g):
    return (g.degree(), [F.code(c) if hasattr(F, "code") else c for c in g.coeffs])


def factor_over_finite_field(f: UPoly, seed: int = 0) -> list[tuple[UPoly, int]]:
    """Monic irreducible factors with multiplicity, in a deterministic order."""
    F = f.field
    rng = random.Random(seed)
    out = []
    for g, e in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for k in equal_degree(h, d, rng):
                out.append((k, e))
    return sorted(out, key=lambda t: _sort_key(F, t[0]))


def count_roots(f: UPoly, order: int | None = None) -> int:
    """Number of distinct roots of f in the finite field of coefficients
    (or in the extension of size ``order`` containing it)."""
    F = f.field
    q = order or F.order
    x = UPoly.x(F)
    f = f.monic()
    if f.degree() <= 0:
        return 0
    return f.gcd(x.powmod(q, f) - x).degree()


def is_irreducible(f: UPoly) -> bool:
    facs = factor_over_finite_field(f)
    return len(facs) == 1 and facs[0][1] == 1
