"""Cyclotomic polynomials and the cyclotomic / non-cyclotomic split."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fields import QQ, factorint
from .upoly import UPoly


def euler_phi(n: int) -> int:
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return out


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(d: int) -> tuple:
    x_d = UPoly([-1] + [0] * (d - 1) + [1], QQ)
    for e in range(1, d):
        if d % e == 0:
            x_d = x_d.exact_div(UPoly(list(_cyclotomic_coeffs(e)), QQ))
    return tuple(x_d.coeffs)


def cyclotomic_poly(d: int) -> UPoly:
    return UPoly(list(_cyclotomic_coeffs(d)), QQ)


def cyclotomic_indices(max_degree: int) -> list[int]:
    # phi(d) >= sqrt(d/2), so d <= 2 * max_degree^2 covers every phi(d) <= max_degree
    bound = 2 * max_degree * max_degree + 2
    return [d for d in range(1, bound + 1) if euler_phi(d) <= max_degree]


@dataclass
class CyclotomicSplit:
    g: UPoly
    h: UPoly
    multiplicities: dict  # d -> exponent of Phi_d in g

    def __iter__(self):
        return iter((self.g, self.h))


def cyclotomic_split(f: UPoly) -> CyclotomicSplit:
    """f = g*h with g a product of cyclotomic polynomials and h free of roots
    of unity, normalised so that h(0) = 1."""
    if f.is_zero() or f[0] == 0:
        raise ValueError("cyclotomic_split needs f(0) != 0")
    h = f
    mult: dict[int, int] = {}
    for d in cyclotomic_indices(max(f.degree(), 1)):
        phi = cyclotomic_poly(d)
        if phi.degree() > h.degree():
            continue
        while h.degree() >= phi.degree():
            q, r = h.divmod(phi)
            if not r.is_zero():
                break
            h = q
            mult[d] = mult.get(d, 0) + 1
    h = h * (1 / Fraction(h[0]))
    g = f.exact_div(h)
    return CyclotomicSplit(g, h, mult)


def format_factored(mult: dict, h_factors, sign: int = 1) -> str:
    """Pretty text like -(x - 1)^25 (x + 1)^5 (x^2 - 2/17 x + 1)."""
    parts = []
    for d in sorted(mult):
        phi = cyclotomic_poly(d).to_text("x")
        e = mult[d]
        parts.append(f"({phi})" + (f"^{e}" if e > 1 else ""))
    for fac, e in h_factors:
        parts.append(f"({fac.to_text('x')})" + (f"^{e}" if e > 1 else ""))
    return ("-" if sign < 0 else "") + " ".join(parts)
