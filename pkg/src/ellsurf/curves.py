"""Weierstrass models over an abstract field, the group law, point counting."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .algebra.fields import QQ, Field, FiniteField, PrimeField, factorint
from .finite_fields import (MAX_TABLE_ORDER, ZechField, build_extension, log_tables,
                            prime_field_character_table)

INFINITY = None
BSGS_THRESHOLD = 2048

Point = Optional[tuple]


@dataclass(frozen=True)
class CurveInvariants:
    b2: Any
    b4: Any
    b6: Any
    b8: Any
    c4: Any
    c6: Any
    disc: Any
    j: Any  # None when disc == 0


class WModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over ``field``."""

    def __init__(self, a, field: Field = QQ, check: bool = False):
        if len(a) != 5:
            raise ValueError("need [a1, a2, a3, a4, a6]")
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = (field.coerce(c) for c in a)
        self._inv = None
        if check and field.is_zero(self.invariants().disc):
            raise ValueError("singular Weierstrass model")

    @classmethod
    def short(cls, a, b, field: Field = QQ, check: bool = False):
        return cls([0, 0, 0, a, b], field, check)

    @property
    def coeffs(self):
        return [self.a1, self.a2, self.a3, self.a4, self.a6]

    def __repr__(self):
        return f"WModel({[self.field.fmt(c) for c in self.coeffs]}, {self.field!r})"

    def invariants(self) -> CurveInvariants:
        if self._inv is not None:
            return self._inv
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        mul, add, sub, n = F.mul, F.add, F.sub, F.from_int
        b2 = add(mul(a1, a1), mul(n(4), a2))
        b4 = add(mul(a1, a3), mul(n(2), a4))
        b6 = add(mul(a3, a3), mul(n(4), a6))
        b8 = sub(add(add(mul(mul(a1, a1), a6), mul(n(4), mul(a2, a6))),
                     sub(mul(a2, mul(a3, a3)), mul(a1, mul(a3, a4)))), mul(a4, a4))
        c4 = sub(mul(b2, b2), mul(n(24), b4))
        c6 = add(F.neg(mul(b2, mul(b2, b2))), sub(mul(n(36), mul(b2, b4)), mul(n(216), b6)))
        disc = sub(sub(mul(n(9), mul(b2, mul(b4, b6))), mul(mul(b2, b2), b8)),
                   add(mul(n(8), mul(b4, mul(b4, b4))), mul(n(27), mul(b6, b6))))
        j = None if F.is_zero(disc) else F.div(mul(c4, mul(c4, c4)), disc)
        self._inv = CurveInvariants(b2, b4, b6, b8, c4, c6, disc, j)
        return self._inv

    def short_disc(self):
        """-(4a^3 + 27b^2) for a short model y^2 = x^3 + ax + b."""
        F = self.field
        if not all(F.is_zero(c) for c in (self.a1, self.a2, self.a3)):
            raise ValueError("short_disc needs a1 = a2 = a3 = 0")
        a, b = self.a4, self.a6
        return F.neg(F.add(F.mul(F.from_int(4), F.pow(a, 3)),
                           F.mul(F.from_int(27), F.mul(b, b))))

    def j_invariant(self):
        return self.invariants().j

    def short_model(self) -> "WModel":
        """The isomorphic model y^2 = x^3 - 27c4 x - 54c6 (char not 2, 3)."""
        F = self.field
        inv = self.invariants()
        return WModel([F.zero, F.zero, F.zero, F.mul(F.from_int(-27), inv.c4),
                       F.mul(F.from_int(-54), inv.c6)], F)

    def map_coeffs(self, fn, field: Field) -> "WModel":
        return WModel([fn(c) for c in self.coeffs], field)

    # -- points ---------------------------------------------------------------
    def is_on(self, P: Point) -> bool:
        if P is None:
            return True
        F = self.field
        x, y = P
        lhs = F.add(F.mul(y, y), F.add(F.mul(self.a1, F.mul(x, y)), F.mul(self.a3, y)))
        rhs = F.add(F.mul(F.add(F.mul(x, x), F.mul(self.a2, x)), x),
                    F.add(F.mul(self.a4, x), self.a6))
        return F.eq(lhs, rhs)

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        F = self.field
        x, y = P
        return (x, F.sub(F.neg(y), F.add(F.mul(self.a1, x), self.a3)))

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        F = self.field
        x1, y1 = P
        x2, y2 = Q
        if F.eq(x1, x2):
            ysum = F.add(F.add(y1, y2), F.add(F.mul(self.a1, x2), self.a3))
            if F.is_zero(ysum):
                return None
            num = F.sub(F.add(F.add(F.mul(F.from_int(3), F.mul(x1, x1)),
                                    F.mul(F.from_int(2), F.mul(self.a2, x1))), self.a4),
                        F.mul(self.a1, y1))
            den = F.add(F.add(F.mul(F.from_int(2), y1), F.mul(self.a1, x1)), self.a3)
        else:
            num = F.sub(y2, y1)
            den = F.sub(x2, x1)
        lam = F.div(num, den)
        nu = F.sub(y1, F.mul(lam, x1))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(self.a1, lam)), self.a2), x1), x2)
        y3 = F.sub(F.neg(F.mul(F.add(lam, self.a1), x3)), F.add(nu, self.a3))
        return (x3, y3)

    def sub(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = None
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def lift_x(self, x) -> list:
        """All points with the given x-coordinate (0, 1 or 2 of them)."""
        F = self.field
        b = F.add(F.mul(self.a1, x), self.a3)
        c = F.neg(F.add(F.mul(F.add(F.mul(x, x), F.mul(self.a2, x)), x),
                        F.add(F.mul(self.a4, x), self.a6)))
        d = F.sub(F.mul(b, b), F.mul(F.from_int(4), c))
        s = F.sqrt(d)
        if s is None:
            return []
        half = F.inv(F.from_int(2))
        y1 = F.mul(F.sub(s, b), half)
        y2 = F.mul(F.sub(F.neg(s), b), half)
        return [(x, y1)] if F.eq(y1, y2) else [(x, y1), (x, y2)]


def add_points(W: WModel, P: Point, Q: Point) -> Point:
    return W.add(P, Q)


def invariants(W: WModel) -> CurveInvariants:
    return W.invariants()


# -- counting ----------------------------------------------------------------

def _prime_of(F: Field) -> int:
    return F.characteristic


def _int_values(W: WModel):
    """b2, b4, b6 as integers when the field is F_p."""
    inv = W.invariants()
    return int(inv.b2), int(inv.b4), int(inv.b6)


def _naive_prime(p: int, b2: int, b4: int, b6: int) -> int:
    x = np.arange(p, dtype=np.int64)
    v = (((4 * x + b2) % p) * x + 2 * b4) % p
    v = (v * x + b6) % p
    if p < 1 << 16:
        chi = prime_field_character_table(p)[v]
    else:
        chi = np.array([pow(int(a), (p - 1) // 2, p) for a in v])
        chi = np.where(chi == p - 1, -1, chi)
    return int(1 + p + chi.sum())


def _tables_and_logs(W: WModel):
    """Log tables matching W's field, with a converter to log form."""
    F = W.field
    if isinstance(F, ZechField):
        return F.t, (lambda c: c)
    if isinstance(F, FiniteField) and F.order <= MAX_TABLE_ORDER:
        G = build_extension(F.p, F.degree)
        if G.modulus == F.modulus:
            T = log_tables(F.p, F.degree)
            return T, T.to_log
    return None, None


def count_points_naive(W: WModel) -> int:
    """|W(F_q)| = 1 + sum_x (1 + chi(4x^3 + b2 x^2 + 2 b4 x + b6))."""
    F = W.field
    q = F.order
    if q % 2 == 0:
        raise ValueError("q must be odd")
    if isinstance(F, PrimeField):
        return _naive_prime(F.p, *_int_values(W))
    T, conv = _tables_and_logs(W)
    if T is not None:
        inv = W.invariants()
        b2, b4, b6 = conv(inv.b2), conv(inv.b4), conv(inv.b6)
        if T.r == 1 and not isinstance(F, ZechField):
            return _naive_prime(T.p, *(int(T.exp[v]) if v != T.Z else 0 for v in (b2, b4, b6)))
        xs = np.arange(T.q, dtype=np.int64)  # every log value plus Z
        c = [b6, T.mul(T.base_log(2), b4), b2, T.base_log(4)]
        v = T.poly_eval(c, xs)
        return int(1 + q + T.chi(v).sum())
    inv = W.invariants()
    total = 1
    four, two = F.from_int(4), F.from_int(2)
    for x in F.elements():
        v = F.add(F.mul(F.add(F.mul(F.add(F.mul(four, x), inv.b2), x), F.mul(two, inv.b4)), x),
                  inv.b6)
        total += 1 + F.quadratic_character(v)
    return total


def _hasse(q: int):
    # |a| <= 2 sqrt(q)  <=>  a^2 <= 4q
    a = math.isqrt(4 * q)
    return q + 1 - a, q + 1 + a


def _order_divisors_in(W: WModel, P, lo: int, hi: int) -> list[int]:
    """All N in [lo, hi] with N*P = O, by baby-step giant-step."""
    F = W.field
    width = hi - lo
    m = max(1, math.isqrt(width) // 2 + 1)
    baby: dict = {}
    R = None
    for j in range(m + 1):
        if R is not None:
            baby.setdefault(R[0], []).append((j, R[1]))
        R = W.add(R, P)
    step = W.mul(2 * m + 1, P)
    found = []
    c = lo + m
    C = W.mul(c, P)
    while c - m <= hi:
        # N = c + j with j in [-m, m]: N P = O  <=>  C = -jP
        if C is None:
            found.append(c)
        else:
            for j, y in baby.get(C[0], ()):
                if F.eq(y, C[1]):
                    found.append(c - j)  # C = jP
                else:
                    found.append(c + j)  # C = -jP
        c += 2 * m + 1
        C = W.add(C, step)
    return sorted(n for n in set(found) if lo <= n <= hi)


def _point_order(W: WModel, P, multiple: int) -> int:
    n = multiple
    for ell in factorint(multiple):
        while n % ell == 0 and W.mul(n // ell, P) is None:
            n //= ell
    return n


def _random_point(W: WModel, rng: random.Random):
    F = W.field
    while True:
        pts = W.lift_x(F.random_element(rng))
        if pts:
            return pts[rng.randrange(len(pts))]


def _non_square(F: Field, rng: random.Random):
    while True:
        g = F.random_element(rng)
        if F.quadratic_character(g) == -1:
            return g


def count_points_bsgs(W: WModel, threshold: int = BSGS_THRESHOLD, seed: int = 0,
                      max_rounds: int = 64) -> int:
    """Group order by BSGS on the curve and its quadratic twist (Mestre)."""
    F0 = W.field
    q = F0.order
    if q <= threshold:
        return count_points_naive(W)
    T, conv = _tables_and_logs(W)
    if T is not None and not isinstance(F0, ZechField):
        Z = ZechField(T)
        S = W.short_model()
        W = WModel([Z.zero, Z.zero, Z.zero, conv(S.a4), conv(S.a6)], Z)
    else:
        W = W.short_model()
    F = W.field
    if F.is_zero(W.invariants().disc):
        raise ValueError("singular curve")
    rng = random.Random(seed)
    g = _non_square(F, rng)
    Wt = WModel([F.zero, F.zero, F.zero, F.mul(W.a4, F.mul(g, g)),
                 F.mul(W.a6, F.pow(g, 3))], F)
    lo, hi = _hasse(q)
    L, Lt = 1, 1
    for rnd in range(max_rounds):
        cand = [n for n in range(lo + (-lo) % L, hi + 1, L) if (2 * q + 2 - n) % Lt == 0]
        if len(cand) == 1:
            return cand[0]
        if rnd % 2 == 0:
            P = _random_point(W, rng)
            mults = _order_divisors_in(W, P, lo, hi)
            if mults:
                L = math.lcm(L, _point_order(W, P, mults[0]))
        else:
            P = _random_point(Wt, rng)
            mults = _order_divisors_in(Wt, P, lo, hi)
            if mults:
                Lt = math.lcm(Lt, _point_order(Wt, P, mults[0]))
    return count_points_naive(W)


def reduce_mod_p(W: WModel, p: int) -> WModel:
    """Reduce a model over Q modulo p (denominators must be prime to p)."""
    Fp = PrimeField(p)
    return WModel([Fp.coerce(Fraction(c)) for c in W.coeffs], Fp)


def has_good_reduction(W: WModel, p: int) -> bool:
    """True when this model (not nec. minimal) reduces to a smooth curve mod p."""
    if any(Fraction(c).denominator % p == 0 for c in W.coeffs):
        return False
    return Fraction(W.invariants().disc).numerator % p != 0


def trace_of_frobenius(E: WModel, p: int) -> int:
    if p < 5:
        raise ValueError("p must be at least 5")
    if not has_good_reduction(E, p):
        raise ValueError(f"bad reduction at {p}")
    return p + 1 - count_points_naive(reduce_mod_p(E, p))
