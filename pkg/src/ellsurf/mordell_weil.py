"""Sections, Shioda heights, regulators and torsion for elliptic surfaces.

The height of a section P is

    h(P) = 2 chi + 2 (P.O) - sum_v contr_v(P)

and the pairing comes from polarisation with the group law over K(T).
Local data is read on the short model Y^2 = X^3 - 27 c4 X - 54 c6, where
X = 36x + 3 b2 and Y = 108 (2y + a1 x + a3).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import sympy

from .algebra.fields import QQ, Field, FiniteField, PrimeField, QuadraticField
from .algebra.linalg import det, rank
from .algebra.quadratic import QForm, SquareClass, square_class
from .algebra.upoly import FunctionField, RatFunc, UPoly
from .curves import WModel, count_points_naive
from .kodaira import (SurfaceAnalysis, analyze_fibers, good_prime_test, poly_invariants,
                      reduce_poly_mod_p)


@dataclass(frozen=True)
class MWSection:
    x: RatFunc
    y: RatFunc
    field_disc: Optional[int] = None
    label: str = ""

    @property
    def point(self):
        return (self.x, self.y)

    def to_dict(self) -> dict:
        return {"x": self.x.to_text(), "y": self.y.to_text(), "d": self.field_disc}


def _coeff_key(F: Field, c):
    if isinstance(c, tuple):
        return tuple(Fraction(v) for v in c)
    return (Fraction(c),) if not isinstance(F, (PrimeField,)) else (int(c),)


class EllipticSurface:
    """An elliptic surface over k(T), k = Q or F_p, with polynomial a-invariants."""

    def __init__(self, a: list[UPoly], name: str = "", analysis: SurfaceAnalysis | None = None):
        self.a = a
        self.base = a[0].field
        self.name = name
        self._analysis = analysis
        self._models: dict = {}

    @classmethod
    def from_entry(cls, entry, p: int | None = None) -> "EllipticSurface":
        a = entry.a_invariants()
        if p is None:
            return cls(a, entry.name)
        return cls([reduce_poly_mod_p(f, p) for f in a], f"{entry.name} mod {p}")

    @property
    def analysis(self) -> SurfaceAnalysis:
        if self._analysis is None:
            self._analysis = analyze_fibers(self.a)
        return self._analysis

    @property
    def p(self) -> int:
        return self.base.characteristic

    @cached_property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        return a1 * a1 + a2 * 4, a1 * a3 + a4 * 2, a3 * a3 + a6 * 4

    # -- coefficient fields ---------------------------------------------------
    def coefficient_field(self, d: int | None) -> tuple[Field, object]:
        """Field K containing sqrt(d) over the base, and sqrt(d) in K."""
        k = self.base
        if d is None:
            return k, None
        if k is QQ:
            K = QuadraticField(d)
            return K, K.gen
        r = k.sqrt(k.coerce(d))
        if r is not None:
            return k, r
        K = FiniteField(k.p, UPoly([-d, 0, 1], k))
        return K, (0, 1)

    def model(self, K: Field) -> WModel:
        key = repr(K)
        if key not in self._models:
            FK = FunctionField(K)
            self._models[key] = WModel([FK.coerce(_lift_poly(f, K)) for f in self.a], FK)
        return self._models[key]

    # -- sections -------------------------------------------------------------
    def lift_section(self, x, d: int | None = None, label: str = "") -> Optional[MWSection]:
        """Solve for y over k(sqrt d)(T); canonical root has the smaller leading coefficient."""
        K, _ = self.coefficient_field(d)
        W = self.model(K)
        x = _lift_ratfunc(x, K)
        pts = W.lift_x(x)
        if not pts:
            return None
        pts.sort(key=lambda P: _coeff_key(K, P[1].num.lc()) if not P[1].is_zero() else ())
        x0, y0 = pts[0]
        return MWSection(x0, y0, d, label)

    def section(self, x, y, d: int | None = None, label: str = "") -> MWSection:
        K, _ = self.coefficient_field(d)
        P = MWSection(_lift_ratfunc(x, K), _lift_ratfunc(y, K), d, label)
        if not self.model(K).is_on(P.point):
            raise ValueError(f"point {label or ''} is not on the surface")
        return P

    def _field_of(self, *sections) -> Field:
        ds = {s.field_disc for s in sections if s.field_disc is not None}
        if len(ds) > 1:
            raise ValueError("sections over different quadratic fields")
        return self.coefficient_field(ds.pop() if ds else None)[0]

    def _as(self, P: MWSection, K: Field) -> tuple:
        return (_lift_ratfunc(P.x, K), _lift_ratfunc(P.y, K))

    def add(self, P: MWSection, Q: MWSection) -> Optional[MWSection]:
        K = self._field_of(P, Q)
        R = self.model(K).add(self._as(P, K), self._as(Q, K))
        if R is None:
            return None
        d = P.field_disc if P.field_disc is not None else Q.field_disc
        return MWSection(R[0], R[1], d)

    def neg(self, P: MWSection) -> MWSection:
        K = self._field_of(P)
        x, y = self.model(K).neg(self._as(P, K))
        return MWSection(x, y, P.field_disc, P.label)

    def mul(self, n: int, P: MWSection) -> Optional[MWSection]:
        K = self._field_of(P)
        R = self.model(K).mul(n, self._as(P, K))
        return None if R is None else MWSection(R[0], R[1], P.field_disc)

    def combine(self, coeffs, sections) -> Optional[MWSection]:
        R = None
        for c, P in zip(coeffs, sections):
            if c == 0:
                continue
            Q = self.mul(c, P)
            R = Q if R is None else (self.add(R, Q) if Q is not None else R)
        return R

    # -- heights --------------------------------------------------------------
    def _short_xy(self, P: MWSection, K: Field):
        b2, _, _ = self.b_invariants
        FK = FunctionField(K)
        a1, _, a3, _, _ = (FK.coerce(_lift_poly(f, K)) for f in self.a)
        x, y = self._as(P, K)
        X = FK.add(FK.mul(FK.from_int(36), x), FK.coerce(_lift_poly(b2 * 3, K)))
        Y = FK.mul(FK.from_int(108),
                   FK.add(FK.add(FK.mul(FK.from_int(2), y), FK.mul(a1, x)), a3))
        return FK, X, Y

    def height(self, P: Optional[MWSection]) -> Fraction:
        if P is None:
            return Fraction(0)
        an = self.analysis
        K = self._field_of(P)
        FK, X, Y = self._short_xy(P, K)
        A = _lift_poly(an.c4 * -27, K)
        e = an.e_inf
        fibers = {str(f.place): f for f in an.fibers}
        for f in an.smooth_shifted:
            fibers[str(f.place)] = f
        # (P.O): poles of X at finite places, corrected where the model is shifted
        po = Fraction(X.den.degree(), 2)
        contr = Fraction(0)
        for key, fd in fibers.items():
            if fd.place.is_infinite:
                continue
            pi = _lift_poly(fd.place.poly, K)
            d = fd.degree
            s = fd.shift
            vX = X.valuation(pi)
            if s:
                po -= Fraction(max(0, -vX), 2) * d
                po += Fraction(max(0, 2 * s - vX), 2) * d
            contr += d * _local_contribution(fd, X, Y, A, pi, s)
        # the place at infinity, in s = 1/T with weight e
        sX, sY, sA = _at_infinity(X, 2 * e), _at_infinity(Y, 3 * e), \
            _at_infinity(RatFunc(A), 4 * e)
        svar = UPoly.x(K)
        vX = sX.valuation(svar)
        po += Fraction(max(0, -vX), 2)
        fd_inf = fibers.get("inf")
        if fd_inf is not None:
            contr += _local_contribution(fd_inf, sX, sY, sA.num if sA.is_poly() else sA, svar, 0)
        return 2 * an.m + 2 * po - contr

    def pairing(self, P: Optional[MWSection], Q: Optional[MWSection]) -> Fraction:
        if P is None or Q is None:
            return Fraction(0)
        if self._orthogonal(P, Q):
            return Fraction(0)
        return (self.height(self.add(P, Q)) - self.height(P) - self.height(Q)) / 2

    def _orthogonal(self, P: MWSection, Q: MWSection) -> bool:
        # an automorphism of the coefficient field fixing one section and
        # negating the other preserves the pairing, so it vanishes
        dp, dq = P.field_disc, Q.field_disc
        if dp == dq:
            return False
        if self.base is QQ:
            return True
        if None in (dp, dq):
            d = dq if dp is None else dp
            return self.coefficient_field(d)[0] is not self.base
        raise NotImplementedError("sections over two different quadratic extensions of F_p")

    def gram(self, sections) -> list[list[Fraction]]:
        n = len(sections)
        h = [self.height(P) for P in sections]
        G = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = h[i]
            for j in range(i + 1, n):
                Pi, Pj = sections[i], sections[j]
                if self._orthogonal(Pi, Pj):
                    v = Fraction(0)
                else:
                    v = (self.height(self.add(Pi, Pj)) - h[i] - h[j]) / 2
                G[i][j] = G[j][i] = v
        return G

    def regulator(self, sections) -> Fraction:
        return det(self.gram(sections))

    def regulator_form(self, fixed, A: MWSection, B: MWSection) -> QForm:
        """Reg(fixed, uA + vB) as a binary form in (u, v)."""
        G = self.gram(list(fixed) + [A, B])
        n = len(fixed)

        def reg(u, v):
            M = [row[:n] + [u * row[n] + v * row[n + 1]] for row in G[:n]]
            last = [u * G[n][i] + v * G[n + 1][i] for i in range(n)]
            last.append(u * u * G[n][n] + 2 * u * v * G[n][n + 1] + v * v * G[n + 1][n + 1])
            return det(M + [last])

        a, c = reg(1, 0), reg(0, 1)
        b = reg(1, 1) - a - c
        return QForm.binary(a, b, c)

    # -- torsion ----------------------------------------------------------------
    def two_torsion(self) -> list[MWSection]:
        """Sections (x, y) of order two: roots in k[T] of 4x^3 + b2 x^2 + 2 b4 x + b6."""
        if self.base is not QQ:
            raise NotImplementedError("two_torsion over Q only")
        b2, b4, b6 = self.b_invariants
        Tt, Xs = sympy.symbols("T X")
        expr = 4 * Xs ** 3 + _sym(b2, Tt) * Xs ** 2 + 2 * _sym(b4, Tt) * Xs + _sym(b6, Tt)
        out = []
        for fac, _ in sympy.factor_list(sympy.Poly(expr, Xs, Tt, domain="QQ"))[1]:
            if sympy.degree(fac, Xs) == 1:
                c1 = fac.as_expr().coeff(Xs, 1)
                c0 = fac.as_expr().coeff(Xs, 0)
                root = sympy.cancel(-c0 / c1)
                num, den = sympy.fraction(root)
                xr = RatFunc(_from_sym(num, Tt), _from_sym(den, Tt))
                P = self.lift_section(xr)
                if P is not None:
                    out.append(P)
        return out


@dataclass
class TorsionInfo:
    order: Optional[int]
    generators: list
    lower: int
    upper: int
    specializations: list  # (t, p, #E_t(F_p))

    @property
    def determined(self) -> bool:
        return self.lower == self.upper


def torsion_order(S: EllipticSurface, min_specializations: int = 20,
                  primes=(5, 7, 11, 13, 17, 19, 23, 29, 31, 37)) -> TorsionInfo:
    gens = S.two_torsion()
    lower = 1 + len(gens)
    g = 0
    specs = []
    for p in primes:
        if not good_prime_test(S.a, p, S.analysis):
            continue
        Fp = PrimeField(p)
        ap = [reduce_poly_mod_p(f, p) for f in S.a]
        for t in range(p):
            W = WModel([f(t) for f in ap], Fp)
            if Fp.is_zero(W.invariants().disc):
                continue
            n = count_points_naive(W)
            specs.append((t, p, n))
            g = math.gcd(g, n)
    if len(specs) < min_specializations:
        raise RuntimeError("too few specialisations for a torsion bound")
    return TorsionInfo(lower if lower == g else None, gens, lower, g, specs)


def rank_lower_bound(S: EllipticSurface, entry, geometric: bool = False) -> int:
    secs = catalog_sections(S, entry, geometric)
    return rank(S.gram(secs))


def catalog_sections(S: EllipticSurface, entry, geometric: bool = False) -> list[MWSection]:
    out = []
    for i, x in enumerate(entry.rational_sections()):
        P = S.lift_section(x, label=f"P{i + 1}")
        if P is None:
            raise ValueError(f"listed section {x.to_text()} does not lift")
        out.append(P)
    if geometric:
        for j, (d, xt, yt) in enumerate(entry.quadratic_sections):
            from .catalog import ratfunc
            P = S.lift_section(ratfunc(xt), d, label=f"G{j + 1}")
            if P is None:
                raise ValueError(f"section over Q(sqrt {d}) does not lift")
            out.append(P)
    return out


def mod_sections(S: EllipticSurface, entry, p: int):
    """Sections of the reduction S = entry mod p, keyed by label.

    Returns (rational, conjugate): ``rational`` holds the reductions of the
    listed rational sections (P1, P2, ...), listed quadratic sections whose field splits mod p
    (numbered on after them) and the extra points printed for p;
    ``conjugate`` holds listed quadratic sections that stay over F_p(sqrt d)(T), on
    which Frobenius acts as -1.
    """
    from .catalog import ratfunc
    rational: dict[str, MWSection] = {}
    conjugate: list[MWSection] = []
    for i, x in enumerate(entry.rational_sections()):
        label = f"P{i + 1}"
        rational[label] = S.lift_section(x, label=label)
    n = len(rational)
    d0 = None
    for j, (d, xt, _) in enumerate(entry.quadratic_sections):
        K, _ = S.coefficient_field(d)
        if K is S.base:
            P = S.lift_section(ratfunc(xt), d, label=f"G{j + 1}")
            n += 1
            rational[f"P{n}"] = MWSection(P.x, P.y, None, f"P{n}")
        else:
            # x is rational, so every non-split section can be lifted over
            # the same F_{p^2}, up to the sign of y
            d0 = d if d0 is None else d0
            conjugate.append(S.lift_section(ratfunc(xt), d0, label=f"G{j + 1}"))
    for mp in entry.mod_points:
        if mp.p != p:
            continue
        if mp.y is not None:
            P = S.section(ratfunc(mp.x), ratfunc(mp.y), label=mp.label)
        else:
            P = S.lift_section(ratfunc(mp.x), label=mp.label)
            if mp.y_sign < 0:
                P = S.neg(P)
        rational[mp.label] = P
    return rational, conjugate


# -- helpers ------------------------------------------------------------------

def _lift_poly(f: UPoly, K: Field) -> UPoly:
    if f.field is K:
        return f
    k = f.field
    if k is QQ and isinstance(K, PrimeField):
        return UPoly([K.coerce(Fraction(c)) for c in f.coeffs], K)
    return UPoly([K.coerce(c) for c in f.coeffs], K)


def _lift_ratfunc(x, K: Field) -> RatFunc:
    if isinstance(x, UPoly):
        x = RatFunc(x)
    if x.field is K:
        return x
    return RatFunc(_lift_poly(x.num, K), _lift_poly(x.den, K))


def _at_infinity(f: RatFunc, w: int) -> RatFunc:
    """f(1/s) * s^w as a rational function of s."""
    K = f.field
    if f.is_zero():
        return f
    k = w + f.den.degree() - f.num.degree()
    num, den = f.num.reverse(), f.den.reverse()
    if k >= 0:
        num = num * UPoly.monomial(k, 1, K)
    else:
        den = den * UPoly.monomial(-k, 1, K)
    return RatFunc(num, den)


def _local_contribution(fd, X: RatFunc, Y: RatFunc, A, pi: UPoly, shift: int) -> Fraction:
    if fd.symbol in ("I0", "I1", "II", "II*"):
        return Fraction(0)
    K = pi.field
    if not isinstance(A, RatFunc):
        A = RatFunc(A)
    if shift:
        p2 = RatFunc(pi ** (2 * shift))
        FK = FunctionField(K)
        X = FK.div(X, p2)
        Y = FK.div(Y, RatFunc(pi ** (3 * shift)))
        A = FK.div(A, RatFunc(pi ** (4 * shift)))
    if X.valuation(pi) < 0:
        return Fraction(0)
    FK = FunctionField(K)
    dX = FK.add(FK.mul(FK.from_int(3), FK.mul(X, X)), A)
    vY = Y.valuation(pi)
    if not (vY > 0 and dX.valuation(pi) > 0):
        return Fraction(0)
    fam = fd.family
    if fam == "In":
        n = fd.n
        # Y = 0 (a 2-torsion point) has infinite valuation
        i = Fraction(n, 2) if vY == float("inf") else min(Fraction(vY), Fraction(n, 2))
        return i * (n - i) / n
    table = {"III": Fraction(1, 2), "IV": Fraction(2, 3), "I0*": Fraction(1),
             "IV*": Fraction(4, 3), "III*": Fraction(3, 2)}
    if fd.symbol in table:
        return table[fd.symbol]
    raise NotImplementedError(f"height contribution at {fd.symbol}")


def _sym(f: UPoly, T):
    return sum(sympy.Rational(c.numerator, c.denominator) * T ** i for i, c in enumerate(f.coeffs))


def _from_sym(expr, T) -> UPoly:
    p = sympy.Poly(expr, T, domain="QQ")
    return UPoly([Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())], QQ)


def gram_to_json(G) -> str:
    return json.dumps([[str(v) for v in row] for row in G])


def delta_from_gram(analysis: SurfaceAnalysis, G) -> SquareClass:
    d = det(G)
    if d == 0:
        raise ValueError("dependent generators: zero regulator")
    return square_class(abs(analysis.prod_ct() * d))
