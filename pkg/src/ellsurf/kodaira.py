"""Singular fibres of elliptic surfaces y^2 + ... over k(T), k = Q or F_p.

Everything is read off the short model y^2 = x^3 - 27 c4 x - 54 c6, which is
isomorphic to the given one away from characteristic 2 and 3.  In that
setting Tate's algorithm collapses to a table of valuations of (c4, c6, disc)
after removing non-minimal factors.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra.factor import count_roots, factor_over_finite_field, factor_over_Q
from .algebra.fields import QQ, Field, FiniteField, PrimeField
from .algebra.upoly import UPoly

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible pi) or the place at infinity."""
    poly: Optional[UPoly]

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree()

    def __str__(self):
        return "inf" if self.poly is None else self.poly.to_text("T")

    def __hash__(self):
        return hash(str(self))

    def __eq__(self, other):
        return isinstance(other, Place) and str(self) == str(other)


INFINITE_PLACE = Place(None)


@dataclass
class FiberData:
    place: Place
    symbol: str           # "I0", "I5", "I0*", "I2*", "II", "III", "IV", "IV*", "III*", "II*"
    n: int                # the index of I_n / I_n*, else 0
    m_t: int
    c_t: int
    e_t: int
    # I_n: split (bool); I0*: rational roots of the residual cubic (0, 1, 3);
    # IV, IV*: split (bool); None when not computed (places of degree > 1 over Q)
    splitting: object = None
    shift: int = 0        # number of minimalising steps (c4, c6) -> (c4/pi^4, c6/pi^6)

    @property
    def degree(self) -> int:
        return self.place.degree

    @property
    def family(self) -> str:
        s = self.symbol
        if s.startswith("I") and s[1:].rstrip("*").isdigit():
            return "In*" if s.endswith("*") else "In"
        return s

    def to_dict(self) -> dict:
        sp = self.splitting
        return {"place": str(self.place), "symbol": self.symbol, "m_t": self.m_t,
                "c_t": self.c_t, "e_t": self.e_t, "degree": self.degree,
                "splitting": sp if sp is None or isinstance(sp, (bool, int)) else str(sp)}


_ADDITIVE = {2: ("II", 1, 1), 3: ("III", 2, 2), 4: ("IV", 3, 3), 6: ("I0*", 5, 4),
             8: ("IV*", 7, 3), 9: ("III*", 8, 2), 10: ("II*", 9, 1)}


def symbol_from_valuations(v4, v6, vd) -> tuple[str, int, int, int, int]:
    """(symbol, n, m_t, c_t, e_t) for a minimal model in residue char >= 5."""
    if vd == 0:
        return "I0", 0, 1, 1, 0
    if v4 == 0:
        return f"I{vd}", vd, vd, vd, vd
    if vd > 6 and v4 == 2 and v6 == 3:
        n = vd - 6
        return f"I{n}*", n, n + 5, 4, n + 6
    if vd not in _ADDITIVE:
        raise ValueError(f"impossible valuations {(v4, v6, vd)} for a minimal model")
    sym, m, c = _ADDITIVE[vd]
    return sym, 0, m, c, vd


def poly_invariants(a: list[UPoly]):
    """(c4, c6, disc) of a Weierstrass model with polynomial coefficients."""
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + a2 * 4
    b4 = a1 * a3 + a4 * 2
    b6 = a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - b4 * 24
    c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
    disc = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
    return c4, c6, disc


class ResidueField:
    """k[T]/(pi) with a reduction map from k[T]; None when unsupported."""

    def __init__(self, base: Field, pi: UPoly):
        self.base = base
        self.pi = pi
        if pi.degree() == 1:
            self.field = base
            self.root = base.neg(pi[0])
        elif isinstance(base, PrimeField):
            self.field = FiniteField(base.p, pi)
            self.root = None
        else:
            self.field = None

    def reduce(self, f: UPoly):
        if self.pi.degree() == 1:
            return f(self.root)
        return tuple((f % self.pi).coeffs + [0] * (self.pi.degree() - (f % self.pi).degree() - 1))

    def is_square(self, f: UPoly) -> Optional[bool]:
        if self.field is None:
            return None
        return self.field.sqrt(self.reduce(f)) is not None

    def cubic_roots(self, c1: UPoly, c0: UPoly) -> Optional[int]:
        """Number of roots of x^3 + c1 x + c0 (reduced at the place) in the residue field."""
        K = self.field
        if K is None:
            return None
        if K is QQ:
            return _q_cubic_roots(UPoly([self.reduce(c0), self.reduce(c1), 0, 1], QQ))
        return count_roots(UPoly([self.reduce(c0), self.reduce(c1), K.zero, K.one], K))


def _q_cubic_roots(cubic: UPoly) -> int:
    return sum(1 for g, _ in factor_over_Q(cubic) if g.degree() == 1)


def tate_local(c4: UPoly, c6: UPoly, disc: UPoly, pi: UPoly, place: Place) -> FiberData:
    """Kodaira type and splitting data of the fibre at the place pi.

    c4, c6, disc are the invariants in the local coordinate (for the infinite
    place pass the transformed polynomials in s = 1/T with pi = s).
    """
    base = pi.field
    if base.characteristic in (2, 3):
        raise ValueError("residue characteristic 2 or 3 not supported")
    shift = 0
    v4, v6, vd = c4.valuation(pi), c6.valuation(pi), disc.valuation(pi)
    while v4 >= 4 and v6 >= 6:
        c4 = c4.exact_div(pi ** 4)
        c6 = c6.exact_div(pi ** 6)
        disc = disc.exact_div(pi ** 12)
        v4, v6, vd = v4 - 4, v6 - 6, vd - 12
        shift += 1
    sym, n, m, c, e = symbol_from_valuations(v4, v6, vd)
    res = ResidueField(base, pi)
    splitting = None
    if sym.startswith("I") and not sym.endswith("*") and n > 0:
        splitting = _square_at(res, -c6)
    elif sym == "I0*":
        A = (c4 * -27).exact_div(pi ** 2)
        B = (c6 * -54).exact_div(pi ** 3)
        splitting = res.cubic_roots(A, B)
    elif sym in ("IV", "IV*"):
        k = 2 if sym == "IV" else 4
        splitting = _square_at(res, (c6 * -54).exact_div(pi ** k))
    return FiberData(place, sym, n, m, c, e, splitting, shift)


def _square_at(res: ResidueField, f: UPoly) -> Optional[bool]:
    if res.field is None:
        return None
    if res.field is QQ:
        return QQ.sqrt(res.reduce(f)) is not None
    return res.is_square(f)


@dataclass
class SurfaceAnalysis:
    base: Field
    fibers: list
    m: int
    trivial_rank: int
    euler_total: int
    c4: UPoly
    c6: UPoly
    disc: UPoly
    e_inf: int
    smooth_shifted: list = field(default_factory=list)  # I0 fibres needing a shift

    def fiber_multiset(self) -> Counter:
        """Bracketed multiset: (symbol, orbit size) per place."""
        return Counter((f.symbol, f.degree) for f in self.fibers)

    def geometric_multiset(self) -> Counter:
        out: Counter = Counter()
        for f in self.fibers:
            out[f.symbol] += f.degree
        return out

    def sum_mt_minus_1(self) -> int:
        return sum(f.degree * (f.m_t - 1) for f in self.fibers)

    def prod_ct(self) -> int:
        out = 1
        for f in self.fibers:
            out *= f.c_t ** f.degree
        return out

    @property
    def b2(self) -> int:
        return 12 * self.m - 2

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION,
                "fibers": [f.to_dict() for f in self.fibers], "m": self.m,
                "trivial_rank": self.trivial_rank, "euler_total": self.euler_total}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def weight_at_infinity(c4: UPoly, c6: UPoly) -> int:
    e = 0
    while 4 * e < c4.degree() or 6 * e < c6.degree():
        e += 1
    return e


def infinity_invariants(c4: UPoly, c6: UPoly, disc: UPoly, e: int):
    """Invariants in s = 1/T after the weighted rescaling of weight e."""
    return c4.reverse(4 * e) if not c4.is_zero() else c4, \
        c6.reverse(6 * e) if not c6.is_zero() else c6, disc.reverse(12 * e)


def _factor(poly: UPoly):
    F = poly.field
    if F is QQ:
        return factor_over_Q(poly)
    return factor_over_finite_field(poly)


def analyze_invariants(c4: UPoly, c6: UPoly, disc: UPoly) -> SurfaceAnalysis:
    F = disc.field
    if disc.is_zero():
        raise ValueError("discriminant vanishes identically")
    fibers, shifted = [], []
    for pi, _ in _factor(disc):
        fd = tate_local(c4, c6, disc, pi, Place(pi))
        (fibers if fd.symbol != "I0" else shifted).append(fd)
    e = weight_at_infinity(c4, c6)
    c4i, c6i, di = infinity_invariants(c4, c6, disc, e)
    s = UPoly.x(F)
    fd = tate_local(c4i, c6i, di, s, INFINITE_PLACE)
    if fd.symbol != "I0":
        fibers.append(fd)
    elif fd.shift:
        shifted.append(fd)
    euler = sum(f.degree * f.e_t for f in fibers)
    if euler % 12:
        raise ArithmeticError(f"Euler number {euler} not divisible by 12")
    m = euler // 12
    an = SurfaceAnalysis(F, fibers, m, 0, euler, c4, c6, disc, e, shifted)
    an.trivial_rank = 2 + an.sum_mt_minus_1()
    if an.trivial_rank > an.b2:
        raise ArithmeticError("trivial lattice exceeds b2")
    return an


def analyze_fibers(a: list[UPoly]) -> SurfaceAnalysis:
    """Fibre analysis of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over k(T)."""
    return analyze_invariants(*poly_invariants(a))


def reduce_poly_mod_p(f: UPoly, p: int) -> UPoly:
    Fp = PrimeField(p)
    return UPoly([Fp.coerce(Fraction(c)) for c in f.coeffs], Fp)


def shioda_tate_ns_rank(analysis: SurfaceAnalysis, mw_rank: int) -> int:
    if mw_rank < 0:
        raise ValueError("negative rank")
    return mw_rank + analysis.trivial_rank


def _reduction(a: list[UPoly], p: int) -> Optional[SurfaceAnalysis]:
    if p < 5:
        return None
    if any(Fraction(c).denominator % p == 0 for f in a for c in f.coeffs):
        return None
    try:
        return analyze_fibers([reduce_poly_mod_p(f, p) for f in a])
    except (ValueError, ArithmeticError):
        return None


def good_prime_test(a: list[UPoly], p: int, analysis_q: SurfaceAnalysis | None = None) -> bool:
    """Does the surface have good reduction at p (p >= 5)?

    The reduced Weierstrass model must stay minimal with the same Euler
    number 12 chi; it then has only rational double points and resolves to
    a smooth surface with the same Betti numbers.  Singular fibres are
    allowed to collide (for instance I3 + I4 -> I7).
    """
    an_q = analysis_q or analyze_fibers(a)
    an_p = _reduction(a, p)
    return an_p is not None and an_p.euler_total == an_q.euler_total


def same_kodaira_symbols(a: list[UPoly], p: int, analysis_q: SurfaceAnalysis | None = None) -> bool:
    """Stronger test: the geometric fibre types are unchanged mod p.

    Orbits may split (a conjugate pair of I2 fibres can become two rational
    ones), so symbols are compared with multiplicity over the algebraic closure.
    """
    an_q = analysis_q or analyze_fibers(a)
    an_p = _reduction(a, p)
    return (an_p is not None and an_p.euler_total == an_q.euler_total
            and an_q.geometric_multiset() == an_p.geometric_multiset())


# -- Frobenius on the trivial lattice ---------------------------------------

def _local_cycle_type(fd: FiberData) -> list[int]:
    """Cycle lengths of local Frobenius on the non-identity components."""
    s, n = fd.family, fd.n
    if fd.symbol == "I0*":
        roots = fd.splitting
        far = {3: [1, 1, 1], 1: [1, 2], 0: [3]}[roots]
        return [1] + far
    if s == "In":
        if n <= 1:
            return []
        if fd.splitting:
            return [1] * (n - 1)
        fixed = 1 if n % 2 == 0 else 0
        return [1] * fixed + [2] * ((n - 1 - fixed) // 2)
    if s in ("IV", "IV*"):
        extra = [1] * 4 if s == "IV*" else []
        return extra + ([1, 1] if fd.splitting else [2])
    if s == "III":
        return [1]
    if s == "III*":
        return [1] * 7
    if s == "II*":
        return [1] * 8
    if s == "II":
        return []
    raise NotImplementedError(f"Frobenius action on {fd.symbol} fibres")


def fiber_lattice_charpoly(fd: FiberData) -> UPoly:
    """det(x^d - sigma) on the non-identity components over the orbit."""
    d = fd.degree
    out = UPoly([1], QQ)
    for ell in _local_cycle_type(fd):
        out = out * UPoly([-1] + [0] * (d * ell - 1) + [1], QQ)
    return out


def trivial_lattice_charpoly(analysis: SurfaceAnalysis, section_signs=()) -> UPoly:
    """Frobenius on zero section, fibre class, fibre components, known sections.

    ``section_signs`` lists +1 for each independent section over F_p(T) and
    -1 for each section whose Frobenius conjugate is its negative (a section
    over F_p(sqrt d)(T) with d a non-square mod p).
    """
    out = UPoly([1, -2, 1], QQ)
    for fd in analysis.fibers:
        out = out * fiber_lattice_charpoly(fd)
    for s in section_signs:
        out = out * UPoly([-s, 1], QQ)
    return out
