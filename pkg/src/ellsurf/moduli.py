"""Moduli of N-congruent pairs: Klein covariants and the Z* double planes.

For E: y^2 = x^3 + a x + b the curves N-congruent to E with a given power
of the Weil pairing are y^2 = x^3 + A x + B, where A and B are covariants
of a Klein form D in two variables.  For (N, eps) = (3,2), (5,1), (5,2) the
surface Z(N, eps) has a model with weighted coordinates built from the
auxiliary polynomials f, g, h, j, k below, and its cover Z*(N, eps), on
which the ratio of discriminants is a square, is a double plane

    y^2 = F_plus(u, v, w) * F_minus(u, v, w)

branched along two cuspidal cubics.  Pulling back the tangent lines of
F_plus = 0 gives genus one curves, and rational points on them give pairs
that are also 2-congruent, i.e. 2N-congruent.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional

import sympy

from .algebra.fields import QQ, is_prime
from .algebra.quadratic import square_class
from .curves import WModel, has_good_reduction, trace_of_frobenius

x_, a_, b_ = sympy.symbols("x a b")
xi, eta = sympy.symbols("xi eta")
lam, mu = sympy.symbols("lambda mu")
u_, v_, w_ = sympy.symbols("u v w")
T_ = sympy.Symbol("T")

CASES = ("3,2", "5,1", "5,2")
CASE_OF_2N = {"6,5": "3,2", "10,1": "5,1", "10,3": "5,2"}


def _case(case) -> str:
    if isinstance(case, tuple):
        case = f"{case[0]},{case[1]}"
    case = case.replace(" ", "").strip("()")
    if case not in CASES:
        raise KeyError(f"no Klein data for {case!r}")
    return case


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, sympy.Rational):
        return Fraction(int(v.p), int(v.q))
    return Fraction(v)


def _rat(v) -> sympy.Rational:
    v = Fraction(v)
    return sympy.Rational(v.numerator, v.denominator)


# -- auxiliary polynomials ----------------------------------------------------------

@dataclass
class AuxPolys:
    f: sympy.Expr
    g: sympy.Expr
    h: sympy.Expr
    j: sympy.Expr
    k: sympy.Expr
    delta: sympy.Rational
    fx: sympy.Expr


def _aux_symbolic(a, b) -> AuxPolys:
    x = x_
    f = x**3 + a * x + b
    g = 3 * a * x**4 + 18 * b * x**3 - 6 * a**2 * x**2 - 6 * a * b * x - a**3 - 9 * b**2
    h = 3 * a * x**2 + 9 * b * x - a**2
    j = 27 * b * x**3 - 18 * a**2 * x**2 - 27 * a * b * x - 2 * a**3 - 27 * b**2
    delta = -4 * a**3 - 27 * b**2
    fx = sympy.diff(f, x)
    k = sympy.expand(f**3 + f * j + 4 * delta * f + 3 * g * (x * fx - 2 * f))
    return AuxPolys(sympy.expand(f), g, h, j, k, delta, fx)


def aux_polys(a, b) -> AuxPolys:
    """f, g, h, j, k in x and Delta = -4a^3 - 27b^2 for rational (a, b)."""
    a, b = _rat(a), _rat(b)
    P = _aux_symbolic(a, b)
    if P.delta == 0:
        raise ValueError("singular curve: 4a^3 + 27b^2 = 0")
    if sympy.expand(P.j**2 + 4 * P.h**3 + 27 * P.delta * P.f**2) != 0:
        raise ArithmeticError("j^2 = -4h^3 - 27 Delta f^2 fails")
    return P


# -- Klein forms and covariants -------------------------------------------------------

def _klein_D(case: str, a, b):
    if case == "3,2":
        return (-27 * a * xi**4 - 54 * b * xi**3 * eta - 18 * a**2 * xi**2 * eta**2
                - 54 * a * b * xi * eta**3 + (a**3 - 27 * b**2) * eta**4), (xi, eta)
    l, m = lam, mu
    if case == "5,1":
        D = (l**12 + 22 * a * l**10 * m**2 + 220 * b * l**9 * m**3
             - 165 * a**2 * l**8 * m**4 - 528 * a * b * l**7 * m**5
             - 220 * (a**3 + 12 * b**2) * l**6 * m**6 + 264 * a**2 * b * l**5 * m**7
             - 165 * a * (5 * a**3 + 32 * b**2) * l**4 * m**8
             - 880 * b * (3 * a**3 + 20 * b**2) * l**3 * m**9
             + 22 * a**2 * (25 * a**3 + 168 * b**2) * l**2 * m**10
             + 20 * (19 * a**4 * b + 128 * a * b**3) * l * m**11
             + (125 * a**6 + 1792 * a**3 * b**2 + 6400 * b**4) * m**12)
        return D, (l, m)
    D = ((125 * a**3 - 432 * b**2) * l**12
         + 2430 * a**2 * b * l**11 * m
         - 22 * a * (25 * a**3 - 378 * b**2) * l**10 * m**2
         - 110 * b * (11 * a**3 - 108 * b**2) * l**9 * m**3
         - 165 * a**2 * (5 * a**3 - 27 * b**2) * l**8 * m**4
         - 132 * a * b * (53 * a**3 - 189 * b**2) * l**7 * m**5
         + 220 * (a**6 - 123 * a**3 * b**2 + 81 * b**4) * l**6 * m**6
         + 132 * a**2 * b * (19 * a**3 - 297 * b**2) * l**5 * m**7
         - 165 * (a**7 - 26 * a**4 * b**2 + 189 * a * b**4) * l**4 * m**8
         - 110 * (3 * a**6 * b - 34 * a**3 * b**3 + 135 * b**5) * l**3 * m**9
         - 22 * a**2 * (a**3 - 3 * b**2) * (a**3 + 27 * b**2) * l**2 * m**10
         - 10 * a * b * (5 * a**6 + 82 * a**3 * b**2 + 189 * b**4) * l * m**11
         + (a**9 - a**6 * b**2 - 181 * a**3 * b**4 - 675 * b**6) * m**12)
    return D, (l, m)


# Hessian and Jacobian scalings, and the syzygy: lhs_sign*(4A^3+27B^2) = c * (4a^3+27b^2)^e * D^n
_KLEIN_CONSTANTS = {
    "3,2": (sympy.Rational(1, 108), sympy.Rational(1, 36), -1, 16, 2, 3),
    "5,1": (sympy.Rational(1, 5808), sympy.Rational(1, 360), 1, 1, 1, 5),
    "5,2": (sympy.Rational(1, 1452), sympy.Rational(-1, 180), -1, 16, 2, 5),
}


@dataclass
class KleinData:
    case: str
    D: sympy.Expr
    A: sympy.Expr
    B: sympy.Expr
    variables: tuple
    a: object
    b: object

    def syzygy_sides(self):
        _, _, sgn, c, e, n = _KLEIN_CONSTANTS[self.case]
        lhs = (4 * self.A**3 + 27 * self.B**2) * sgn
        rhs = self.D**n * (c * (4 * self.a**3 + 27 * self.b**2) ** e)
        return lhs, rhs

    def check_syzygy(self) -> bool:
        lhs, rhs = self.syzygy_sides()
        return (lhs - rhs).is_zero

    def dehomogenised(self, x):
        """(D, A, B) at (x, 1)."""
        v1, v2 = self.variables
        xr = _rat(x)
        out = []
        for E in (self.D, self.A, self.B):
            val = E.as_expr().subs({v1: xr, v2: 1})
            if not val.is_Rational:
                raise ValueError(f"covariant does not evaluate to a rational at x = {x}")
            out.append(_q(val))
        return tuple(out)


def _covariants(case: str, a, b):
    # Poly arithmetic in (p, q) is far faster than expanding expression trees
    hess_c, jac_c, *_ = _KLEIN_CONSTANTS[case]
    D, (p, q) = _klein_D(case, a, b)
    D = sympy.Poly(D, p, q)
    A = hess_c * (D.diff(p, p) * D.diff(q, q) - D.diff(p, q) ** 2)
    B = jac_c * (D.diff(p) * A.diff(q) - D.diff(q) * A.diff(p))
    return D, A, B, (p, q)


@lru_cache(maxsize=None)
def _generic_covariants(case: str):
    return _covariants(case, a_, b_)


def klein_covariants(case, a=None, b=None, check: bool = True) -> KleinData:
    """Klein form D with covariants A (Hessian) and B (Jacobian) for the case.

    With a, b omitted the forms are returned with symbolic coefficients.
    A failed syzygy means a transcription error and raises.
    """
    case = _case(case)
    if a is None:
        D, A, B, vs = _generic_covariants(case)
        kd = KleinData(case, D, A, B, vs, a_, b_)
    else:
        a, b = _rat(a), _rat(b)
        if 4 * a**3 + 27 * b**2 == 0:
            raise ValueError("singular curve")
        D, A, B, vs = _covariants(case, a, b)
        kd = KleinData(case, D, A, B, vs, a, b)
    if check and not kd.check_syzygy():
        raise ArithmeticError(f"syzygy fails for case {case}")
    return kd


# -- the weighted models of Z(N, eps) and Z*(N, eps) ------------------------------------

def model_relation(case, coords) -> list[Fraction]:
    """Residuals of the model equations (all zero on the surface)."""
    case = _case(case)
    c = [Fraction(v) for v in coords]
    if case == "3,2":
        u, v, r, s = c
        return [(4 * r + (u + 3 * v) ** 2) * (r * u - v ** 3) - r * s]
    if case == "5,1":
        t, u, v, r, s = c
        return [r * r + s * t * t - u * (u * u - 11 * u * v - v * v) - (12 * u + v) * s,
                r * t - 3 * u * u + 4 * u * v - 4 * s]
    r, s, v, w = c
    return [r * (4 * s - 2 * v + w) ** 2 + 27 * r * s * v + s * w * w - s * s * (v - 4 * w)]


MODEL_WEIGHTS = {"3,2": (1, 1, 2, 3), "5,1": (1, 2, 2, 3, 4), "5,2": (1, 1, 1, 1)}


def forward_map(case, a, b, x) -> tuple:
    """(x, a, b) in P(1,2,3) to the model coordinates of Z(N, eps)."""
    case = _case(case)
    P = aux_polys(a, b)
    X = _rat(x)
    at = {x_: X}
    f, g, h, j, k, fx = (_q(E.subs(at)) for E in (P.f, P.g, P.h, P.j, P.k, P.fx))
    dl = _q(P.delta)
    if case == "3,2":
        D = fx ** 3 - 27 * f * f
        out = (D, fx * h, h ** 3, 729 * dl * f ** 4)
    elif case == "5,1":
        D = 4 * k * f - 3 * (f * f + g) ** 2 + 32 * dl * (f * f + g)
        out = (4 * f, 2 * (f * f + g), 16 * dl, 4 * k, D)
    else:
        out = (dl * f ** 4, dl * f * f * g, g ** 3, 2 * g ** 3 - g * g * j - 4 * dl * f * f * g)
    if any(model_relation(case, out)):
        raise ArithmeticError("forward map misses the model")
    return out


def inverse_map(case, coords) -> tuple[Fraction, Fraction, Fraction]:
    """Model coordinates back to (x, a, b), up to (x, a, b) ~ (l x, l^2 a, l^3 b)."""
    case = _case(case)
    c = [Fraction(v) for v in coords]
    if case == "3,2":
        u, v, r, s = c
        x = r + v * v
        a = -3 * r * (r + u * v + 2 * v * v)
        b = r * (u + 3 * v) * (r * u + v ** 3) + 2 * r * r * (r + 3 * v * v)
    elif case == "5,1":
        t, u, v, r, s = c
        m = 32 * u - v
        x = m + 5 * t * t
        a = (-3 * (8 * u - v) * m - 288 * r * t + 30 * (28 * u + v) * t ** 2 - 75 * t ** 4)
        b = (-2 * m * m * (4 * u + v) - 144 * m * r * t + 6 * m * (88 * u - 5 * v) * t ** 2
             + 1008 * r * t ** 3 - 150 * (28 * u + v) * t ** 4 + 250 * t ** 6)
    else:
        r, s, v, w = c
        x = 4 * r * s + 4 * r * v + r * w - s * s
        a = 3 * (8 * r * s ** 3 + 4 * r * s * s * v + 6 * r * s * s * w + r * s * w * w - s ** 4)
        b = (r * r * s * (16 * s ** 3 - 8 * s * s * v - 24 * s * s * w - 40 * s * v * w
                          - 15 * s * w * w + 4 * v * w * w - 2 * w ** 3)
             + r * s ** 3 * (24 * s * s + 8 * s * v + 34 * s * w + 7 * w * w) - 2 * s ** 6)
    if 4 * a ** 3 + 27 * b ** 2 == 0:
        raise ValueError("degenerate point: singular curve")
    return x, a, b


def weighted_equal(p1, p2, weights=(1, 2, 3)) -> Optional[Fraction]:
    """lambda with p2 = (lambda^w_i * p1_i), or None."""
    ratios = {}
    for c1, c2, wt in zip(p1, p2, weights):
        c1, c2 = Fraction(c1), Fraction(c2)
        if (c1 == 0) != (c2 == 0):
            return None
        if c1:
            ratios.setdefault(wt, c2 / c1)
    if not ratios:
        return None
    cands = []
    if 1 in ratios:
        cands = [ratios[1]]
    else:
        ws = sorted(ratios)
        steps = [(w, w + 1) for w in ws if w + 1 in ratios]
        if steps:
            w, w1 = steps[0]
            cands = [ratios[w1] / ratios[w]]
        else:
            w = ws[0]
            r = _rational_root(abs(ratios[w]), w)
            if r is not None:
                cands = [r, -r]
    for lam_ in cands:
        if all(Fraction(c2) == lam_ ** wt * Fraction(c1)
               for c1, c2, wt in zip(p1, p2, weights)):
            return lam_
    return None


def _rational_root(q: Fraction, n: int) -> Optional[Fraction]:
    rn, ok1 = sympy.integer_nthroot(q.numerator, n)
    rd, ok2 = sympy.integer_nthroot(q.denominator, n)
    return Fraction(int(rn), int(rd)) if ok1 and ok2 else None


def disc_ratio(case, coords) -> Fraction:
    """The model's expression for disc(E2)/disc(E1) modulo squares."""
    case = _case(case)
    c = [Fraction(v) for v in coords]
    if case == "3,2":
        u, _, _, s = c
        return s / u
    if case == "5,1":
        return c[4]
    r, _, v, w = c
    return r * (16 * r - v + 4 * w)


def F_pm(case):
    """(F_plus, F_minus) as sympy expressions in u, v, w."""
    case = _case(case)
    u, v, w = u_, v_, w_
    if case == "3,2":
        return tuple(u * (u + 3 * v + e * w) ** 2 + 4 * v**3 for e in (1, -1))
    if case == "5,1":
        base = u * (u**2 - 11 * u * v - v**2) + w**2 * (12 * u + v)
        return tuple(base + e * 2 * w * (3 * u**2 - 4 * u * v + 4 * w**2) for e in (1, -1))
    base = u**2 * (11 * v + 8 * w) + w**2 * (8 * u - v + 4 * w)
    return tuple(base + e * 2 * u * (2 * v - w) * (4 * u - v + 4 * w) for e in (1, -1))


def cusp_count(F) -> tuple[int, int]:
    """(number of singular points, number of them that are cusps) of F = 0 in P^2."""
    pts = set()
    u, v, w = u_, v_, w_
    grads = [sympy.diff(F, s) for s in (u, v, w)]
    for chart in ((u, 1), (v, 1), (w, 1)):
        sub = {chart[0]: 1}
        eqs = [sympy.expand(gr.subs(sub)) for gr in grads] + [sympy.expand(F.subs(sub))]
        free = [s for s in (u, v, w) if s != chart[0]]
        for sol in sympy.solve(eqs, free, dict=True):
            P = tuple(sympy.nsimplify(sol.get(s, 1) if s != chart[0] else 1) for s in (u, v, w))
            if any(e.free_symbols for e in P):
                continue
            nz = next(e for e in P if e != 0)
            pts.add(tuple(sympy.simplify(e / nz) for e in P))
    cusps = 0
    for P in pts:
        sub = dict(zip((u, v, w), P))
        H = sympy.Matrix(3, 3, lambda i, k: sympy.diff(F, (u, v, w)[i], (u, v, w)[k]).subs(sub))
        # a node has Hessian rank 3 restricted... in P^2 a double point is a cusp
        # iff the quadratic tangent cone is a square, i.e. the Hessian has rank 1
        if H.rank() == 1:
            cusps += 1
    return len(pts), cusps


def involutions(case, point):
    """The two commuting involutions on y^2 = F_plus F_minus at (u, v, w, y)."""
    case = _case(case)
    u, v, w, y = (Fraction(c) for c in point)
    i1 = (u, v, w, -y)
    if case in ("3,2", "5,1"):
        i2 = (u, v, -w, y)
    else:
        den = 8 * u - (v - 4 * w)
        if den == 0 or u == 0:
            raise ZeroDivisionError("second involution undefined here")
        ut = u * (v - 4 * w) / den
        i2 = (ut, v, w, (ut / u) ** 2 * y)
    return i1, i2


def on_double_plane(case, point) -> bool:
    u, v, w, y = (_rat(c) for c in point)
    Fp, Fm = F_pm(case)
    sub = {u_: u, v_: v, w_: w}
    return y * y == Fp.subs(sub) * Fm.subs(sub)


def j_family(case, T0) -> Fraction:
    """j-invariants along the cuspidal cubic F_plus = 0 (split/non-split Cartan curves)."""
    T = Fraction(T0)
    case = case.replace(" ", "").strip("()") if isinstance(case, str) else f"{case[0]},{case[1]}"
    if case == "3,1":
        num, den = 27 * (T - 3) ** 3 * (T + 1) ** 3, T ** 3
    elif case == "5,1":
        num = (T + 5) ** 3 * (T * T - 5) ** 3 * (T * T + 5 * T + 10) ** 3
        den = (T * T + 5 * T + 5) ** 5
    elif case == "5,2":
        num = 125 * T * (2 * T + 1) ** 3 * (2 * T * T + 7 * T + 8) ** 3
        den = (T * T + T - 1) ** 5
    else:
        raise KeyError(f"no j-family for {case}")
    if den == 0:
        raise ZeroDivisionError("pole of the j-family")
    return num / den


# root transport data for the (10,3) cubic; G6 and G9 are not fully known, so
# this is shipped as data and only the cubic in T0 is exercised
def x0_transport(u, v, w, T0) -> Fraction:
    u, v, w, T0 = (Fraction(c) for c in (u, v, w, T0))
    return (3 * u * u * (8 * u - 3 * v - 4 * w) * T0 ** 2
            + 12 * u * (2 * u * v - 4 * u * w + v * w) * T0
            - 16 * u * u * v + 6 * u * v * v + 8 * u * w * w - v * w * w + 4 * w ** 3)


def tangent_cubic_10_3(u, v, w):
    """u T^3 - w T^2 - v T - v: tangent lines through (u:v:w) in the (10,3) family."""
    return sympy.Poly(u * T_**3 - w * T_**2 - v * T_ - v, T_)


# -- curves and congruence evidence --------------------------------------------------

def short_curve(a, b) -> WModel:
    return WModel([0, 0, 0, Fraction(a), Fraction(b)], QQ)


def _integral_short(a: Fraction, b: Fraction) -> WModel:
    # scale (a, b) -> (l^4 a, l^6 b) to clear denominators; isomorphic over Q
    l = 1
    while (a * l ** 4).denominator != 1 or (b * l ** 6).denominator != 1:
        l *= (a.denominator * b.denominator)
    return short_curve(a * l ** 4, b * l ** 6)


def j_invariant(a, b) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    return 1728 * 4 * a ** 3 / (4 * a ** 3 + 27 * b ** 2)


@dataclass
class Evidence:
    N: int
    bound: int
    checked: list = field(default_factory=list)
    first_failure: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.first_failure is None


def trace_congruence_check(E1: WModel, E2: WModel, N: int, bound: int = 500) -> Evidence:
    """a_p(E1) = a_p(E2) mod N for good primes 5 <= p <= bound (necessary condition only)."""
    ev = Evidence(N, bound)
    E1 = _integral_short(E1.a4, E1.a6)
    E2 = _integral_short(E2.a4, E2.a6)
    for p in range(5, bound + 1):
        if not is_prime(p) or not (has_good_reduction(E1, p) and has_good_reduction(E2, p)):
            continue
        if (trace_of_frobenius(E1, p) - trace_of_frobenius(E2, p)) % N:
            ev.first_failure = p
            break
        ev.checked.append(p)
    return ev


def two_congruence_test(j1, j2) -> bool:
    """Rational criterion for 2-congruence in terms of j-invariants (j not 0, 1728)."""
    j1, j2 = Fraction(j1), Fraction(j2)
    if {j1, j2} & {Fraction(0), Fraction(1728)}:
        raise ValueError("j = 0 or 1728 excluded")
    sq = (j1 - 1728) * (j2 - 1728)
    m = _rational_sqrt(sq)
    if m is None:
        return False
    for mm in {m, -m}:
        c = j1 * j2
        cubic = sympy.Poly(x_**3 - 3 * _rat(c) * x_ - 2 * _rat(c) * (_rat(mm) + 1728), x_)
        if _has_rational_root(cubic):
            return True
    return False


def _has_rational_root(P: sympy.Poly) -> bool:
    return any(fac.degree() == 1 for fac, _ in P.factor_list()[1])


def _rational_sqrt(q) -> Optional[Fraction]:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass
class CongruencePair:
    E1: WModel
    E2: WModel
    N: int
    eps_class: int
    evidence: Optional[Evidence] = None
    disc_ratio_square: Optional[bool] = None
    source: dict = field(default_factory=dict)

    def j_invariants(self):
        return j_invariant(self.E1.a4, self.E1.a6), j_invariant(self.E2.a4, self.E2.a6)

    def disc_ratio(self) -> Fraction:
        return Fraction(self.E2.invariants().disc) / Fraction(self.E1.invariants().disc)

    def disc_ratio_class(self):
        q = self.disc_ratio()
        # the usual case; skips factoring very large discriminants
        if _rational_sqrt(q) is not None:
            return square_class(1)
        return square_class(q)

    def to_dict(self) -> dict:
        return {"schema_version": 1,
                "E1": [str(c) for c in self.E1.coeffs], "E2": [str(c) for c in self.E2.coeffs],
                "N": self.N, "eps_class": self.eps_class,
                "checked_primes": [] if self.evidence is None else self.evidence.checked,
                "disc_ratio_class": str(self.disc_ratio_class()), "source": self.source}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _eps_class(N: int, eps: int) -> int:
    """Smallest representative of eps in (Z/N)^x modulo squares."""
    squares = {(k * k) % N for k in range(1, N) if sympy.gcd(k, N) == 1}
    return min(e for e in range(1, N) if sympy.gcd(e, N) == 1 and any(
        (e * s) % N == eps % N for s in squares))


def covariant_curve(case, a, b, x) -> WModel:
    kd = klein_covariants(case, a, b, check=False)
    _, A, B = kd.dehomogenised(x)
    E = short_curve(A, B)
    if E.invariants().disc == 0:
        raise ValueError("covariant curve is singular at this x")
    return E


def congruent_pair_from_point(case, a, b, x, bound: int = 200) -> CongruencePair:
    """E1: y^2 = x^3 + ax + b and its N-congruent partner at the Klein parameter x."""
    case = _case(case)
    N, eps = (int(c) for c in case.split(","))
    E1 = short_curve(a, b)
    E2 = covariant_curve(case, a, b, x)
    coords = forward_map(case, a, b, x)
    pair = CongruencePair(E1, E2, N, _eps_class(N, eps), source={"case": case, "x": str(x)})
    pair.evidence = trace_congruence_check(E1, E2, N, bound)
    pair.disc_ratio_square = _rational_sqrt(pair.disc_ratio() / disc_ratio(case, coords)) is not None
    if not pair.evidence.ok:
        raise ArithmeticError(f"trace congruence mod {N} fails at p = {pair.evidence.first_failure}")
    if not pair.disc_ratio_square:
        raise ArithmeticError("discriminant ratio differs from the model's prediction")
    return pair


# -- tangent lines and the 2N construction ---------------------------------------------

def tangent_line(case2N, T):
    """Coefficients (cu, cv, cw) of the tangent line cu*u + cv*v + cw*w = 0."""
    key = case2N if isinstance(case2N, str) else f"{case2N[0]},{case2N[1]}"
    key = key.replace(" ", "").strip("()")
    if key == "6,5":
        return (T**3 - 1, 3 * (T - 1), -1)
    if key == "10,1":
        return (T - 2, -T * (T - 1) ** 2, 2 * (T - 1))
    if key == "10,3":
        return (T**3, -(T + 1), -T**2)
    raise KeyError(f"no tangent-line fibration for {case2N!r}")


def _line_point(line, s, t):
    """Point on the line with (u, v) = (s, t)."""
    cu, cv, cw = line
    return s, t, -(cu * s + cv * t) / cw


@dataclass
class TangentFibre:
    case2N: str
    T0: object
    line: tuple
    sextic: sympy.Poly     # F_plus F_minus on the line, in (s, t) -> dehomogenised in s
    square: sympy.Poly     # the cancelled squared linear factor (in s, t=1)
    quartic: sympy.Poly
    linear_root: Fraction  # root of the quartic's rational linear factor


def tangent_fibration(case2N, T0) -> TangentFibre:
    key = case2N if isinstance(case2N, str) else f"{case2N[0]},{case2N[1]}"
    key = key.replace(" ", "").strip("()")
    case = CASE_OF_2N[key]
    T0 = _rat(T0)
    line = tangent_line(key, T0)
    if line[2] == 0:
        raise ValueError("degenerate T0: line does not meet the w-chart")
    s = sympy.Symbol("s")
    U, V, W = _line_point(line, s, 1)
    Fp, Fm = F_pm(case)
    sub = {u_: U, v_: V, w_: W}
    fp = sympy.Poly(sympy.expand(Fp.subs(sub)), s)
    fm = sympy.Poly(sympy.expand(Fm.subs(sub)), s)
    if fp.degree() < 3 or fm.degree() < 3:
        raise ValueError("degenerate T0: point at infinity of the chart on the cubic")
    # the tangency point is a double root of F_plus on the line
    g = sympy.gcd(fp, fp.diff(s))
    if g.degree() != 1:
        raise ValueError("degenerate T0: no simple tangency")
    sq = g ** 2
    lin = fp.quo(sq)
    if not fp.rem(sq).is_zero:
        raise ArithmeticError("tangency factor does not divide")
    quartic = lin * fm
    if quartic.degree() != 4:
        raise ValueError("degenerate T0")
    if sympy.gcd(quartic, quartic.diff(s)).degree() > 0:
        raise ValueError("degenerate T0: quartic has a repeated root")
    root = -lin.all_coeffs()[1] / lin.all_coeffs()[0]
    return TangentFibre(key, T0, line, fp * fm, sq, quartic, _q(root))


def _quartic_search(c, height):
    out = {}
    for den in range(1, height + 1):
        for num in range(-height, height + 1):
            if sympy.igcd(num, den) != 1:
                continue
            sv = Fraction(num, den)
            y = _rational_sqrt(sum(ci * sv ** i for i, ci in enumerate(c)))
            if y:
                out[sv] = y
    return out


def _weierstrass_of_quartic(c, s0):
    """y^2 = q(s) with q(s0) = 0  ->  Y^2 = X^3 + a2 X^2 + a4 X + a6.

    s = s0 + 1/z, Y = y z^2 turns the quartic into a cubic in z; X = k3 z,
    Y' = k3 Y makes it monic.
    """
    z = sympy.Symbol("z")
    q = sum(sympy.Rational(ci.numerator, ci.denominator) * (s0 + 1 / z) ** i
            for i, ci in enumerate(c))
    cub = sympy.Poly(sympy.expand(q * z**4), z)
    k3, k2, k1, k0 = [_q(x) for x in cub.all_coeffs()]
    return k3, (k2, k1 * k3, k0 * k3 * k3)


def _ec_add(P, Q, a):
    a2, a4, _ = a
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - a2 - x1 - x2
    return (x3, -(y1 + lam * (x3 - x1)))


def quartic_points(tf: TangentFibre, height: int = 30, multiples: int = 4):
    """Rational points (s, y) on y^2 = quartic(s), y != 0.

    A small-height search gives seeds; the chord-tangent law on the
    Weierstrass model (from the rational root) generates more of them.
    """
    c = [_q(v) for v in reversed(tf.quartic.all_coeffs())]
    found = _quartic_search(c, height)
    s0 = tf.linear_root
    k3, a = _weierstrass_of_quartic(c, s0)
    seeds = []
    for sv, y in found.items():
        if sv == s0:
            continue
        zz = 1 / (sv - s0)
        seeds.append((k3 * zz, k3 * y * zz * zz))
    pts = set(seeds)
    frontier = list(seeds)
    for _ in range(multiples):
        new = []
        for P in frontier:
            for Q in seeds:
                for R in (_ec_add(P, Q, a), _ec_add(P, (Q[0], -Q[1]), a)):
                    if R is not None and R not in pts:
                        pts.add(R)
                        new.append(R)
        frontier = new[:40]
    for X, Y in pts:
        if X == 0:
            continue
        zz = X / k3
        sv = s0 + 1 / zz
        y = Y / k3 / (zz * zz)
        if y != 0 and sv not in found:
            found[sv] = abs(y)
    out = sorted(found.items(), key=lambda kv: max(abs(kv[0].numerator), kv[0].denominator))
    return [(sv, y) for sv, y in out if y != 0]


def _sheet_point(case: str, u, v, w):
    """A rational point of Z(N, eps) over (u : v : w) in the double plane, or None."""
    u, v, w = Fraction(u), Fraction(v), Fraction(w)
    if case == "3,2":
        s = u * w * w
        # (4r + (u+3v)^2)(ru - v^3) = r s as a quadratic in r
        A = 4 * u
        B = (u + 3 * v) ** 2 * u - 4 * v ** 3 - s
        C = -(u + 3 * v) ** 2 * v ** 3
        if A == 0:
            return None
        disc = B * B - 4 * A * C
        rt = _rational_sqrt(disc)
        if rt is None:
            return None
        r = (-B + rt) / (2 * A)
        return (u, v, r, s)
    if case == "5,1":
        sq = w * w
        if sq == 0:
            return None
        K = u * (u * u - 11 * u * v - v * v) + (12 * u + v) * sq
        y = _rational_sqrt(K * K - 4 * sq * (3 * u * u - 4 * u * v + 4 * sq) ** 2)
        if y is None:
            return None
        c = (K - y) / (2 * sq)
        if c == 0:
            return None
        # rescaling (u, v, w) by c, which has weight 2, makes t = c rational
        u2, v2, w2 = c * u, c * v, c * w
        s2 = w2 * w2
        t = c
        r = (3 * u2 * u2 - 4 * u2 * v2 + 4 * s2) / t
        return (t, u2, v2, r, s2)
    den = 8 * u - v + 4 * w
    if den == 0:
        return None
    r = u * u / den
    # quadratic in s from the cubic surface
    A = 16 * r - v + 4 * w
    B = 8 * r * (w - 2 * v) + 27 * r * v + w * w
    C = r * (w - 2 * v) ** 2
    if A == 0:
        return None
    rt = _rational_sqrt(B * B - 4 * A * C)
    if rt is None:
        return None
    s = (-B + rt) / (2 * A)
    return (r, s, v, w)


def end_to_end_pair(case2N, T0, s_value, bound: int = 500,
                    tf: TangentFibre | None = None) -> CongruencePair:
    """Quartic point -> (u:v:w) -> Z(N, eps) -> (x, a, b) -> a 2N-congruent pair."""
    key = case2N if isinstance(case2N, str) else f"{case2N[0]},{case2N[1]}"
    key = key.replace(" ", "").strip("()")
    case = CASE_OF_2N[key]
    tf = tf or tangent_fibration(key, T0)
    U, V, W = (_q(c) for c in _line_point(tf.line, _rat(s_value), 1))
    pt = _sheet_point(case, U, V, W)
    if pt is None:
        raise ValueError("sheet variable irrational at this point; try another point")
    if any(model_relation(case, pt)):
        raise ArithmeticError("sheet point is off the model")
    x, a, b = inverse_map(case, pt)
    E1 = short_curve(a, b)
    E2 = covariant_curve(case, a, b, x)
    N2, eps = (int(c) for c in key.split(","))
    pair = CongruencePair(E1, E2, N2, _eps_class(N2, eps),
                          source={"case2N": key, "T0": str(T0), "s": str(s_value),
                                  "uvw": [str(U), str(V), str(W)]})
    j1, j2 = pair.j_invariants()
    if j1 == j2:
        raise ValueError("point lies on the branch locus: E1 = E2")
    pair.evidence = trace_congruence_check(E1, E2, N2, bound)
    pair.disc_ratio_square = _rational_sqrt(pair.disc_ratio()) is not None
    if not pair.evidence.ok:
        raise ArithmeticError(f"trace congruence mod {N2} fails at p = {pair.evidence.first_failure}")
    if not pair.disc_ratio_square:
        raise ArithmeticError("discriminant ratio is not a square")
    return pair


def pairs_for(case2N, T_values, height: int = 40, bound: int = 500):
    """First usable pair for each T0 in T_values (skipping degenerate ones)."""
    out = []
    for T0 in T_values:
        try:
            tf = tangent_fibration(case2N, T0)
        except ValueError:
            continue
        for sv, _ in quartic_points(tf, height):
            try:
                out.append(end_to_end_pair(case2N, T0, sv, bound, tf))
                break
            except ValueError:
                continue
    return out


def rationals_by_height(max_height: int = 12):
    """Nonzero rationals ordered by height, then value."""
    vals = {Fraction(n, d) for d in range(1, max_height + 1)
            for n in range(-max_height, max_height + 1) if n and sympy.igcd(n, d) == 1}
    return sorted(vals, key=lambda q: (max(abs(q.numerator), q.denominator), q))


def first_pairs(case2N, count: int = 10, height: int = 20, bound: int = 500,
                max_T_height: int = 12):
    """Scan T0 by height until `count` verified pairs are found."""
    out = []
    for T0 in rationals_by_height(max_T_height):
        got = pairs_for(case2N, [T0], height, bound)
        out.extend(got)
        if len(out) >= count:
            break
    return out


def random_rationals(rng: random.Random, n: int, height: int = 20) -> list[Fraction]:
    out = []
    while len(out) < n:
        d = rng.randint(1, height)
        q = Fraction(rng.randint(-height, height), d)
        out.append(q)
    return out
