"""The catalogued surfaces Z(N, eps) with their section data and reference rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import re
from typing import Optional

import sympy

from .algebra.factor import from_sympy
from .algebra.fields import QQ
from .algebra.upoly import RatFunc, UPoly

_T = sympy.Symbol("T")


def poly(text: str) -> UPoly:
    return from_sympy(sympy.expand(sympy.sympify(text, locals={"T": _T})), _T)


def ratfunc(text: str) -> RatFunc:
    num, den = sympy.fraction(sympy.together(sympy.sympify(text, locals={"T": _T})))
    return RatFunc(from_sympy(sympy.expand(num), _T), from_sympy(sympy.expand(den), _T))


@dataclass(frozen=True)
class ModPoint:
    """A section of the reduction mod p, as printed (y may be elided)."""
    label: str
    p: int
    x: str
    y: Optional[str] = None
    # orientation of an elided y: -1 takes the negative of the canonical lift,
    # so that the printed regulator forms come out with the published cross term
    y_sign: int = 1


@dataclass(frozen=True)
class PicardPlan:
    method: str                       # "hodge", "van_luijk", "refine_by_two"
    primes: tuple = ()
    # refine_by_two: generators of E_p(F_p(T)) per prime, as labels
    fixed: tuple = ()                 # labels of listed sections kept fixed
    pencils: dict = field(default_factory=dict)   # p -> (label A, label B)
    extra: dict = field(default_factory=dict)     # p -> labels of extra mod-p points


@dataclass(frozen=True)
class SurfaceEntry:
    id: tuple
    a_text: tuple
    kind: str                         # "K3" or "properly-elliptic"
    rational_x: tuple
    quadratic_sections: tuple                     # (d, x, y-or-None)
    fibers: tuple                     # reference rows: (symbol, orbit size)
    tors: int
    rank_q: int
    rank_qbar: int
    rho: int
    frobenius: dict                   # p -> reference f_p text
    delta: dict                       # p -> reference square class
    picard: PicardPlan
    mod_points: tuple = ()
    forms: dict = field(default_factory=dict)   # p -> (scale, a, b, c) reference
    moduli_route: str = "external"

    @property
    def name(self) -> str:
        return f"{self.id[0]},{self.id[1]}"

    @property
    def N(self) -> int:
        return self.id[0]

    @property
    def eps(self) -> int:
        return self.id[1]

    @property
    def m(self) -> int:
        return 2 if self.kind == "K3" else 3

    def a_invariants(self) -> list[UPoly]:
        return _a_invariants(self.a_text)

    def rational_sections(self) -> list[RatFunc]:
        return [ratfunc(x) for x in self.rational_x]

    def mod_point(self, label: str) -> ModPoint:
        for P in self.mod_points:
            if P.label == label:
                return P
        raise KeyError(label)


@lru_cache(maxsize=None)
def _a_invariants(a_text) -> list[UPoly]:
    return [poly(t) for t in a_text]


def _fib(spec: str) -> tuple:
    """'(I2,I2), I3' -> (('I2', 2), ('I3', 1))."""
    out, depth, cur = [], 0, []
    for tok in spec.replace(" ", "").split(","):
        if tok.startswith("("):
            depth, cur = 1, [tok[1:]]
            if tok.endswith(")"):
                out.append((tok[1:-1], 1))
                depth = 0
            continue
        if depth:
            if tok.endswith(")"):
                cur.append(tok[:-1])
                out.append((cur[0], len(cur)))
                depth = 0
            else:
                cur.append(tok)
            continue
        out.append((tok, 1))
    return tuple(out)


_ENTRIES = [
    SurfaceEntry(
        (6, 5),
        ("3*T*(T-2)", "-6*(T-1)*(T**3-2)", "2*(T-1)*(T+2)**2*(T**3-2)", "0", "0"),
        "K3",
        ("0", "2*T**4 - 4*T"), (),
        _fib("(I2,I2), I3, (I3,I3,I3), I4, I4"), 1, 2, 2, 20, {}, {},
        PicardPlan("hodge"), moduli_route="tangent-chain"),
    SurfaceEntry(
        (7, 3),
        ("0", "4*T**4 + 4*T**3 - 51*T**2 - 2*T - 50", "0",
         "(6*T + 25)*(52*T**2 - 4*T + 25)", "0"),
        "K3",
        ("4*T**2 + 20*T + 25", "6*T + 25"), (),
        _fib("I1, I2, (I2,I2), (I2,I2), I3, I10"), 2, 2, 2, 20, {}, {},
        PicardPlan("hodge")),
    SurfaceEntry(
        (8, 3),
        ("0", "-(3*T**2 - 7)", "0", "-4*T**2*(4*T**4 - 15)", "4*T**2*(53*T**4 + 81*T**2 + 162)"),
        "K3",
        ("-7", "-T**2 + 9", "-4*T**2 - 6*T", "(4*T**5 - 2*T**4 + 10*T**3 + 6*T**2 + 18*T)/(T - 1)**2"),
        ((-2, "-2*T**4 - 5*T**2 - 9", "2*T**6 + 5*T**4 + 20*T**2 + 9"),),
        _fib("(I1,I1), I2, (I2,I2), (I2,I2), (I3,I3), I0*"), 1, 4, 5, 20, {}, {},
        PicardPlan("hodge")),
    SurfaceEntry(
        (8, 5),
        ("0", "-2*(T**2 + 19)", "0", "-(4*T**2 - 49)*(T**4 - 6*T**2 + 25)", "0"),
        "K3",
        ("-4*T**2 + 49", "2*T**3 + 19*T**2 + 60*T + 63"),
        ((-3, "-2*T**3 + T**2 + 18*T - 35", "12*T**3 - 6*T**2 - 108*T + 210"),
         (-1, "16*T**2 - 196", "8*T**4 - 346*T**2 + 3038")),
        _fib("I2, I2, (I2,I2), (I2,I2), (I3,I3), I0*"), 2, 2, 4, 20, {}, {},
        PicardPlan("hodge")),
    SurfaceEntry(
        (9, 1),
        ("6*T**2 + 3*T + 2", "-(16*T**4 + 12*T**3 + 9*T**2 + 6*T + 1)",
         "T**2*(T + 1)*(4*T**3 + 9*T + 9)", "0", "0"),
        "K3",
        ("0", "4*T**4 + 2*T**3 - 2*T**2", "4*T**4 + 4*T**3 + 9*T**2 + 18*T + 9"),
        ((-3, "-(19/3)*T**4 - 15*T**3 - 9*T**2", None),),
        _fib("(I1,I1,I1), I2, (I2,I2,I2), I3, I4, I0*"), 1, 3, 4, 19,
        {5: "(x-1)^16 (x+1)^2 (x^2+x+1) (x^2+7/5x+1)",
         7: "(x-1)^18 (x+1)^2 (x^2+10/7x+1)"},
        {5: 3 * 17, 7: 2 * 3},
        PicardPlan("van_luijk", (5, 7))),
    SurfaceEntry(
        (12, 1),
        ("2*(5*T**2 + 9)", "(T**2 + 3)*(11*T**2 + 1)", "96*(T**2 + 3)*(T**2 + 1)**2", "0", "0"),
        "K3",
        ("0", "-12*T**4 - 24*T**2 - 12", "4*T**6 + 12*T**4 - 4*T**2 - 12"),
        ((-3, "-12*T**4 - 40*T**2 - 12", None), (-1, "-16*T**4 - 64*T**2 - 48", None)),
        _fib("(I1,I1,I1,I1,I1,I1,I1,I1), (I4,I4), (I4,I4)"), 1, 3, 5, 19,
        {5: "(x-1)^16 (x+1)^4 (x^2+6/5x+1)",
         11: "(x-1)^12 (x+1)^8 (x^2+6/11x+1)"},
        {5: 1, 11: 7},
        PicardPlan("van_luijk", (5, 11))),
    SurfaceEntry(
        (8, 7),
        ("0", "2*(4*T**6 - 15*T**4 + 14*T**2 - 1)", "0", "(T**2 - 1)**4*(16*T**4 - 24*T**2 + 1)", "0"),
        "properly-elliptic",
        ("4*T**6 + 4*T**5 - 9*T**4 - 10*T**3 + 4*T**2 + 6*T + 1",),
        ((-3, "-4*T**6 - 20*T**5 - 39*T**4 - 36*T**3 - 14*T**2 + 1", None),),
        _fib("I2, (I2,I2), (I2,I2), (I3,I3), I4, I8, I8"), 2, 1, 2, 30, {}, {},
        PicardPlan("hodge")),
    SurfaceEntry(
        (9, 2),
        ("3*(4*T**3 + T**2 - 2)", "-3*(T + 1)*(T**3 - 1)*(9*T**2 + 2*T + 1)",
         "(T - 1)**3*(T**3 - 1)*(4*T**3 - 3*T - 7)", "0", "0"),
        "properly-elliptic",
        ("0", "2*T**5 - 8*T**3 + 4*T**2 + 6*T - 4"), (),
        _fib("(I2,I2,I2), (I3,I3), (I3,I3,I3), I9, I0*"), 1, 2, 2, 29,
        {7: "(x-1)^24 (x+1)^2 (x^2+x+1)^2 (x^2+10/7x+1) (x^2+13/7x+1)",
         13: "(x-1)^24 (x^2+x+1)^3 (x^2+1/13x+1) (x^2+25/13x+1)"},
        {7: 2, 13: 17},
        PicardPlan("van_luijk", (7, 13), extra={7: ("Q",), 13: ("Q",)}),
        mod_points=(
            ModPoint("Q", 7, "5*T**5 + 6*T**4 + 4*T**2 + 6*T",
                     "T**7 + 3*T**6 + 6*T**3 + 2*T**2 + 2*T"),
            ModPoint("Q", 13, "4*T**6 + 8*T**5 + 3*T**4 + 7*T**3 + 5*T**2 + 10*T + 2",
                     "10*T**9 + 4*T**8 + 5*T**6 + 5*T**5 + 12*T**3 + 4*T**2 + 12"))),
    SurfaceEntry(
        (10, 1),
        ("-(3*T - 2)*(6*T**2 - 5*T - 2)", "T**2*(T - 1)*(27*T**3 - 54*T**2 + 16*T + 12)",
         "-4*T**2*(T - 1)**2*(4*T**2 - 2*T - 1)*(27*T**3 - 54*T**2 + 16*T + 12)", "0", "0"),
        "properly-elliptic",
        ("0",), (),
        _fib("(I2,I2), (I2,I2), (I3,I3,I3), I5, I10, IV"), 1, 1, 1, 28,
        {7: "(x-1)^24 (x+1)^2 (x^2+x+1)^2 (x^2+10/7x+1)^2",
         17: "-(x-1)^25 (x+1)^5 (x^2-2/17x+1) (x^2+25/17x+1)"},
        {7: 1, 17: 2 * 59},
        PicardPlan("refine_by_two", (7, 17), fixed=("P1",),
                   pencils={7: ("Q1", "Q2"), 17: ("R1", "R2")}),
        mod_points=(
            ModPoint("Q1", 7, "6*T**6 + 6*T**4 + 4*T**3 + 5*T**2",
                     "4*T**9 + 6*T**8 + 6*T**7 + T**6 + T**5 + 3*T**4"),
            ModPoint("Q2", 7, "T**6 + 5*T**5 + 6*T**4 + 4*T**3 + 5*T**2",
                     "2*T**9 + 6*T**8 + 2*T**7 + T**6 + 3*T**4"),
            ModPoint("R1", 17, "16*T**6 + 13*T**5 + 6*T**4 + 4*T**3 + 12*T**2",
                     "4*T**9 + 2*T**8 + 5*T**7 + 8*T**5 + 15*T**4"),
            ModPoint("R2", 17, "(6*T**8 + 8*T**7 + 2*T**6 + 5*T**5 + 8*T**4 + 4*T**3 + T**2)/(T + 6)**2",
                     y_sign=-1)),
        forms={7: (Fraction(2, 75), 7, -12, 18), 17: (Fraction(1, 450), 139, 76, 316)},
        moduli_route="tangent-chain"),
    SurfaceEntry(
        (10, 3),
        ("T**3 - 8*T**2 - 9*T - 8", "2*(3*T + 2)*(T**3 - T**2 - 3*T - 3)",
         "2*T**2*(T**3 - T**2 - 3*T - 3)*(7*T**2 + 2*T + 3)", "0", "0"),
        "properly-elliptic",
        ("0", "2*T**5 - 4*T**4 - 4*T**3 + 6*T", "4*T**5 - 2*T**4 - 14*T**3 - 18*T**2 - 6*T"),
        ((-3, "-7*T**6 - 23*T**5 - 30*T**4 - 15*T**3 - 9*T**2", None),),
        _fib("(I1,I1,I1), I2, (I2,I2), (I2,I2), (I3,I3,I3), I4, I4, I6"), 1, 3, 4, 28,
        {31: "(x-1)^24 (x+1)^2 (x^2+x+1)^2 (x^2+46/31x+1) (x^2+58/31x+1)",
         37: "(x-1)^28 (x+1)^2 (x^2+70/37x+1)^2"},
        {31: 2 * 5, 37: 1},
        PicardPlan("refine_by_two", (31, 37), fixed=("P1", "P2", "P3", "P4"),
                   pencils={31: ("Q1", "Q2"), 37: ("R1", "R2")}),
        mod_points=(
            ModPoint("Q1", 31, "20*T**4 + 13*T**3 + 30*T**2 + 6*T",
                     "5*T**5 + 4*T**4 + 29*T**3 + 4*T**2 + 5*T"),
            ModPoint("Q2", 31, "(7*T**6 + 12*T**5 + 9*T**4 + 19*T**2 + 13*T + 4)/(T + 29)**2",
                     y_sign=-1),
            ModPoint("R1", 37, "36*T**4 + 11*T**3 + 4*T**2",
                     "26*T**5 + 34*T**4 + 2*T**3 + 15*T**2"),
            ModPoint("R2", 37, "6*T**4 + 5*T**3 + T**2 + 26*T + 32",
                     "29*T**5 + 35*T**4 + 2*T**3 + 15*T**2 + 19*T + 10")),
        forms={31: (Fraction(5, 96), 25, -4, 52), 37: (Fraction(1, 8), 5, 0, 8)},
        moduli_route="tangent-chain"),
    SurfaceEntry(
        (11, 1),
        ("T**3 + T", "-(4*T**5 - 17*T**4 + 30*T**3 - 18*T**2 + 4)", "0",
         "T**2*(2*T - 1)*(3*T**2 - 7*T + 5)**2", "0"),
        "properly-elliptic",
        ("T**4 + 4*T**2 + 4", "3*T**2 - 7*T + 5"), (),
        _fib("(I1,I1,I1), I2, (I2,I2,I2), I3, I4, (I4,I4), I10"), 2, 2, 2, 28,
        {23: "(x-1)^28 (x+1)^2 (x^2+42/23x+1) (x^2+45/23x+1)",
         53: "(x-1)^28 (x^2+x+1) (x^2+25/53x+1) (x^2+70/53x+1)"},
        {23: 2 * 7 * 11 * 13, 53: 11 * 131},
        PicardPlan("refine_by_two", (23, 53), fixed=("P1", "P2"),
                   pencils={23: ("Q1", "Q2"), 53: ("R1", "R2")}),
        mod_points=(
            ModPoint("Q1", 23, "16*T**2 + 5*T + 5", "21*T**3 + 15*T**2 + 3*T + 18"),
            ModPoint("Q2", 23, "(18*T**6 + 5*T**5 + 5*T**4 + 22*T**3 + 9*T**2)/(T + 16)**2",
                     y_sign=-1),
            ModPoint("R1", 53, "28*T**5 + T**4 + 23*T**3 + 40*T**2 + 15*T"),
            ModPoint("R2", 53, "(49*T**6 + 44*T**5 + 38*T**4)/(T**2 + 42*T + 5)**2")),
        forms={23: (Fraction(11, 480), 57, -46, 137), 53: (Fraction(1, 240), 541, -228, 1196)}),
]

_BY_ID = {e.id: e for e in _ENTRIES}


def catalog() -> list[SurfaceEntry]:
    return list(_ENTRIES)


def get_surface(key) -> SurfaceEntry:
    """Look up by (N, eps) tuple or by a string like '9,1' / '9-1' / 'Z(9,1)'."""
    if isinstance(key, str):
        s = key.strip().removeprefix("Z").strip("()")
        parts = s.replace("-", ",").replace("_", ",").split(",")
        try:
            key = (int(parts[0]), int(parts[1]))
        except (ValueError, IndexError):
            raise KeyError(f"unknown surface {key!r}") from None
    if key not in _BY_ID:
        raise KeyError(f"unknown surface {key!r}")
    return _BY_ID[key]


def reference_rows() -> list[tuple[SurfaceEntry, int]]:
    return [(e, p) for e in _ENTRIES for p in sorted(e.frobenius)]


def reference_polynomial(text: str) -> UPoly:
    """Parse a factored row such as "-(x-1)^25 (x+1)^5 (x^2-2/17x+1)" into a UPoly in x."""
    x = sympy.Symbol("x")
    src = re.sub(r"\s+(?=\()", "*", text.strip()).replace("^", "**")
    # "2/17x" means (2/17) x
    src = re.sub(r"(\d+)/(\d+)x", r"(\1/\2)*x", src)
    expr = sympy.expand(sympy.sympify(src, locals={"x": x}))
    return from_sympy(expr, x)


def reference_frobenius(name, p: int) -> UPoly:
    return reference_polynomial(get_surface(name).frobenius[p])
