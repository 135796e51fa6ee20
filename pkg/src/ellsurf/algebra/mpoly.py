"""Sparse multivariate polynomials over Q (at most eight variables)."""

from __future__ import annotations

from fractions import Fraction

from .upoly import join_terms

MAX_VARS = 8


class MPoly:
    __slots__ = ("terms", "names")

    def __init__(self, terms: dict | None = None, names: tuple[str, ...] = ("x", "y")):
        if len(names) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables")
        self.names = tuple(names)
        n = len(self.names)
        self.terms = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError("exponent arity does not match variables")
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def gens(cls, names):
        names = tuple(names)
        n = len(names)
        return [cls({tuple(int(i == j) for j in range(n)): 1}, names) for i in range(n)]

    @classmethod
    def const(cls, c, names):
        return cls({(0,) * len(names): c}, names)

    def _lift(self, other):
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise ValueError("variable mismatch")
            return other
        return MPoly.const(other, self.names)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        other = self._lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = Fraction(other)
            return MPoly({e: v * c for e, v in self.terms.items()}, self.names)
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.names)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return MPoly({e: v / c for e, v in self.terms.items()}, self.names)

    def __pow__(self, n: int):
        result = MPoly.const(1, self.names)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def diff(self, i: int):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MPoly(out, self.names)

    def __call__(self, *vals):
        """Evaluate; values may be numbers or MPolys (substitution)."""
        if len(vals) != len(self.names):
            raise ValueError("wrong number of values")
        acc = 0
        cache: dict = {}
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = vals[i] ** k
                    t = cache[key] * t
            acc = t + acc
        return acc

    def subs(self, **kw):
        vals = [kw.get(n, g) for n, g in zip(self.names, MPoly.gens(self.names))]
        return self(*vals)

    def rename(self, names):
        return MPoly(self.terms, names)

    def coefficient_in(self, i: int, k: int):
        """Coefficient of the i-th variable to the power k, as an MPoly."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return MPoly(out, self.names)

    def to_upoly(self, i: int):
        """Coefficients in the i-th variable as a list of MPolys."""
        d = max((e[i] for e in self.terms), default=0)
        return [self.coefficient_in(i, k) for k in range(d + 1)]

    def sorted_terms(self):
        """Graded-lex order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            s = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k)
            parts.append((s, mono))
        return join_terms(parts)

    def __repr__(self):
        return f"MPoly({self.to_text()})"

    __str__ = to_text
