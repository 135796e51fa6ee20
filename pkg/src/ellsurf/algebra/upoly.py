"""Dense univariate polynomials and rational functions over a Field."""

from __future__ import annotations

import re
from fractions import Fraction

from .fields import QQ, Field, RationalField


class UPoly:
    """Polynomial with coefficients lowest degree first; no trailing zeros."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: Field = QQ):
        self.field = field
        c = [field.coerce(x) for x in coeffs]
        while c and field.is_zero(c[-1]):
            c.pop()
        self.coeffs = c

    @classmethod
    def _raw(cls, coeffs, field):
        # caller guarantees coefficients are field elements
        p = cls.__new__(cls)
        p.field = field
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c, field: Field = QQ):
        return cls([c], field)

    @classmethod
    def x(cls, field: Field = QQ):
        return cls._raw([field.zero, field.one], field)

    @classmethod
    def monomial(cls, n: int, c=1, field: Field = QQ):
        return cls([field.zero] * n + [field.coerce(c)], field)

    @classmethod
    def from_roots(cls, roots, field: Field = QQ):
        p = cls.constant(1, field)
        for r in roots:
            p = p * cls._raw([field.neg(field.coerce(r)), field.one], field)
        return p

    # -- basic properties -------------------------------------------------
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other], self.field)
        if len(self.coeffs) != len(other.coeffs):
            return False
        F = self.field
        return all(F.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs))

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, UPoly):
            return other
        return UPoly([other], self.field)

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return UPoly._raw(out, F)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return UPoly._raw([F.neg(c) for c in self.coeffs], F)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        F = self.field
        if not isinstance(other, UPoly):
            c = F.coerce(other)
            if F.is_zero(c):
                return UPoly._raw([], F)
            return UPoly._raw([F.mul(x, c) for x in self.coeffs], F)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly._raw([], F)
        if isinstance(F, RationalField):
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return UPoly._raw(out, F)
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return UPoly._raw(out, F)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly.constant(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def divmod(self, other: "UPoly"):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree()
        inv_lc = F.inv(other.lc())
        b = other.coeffs
        if len(r) <= db:
            return UPoly._raw([], F), UPoly._raw(r, F)
        q = [F.zero] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = F.mul(r[k + db], inv_lc)
            q[k] = c
            if F.is_zero(c):
                continue
            for j in range(db + 1):
                r[k + j] = F.sub(r[k + j], F.mul(c, b[j]))
        return UPoly._raw(q, F), UPoly._raw(r[:db], F)

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exact_div(self, other):
        q, r = self.divmod(self._lift(other))
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other) -> bool:
        return (other % self).is_zero()

    def monic(self):
        if self.is_zero():
            return self
        return self * self.field.inv(self.lc())

    def gcd(self, other):
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, s, t) with s*self + t*other = g (g not normalized)."""
        F = self.field
        r0, r1 = self, other
        s0, s1 = UPoly.constant(1, F), UPoly._raw([], F)
        t0, t1 = UPoly._raw([], F), UPoly.constant(1, F)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return r0, s0, t0

    def powmod(self, n: int, mod: "UPoly"):
        result = UPoly.constant(1, self.field) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            n >>= 1
            if n:
                base = (base * base) % mod
        return result

    def derivative(self):
        F = self.field
        return UPoly._raw([F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:], F)

    def __call__(self, x):
        """Evaluate by Horner; ``x`` may be a field element or a UPoly."""
        F = self.field
        if isinstance(x, UPoly):
            acc = UPoly._raw([], F)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = F.coerce(x)
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def eval_in(self, K: Field, x, embed=None):
        """Evaluate at an element of an extension field K."""
        embed = embed or K.coerce
        acc = K.zero
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), embed(c))
        return acc

    def reverse(self, n: int | None = None):
        """x^n * self(1/x), with n defaulting to the degree."""
        n = self.degree() if n is None else n
        if n < self.degree():
            raise ValueError("reverse degree below polynomial degree")
        c = [self.field.zero] * (n + 1 - len(self.coeffs)) + self.coeffs[::-1]
        return UPoly._raw(c, self.field)

    def valuation(self, pi: "UPoly") -> int:
        """Order of vanishing at the place generated by ``pi`` (inf for 0)."""
        if self.is_zero():
            return INF
        v, a = 0, self
        while True:
            q, r = a.divmod(pi)
            if not r.is_zero():
                return v
            a, v = q, v + 1

    def map_coeffs(self, f, field: Field):
        return UPoly([f(c) for c in self.coeffs], field)

    def sqrt(self):
        """Exact square root or None (characteristic != 2)."""
        F = self.field
        if self.is_zero():
            return self
        n = self.degree()
        if n % 2:
            return None
        lead = F.sqrt(self.lc())
        if lead is None:
            return None
        m = n // 2
        # solve for coefficients of s from the top down
        s = [F.zero] * (m + 1)
        s[m] = lead
        two_lead_inv = F.inv(F.add(lead, lead))
        for k in range(1, m + 1):
            # coefficient of x^(n-k) in s^2
            acc = self.coeffs[n - k]
            for i in range(1, k):
                acc = F.sub(acc, F.mul(s[m - i], s[m - k + i]))
            s[m - k] = F.mul(acc, two_lead_inv)
        root = UPoly._raw(s, F)
        return root if root * root == self else None

    def squarefree_part_check(self) -> bool:
        return self.gcd(self.derivative()).degree() == 0

    def is_monic(self):
        return not self.is_zero() and self.lc() == self.field.one

    # -- text -----------------------------------------------------------
    def to_text(self, var: str = "T") -> str:
        """Canonical form, e.g. ``T^2 - 4/3*T + 1``: descending degree, p/q."""
        F = self.field
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree(), -1, -1):
            c = self.coeffs[k]
            if F.is_zero(c):
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append((F.fmt(c), mono))
        return join_terms(parts)

    def __repr__(self):
        return f"UPoly({self.to_text('x')})"

    __str__ = to_text


INF = float("inf")


def join_terms(parts) -> str:
    """Render (coefficient text, monomial text) pairs with signs folded in."""
    out = []
    for cs, mono in parts:
        if mono and cs == "1":
            term = mono
        elif mono and cs == "-1":
            term = "-" + mono
        else:
            term = cs + ("*" + mono if mono else "")
        if not out:
            out.append(term)
        elif term.startswith("-"):
            out.append(" - " + term[1:])
        else:
            out.append(" + " + term)
    return "".join(out)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(?:([A-Za-z]\w*)(?:\^(\d+))?)?$")


def upoly_from_text(text: str, field: Field = QQ) -> UPoly:
    """Inverse of ``UPoly.to_text`` for rational coefficients."""
    text = text.strip()
    if text == "0":
        return UPoly([], field)
    coeffs: dict[int, Fraction] = {}
    tokens = re.split(r"\s+([+-])\s+", text)
    signs = ["+"] + tokens[1::2]
    for sign, term in zip(signs, tokens[0::2]):
        term = term.replace(" ", "")
        if term.startswith("-"):
            sign = "-" if sign == "+" else "+"
            term = term[1:]
        m = _TERM.match(term)
        if not m or not term:
            raise ValueError(f"bad term {term!r}")
        c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        k = 0 if m.group(2) is None else int(m.group(3) or 1)
        coeffs[k] = coeffs.get(k, 0) + (c if sign == "+" else -c)
    n = max(coeffs)
    return UPoly([coeffs.get(i, 0) for i in range(n + 1)], field)


class RatFunc:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly | None = None, reduce: bool = True):
        F = num.field
        if den is None:
            den = UPoly.constant(1, F)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = UPoly.constant(1, F)
            elif den.degree() > 0:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc()
            if lc != F.one:
                inv = F.inv(lc)
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree() == 0

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(self.num._lift(other))
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def valuation(self, pi: UPoly):
        if self.num.is_zero():
            return INF
        return self.num.valuation(pi) - self.den.valuation(pi)

    def valuation_at_infinity(self):
        if self.num.is_zero():
            return INF
        return self.den.degree() - self.num.degree()

    def __call__(self, x):
        F = self.field
        return F.div(self.num(x), self.den(x))

    def to_text(self, var: str = "T") -> str:
        if self.is_poly():
            return self.num.to_text(var)
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"

    def __repr__(self):
        return f"RatFunc({self.to_text('T')})"


class FunctionField(Field):
    """k(T) with elements RatFunc over k."""

    def __init__(self, base: Field):
        self.base = base
        self.characteristic = base.characteristic
        self.zero = RatFunc(UPoly([], base))
        self.one = RatFunc(UPoly.constant(1, base))
        self.T = RatFunc(UPoly.x(base))

    def from_int(self, n):
        return RatFunc(UPoly.constant(n, self.base))

    def coerce(self, a):
        if isinstance(a, RatFunc):
            return a
        if isinstance(a, UPoly):
            return RatFunc(a)
        return RatFunc(UPoly([self.base.coerce(a)], self.base))

    def is_zero(self, a):
        return a.num.is_zero()

    def eq(self, a, b):
        return a == b

    def add(self, a, b):
        if a.den == b.den:
            return RatFunc(a.num + b.num, a.den)
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)

    def sub(self, a, b):
        if a.den == b.den:
            return RatFunc(a.num - b.num, a.den)
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RatFunc(-a.num, a.den, reduce=False)

    def mul(self, a, b):
        return RatFunc(a.num * b.num, a.den * b.den)

    def inv(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of 0 in k(T)")
        return RatFunc(a.den, a.num)

    def div(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError("division by 0 in k(T)")
        return RatFunc(a.num * b.den, a.den * b.num)

    def sqrt(self, a):
        if a.is_zero():
            return a
        # normalise den monic; write a = (num*den)/den^2
        s = (a.num * a.den).sqrt()
        if s is None:
            return None
        return RatFunc(s, a.den)

    def fmt(self, a):
        return a.to_text()

    def __repr__(self):
        return f"{self.base!r}(T)"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.base == self.base

    def __hash__(self):
        return hash(("FF", self.base))
