"""Coefficient fields.

Every field is an object exposing arithmetic on opaque element values
(``add``, ``mul``, ``inv`` ...).  Polynomials, rational functions and
Weierstrass models are written once against this interface and reused over
Q, Q(sqrt d), F_p, F_{p^r}, residue fields and function fields.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product

import sympy


class Field:
    """Base class; subclasses provide the primitive operations."""

    zero = None
    one = None
    characteristic = 0

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    def is_zero(self, a):
        return a == self.zero

    def coerce(self, a):
        if isinstance(a, int):
            return self.from_int(a)
        return a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def sqrt(self, a):
        """A square root of ``a`` in the field, or None."""
        raise NotImplementedError

    def is_square(self, a):
        return self.sqrt(a) is not None

    def fmt(self, a) -> str:
        return str(a)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n = math.isqrt(q.numerator)
    d = math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


class RationalField(Field):
    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, a):
        return Fraction(a)

    def is_zero(self, a):
        return a == 0

    def sqrt(self, a):
        return _rational_sqrt(Fraction(a))

    def fmt(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def random_element(self, rng: random.Random, bound: int = 20):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorint(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in sympy.factorint(abs(n)).items()}


def sqrt_mod_p(a: int, p: int):
    """Tonelli-Shanks.  Returns the smaller root in [0, p) or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


class PrimeField(Field):
    """F_p with elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def pow(self, a, n):
        return pow(a, n, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, a):
        if isinstance(a, Fraction):
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return a % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def sqrt(self, a):
        return sqrt_mod_p(a, self.p)

    def quadratic_character(self, a) -> int:
        a %= self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def elements(self):
        return range(self.p)

    def random_element(self, rng: random.Random):
        return rng.randrange(self.p)

    def frobenius(self, a):
        return a

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class QuadraticField(Field):
    """Q(sqrt d), elements (s, t) meaning s + t sqrt(d), d squarefree != 1."""

    def __init__(self, d: int):
        self.d = d
        self.zero = (Fraction(0), Fraction(0))
        self.one = (Fraction(1), Fraction(0))
        self.gen = (Fraction(0), Fraction(1))

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def norm(self, a):
        return a[0] * a[0] - self.d * a[1] * a[1]

    def conj(self, a):
        return (a[0], -a[1])

    def inv(self, a):
        n = self.norm(a)
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        return (a[0] / n, -a[1] / n)

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def coerce(self, a):
        if isinstance(a, tuple):
            return (Fraction(a[0]), Fraction(a[1]))
        return (Fraction(a), Fraction(0))

    def is_zero(self, a):
        return a[0] == 0 and a[1] == 0

    def sqrt(self, a):
        if a[1] == 0:
            r = _rational_sqrt(a[0])
            if r is not None:
                return (r, Fraction(0))
            r = _rational_sqrt(a[0] / self.d)
            return None if r is None else (Fraction(0), r)
        # (x + y sqrt d)^2 = a  =>  x^2 = (a0 +- sqrt(N(a))) / 2
        n = _rational_sqrt(self.norm(a))
        if n is None:
            return None
        for x2 in ((a[0] + n) / 2, (a[0] - n) / 2):
            x = _rational_sqrt(x2)
            if x is not None and x != 0:
                return (x, a[1] / (2 * x))
        return None

    def fmt(self, a):
        s, t = QQ.fmt(a[0]), QQ.fmt(a[1])
        return f"({s} + {t}*sqrt({self.d}))"

    def __repr__(self):
        return f"QQ(sqrt({self.d}))"

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("Qsqrt", self.d))


class QuotientField(Field):
    """base[z]/(modulus) for an irreducible modulus; elements are coefficient
    tuples of length deg(modulus), lowest degree first."""

    def __init__(self, base: Field, modulus):
        from .upoly import UPoly

        if modulus.degree() < 1:
            raise ValueError("modulus must have positive degree")
        self.base = base
        self.modulus = modulus.monic()
        self.degree = self.modulus.degree()
        self.characteristic = base.characteristic
        self._red = [base.neg(c) for c in self.modulus.coeffs[:-1]]
        self.zero = tuple([base.zero] * self.degree)
        self.one = tuple([base.one] + [base.zero] * (self.degree - 1))
        self._UPoly = UPoly

    def _reduce(self, c: list):
        B = self.base
        r = self.degree
        c = list(c) + [B.zero] * max(0, r - len(c))
        for i in range(len(c) - 1, r - 1, -1):
            lead = c[i]
            if B.is_zero(lead):
                continue
            for j in range(r):
                c[i - r + j] = B.add(c[i - r + j], B.mul(lead, self._red[j]))
            c[i] = B.zero
        return tuple(c[:r])

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        out = [B.zero] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = B.add(out[i + j], B.mul(x, y))
        return self._reduce(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0")
        P = self._UPoly
        g, s, _ = P(list(a), self.base).xgcd(self.modulus)
        # g is a nonzero constant since the modulus is irreducible
        s = s * self.base.inv(g.coeffs[0])
        return self.from_poly(s)

    def from_int(self, n):
        return tuple([self.base.from_int(n)] + [self.base.zero] * (self.degree - 1))

    def from_base(self, c):
        return tuple([c] + [self.base.zero] * (self.degree - 1))

    def from_poly(self, poly):
        return self._reduce(list(poly.coeffs))

    def to_poly(self, a):
        return self._UPoly(list(a), self.base)

    def coerce(self, a):
        if isinstance(a, tuple) and len(a) == self.degree:
            return a
        return self.from_base(self.base.coerce(a))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def fmt(self, a):
        return "[" + ",".join(self.base.fmt(x) for x in a) + "]"

    def __repr__(self):
        return f"{self.base!r}[z]/({self.modulus})"


class FiniteField(QuotientField):
    """F_{p^r} = F_p[z]/(modulus).  Element iteration is in lexicographic
    order of coordinate vectors (highest coordinate most significant)."""

    def __init__(self, p: int, modulus):
        base = modulus.field if isinstance(modulus.field, PrimeField) else PrimeField(p)
        super().__init__(base, modulus)
        self.p = p
        self.order = p ** self.degree

    def elements(self):
        r = self.degree
        for digits in product(range(self.p), repeat=r):
            yield tuple(reversed(digits))

    def code(self, a) -> int:
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def decode(self, n: int):
        out = []
        for _ in range(self.degree):
            n, c = divmod(n, self.p)
            out.append(c)
        return tuple(out)

    def random_element(self, rng: random.Random):
        return self.decode(rng.randrange(self.order))

    def frobenius(self, a):
        return self.pow(a, self.p)

    def quadratic_character(self, a) -> int:
        if self.is_zero(a):
            return 0
        return 1 if self.pow(a, (self.order - 1) // 2) == self.one else -1

    def sqrt(self, a):
        """Tonelli-Shanks in F_q; returns the lexicographically smaller root
        (comparing coordinate vectors from the highest coordinate)."""
        if self.is_zero(a):
            return self.zero
        q = self.order
        if self.quadratic_character(a) != 1:
            return None
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = next(e for e in (self.decode(n) for n in range(2, q))
                 if self.quadratic_character(e) == -1)
        m, c = s, self.pow(z, t)
        u, r = self.pow(a, t), self.pow(a, (t + 1) // 2)
        while u != self.one:
            i, u2 = 0, u
            while u2 != self.one:
                u2 = self.mul(u2, u2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(b, b)
            u, r = self.mul(u, c), self.mul(r, b)
        other = self.neg(r)
        return min(r, other, key=self.code)

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and other.p == self.p
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("GFq", self.p, tuple(self.modulus.coeffs)))
