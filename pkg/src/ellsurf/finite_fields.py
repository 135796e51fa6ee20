"""Finite fields F_p and F_{p^r}, plus log/Zech tables for bulk evaluation.

Elements of ``FiniteField`` are coordinate tuples.  For counting points on
whole surfaces the same field is also available in "log form": a nonzero
element is its discrete logarithm to a fixed primitive element and zero is
the sentinel ``q - 1``.  Multiplication is then addition of logs and
addition goes through a Zech table, so every operation vectorises in numpy.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

import numpy as np

from .algebra.fields import Field, FiniteField, PrimeField, factorint, is_prime
from .algebra.upoly import UPoly

MAX_DEGREE = 12
# log tables cost ~12 bytes per element
MAX_TABLE_ORDER = 16_000_000


def _is_irreducible_rabin(f: UPoly) -> bool:
    F = f.field
    p = F.order
    n = f.degree()
    x = UPoly.x(F)
    if x.powmod(p ** n, f) != x % f:
        return False
    for q in factorint(n):
        h = x.powmod(p ** (n // q), f) - x
        if f.gcd(h).degree() != 0:
            return False
    return True


@lru_cache(maxsize=None)
def build_extension(p: int, r: int) -> FiniteField:
    """F_{p^r} with the lexicographically least monic irreducible modulus.

    Candidates x^r + c_{r-1} x^{r-1} + ... + c_0 are scanned with the vector
    (c_{r-1}, ..., c_0) increasing lexicographically.
    """
    if not is_prime(p) or p < 3:
        raise ValueError(f"{p} is not an odd prime")
    if not 1 <= r <= MAX_DEGREE:
        raise ValueError(f"extension degree {r} outside 1..{MAX_DEGREE}")
    Fp = PrimeField(p)
    if r == 1:
        return FiniteField(p, UPoly([0, 1], Fp))
    for tail in product(range(p), repeat=r):
        f = UPoly(list(reversed(tail)) + [1], Fp)
        if f[0] == 0:
            continue
        if _is_irreducible_rabin(f):
            return FiniteField(p, f)
    raise RuntimeError(f"no irreducible polynomial of degree {r} over F_{p}")


def quadratic_character(F: Field, x) -> int:
    return F.quadratic_character(x)


def sqrt_in_field(F: Field, x):
    return F.sqrt(x)


@lru_cache(maxsize=64)
def _square_table(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int8)
    chi[0] = 0
    chi[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return chi


def prime_field_character_table(p: int) -> np.ndarray:
    """chi[a] for a in [0, p): the fast path for prime fields below 2^16."""
    if p >= 1 << 16:
        raise ValueError("square table only for p < 2^16")
    return _square_table(p)


def _vec_mulconst(X: np.ndarray, c, modulus, p: int) -> np.ndarray:
    """Multiply each row of X (n x r coordinates) by the constant c."""
    n, r = X.shape
    out = np.zeros((n, 2 * r - 1), dtype=np.int64)
    for i in range(r):
        ci = int(c[i])
        if ci:
            out[:, i:i + r] += ci * X
    out %= p
    red = [(-int(m)) % p for m in modulus[:-1]]
    for k in range(2 * r - 2, r - 1, -1):
        lead = out[:, k].copy()
        if not lead.any():
            continue
        for j in range(r):
            if red[j]:
                out[:, k - r + j] = (out[:, k - r + j] + lead * red[j]) % p
        out[:, k] = 0
    return out[:, :r]


class LogTables:
    """exp/log/Zech tables of F_q for a fixed primitive element."""

    def __init__(self, F: FiniteField):
        q = F.order
        if q > MAX_TABLE_ORDER:
            raise ValueError(f"F_{q} too large for log tables")
        self.field = F
        self.p = F.p
        self.r = F.degree
        self.q = q
        self.Z = q - 1
        self.n = q - 1
        self.gen = self._primitive_element()
        self.exp = self._build_exp()
        log = np.empty(q, dtype=np.int64)
        log[self.exp] = np.arange(q - 1, dtype=np.int64)
        log[0] = self.Z
        self.log = log
        c0 = self.exp % self.p
        one_plus = self.exp - c0 + (c0 + 1) % self.p
        self.zech = log[one_plus]
        self.half = (q - 1) // 2

    def _primitive_element(self):
        F, q = self.field, self.field.order
        primes = list(factorint(q - 1))
        for code in range(1, q):
            g = F.decode(code)
            if all(F.pow(g, (q - 1) // ell) != F.one for ell in primes):
                return g
        raise RuntimeError("no primitive element")

    def _build_exp(self) -> np.ndarray:
        F = self.field
        p, r, n = self.p, self.r, self.q - 1
        modulus = F.modulus.coeffs
        block = min(n, 2048)
        first = np.zeros((block, r), dtype=np.int64)
        e = F.one
        for k in range(block):
            first[k] = e
            e = F.mul(e, self.gen)
        step = e  # gen^block
        weights = p ** np.arange(r, dtype=np.int64)
        codes = np.empty(n, dtype=np.int64)
        codes[:block] = first @ weights
        G = step
        k = block
        while k < n:
            m = min(block, n - k)
            blk = _vec_mulconst(first[:m], G, modulus, p)
            codes[k:k + m] = blk @ weights
            G = F.mul(G, step)
            k += m
        return codes

    # -- scalar conversions ----------------------------------------------
    def to_log(self, a) -> int:
        return int(self.log[self.field.code(a)])

    def from_log(self, l: int):
        if l == self.Z:
            return self.field.zero
        return self.field.decode(int(self.exp[l]))

    def base_log(self, c: int) -> int:
        """log of an element of the prime field."""
        return int(self.log[c % self.p])

    def all_logs(self) -> np.ndarray:
        """Logs of every element, in code order (code 0 = zero first)."""
        return self.log

    # -- vectorised arithmetic in log form ------------------------------------
    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        res = (a + b) % self.n
        return np.where((a == self.Z) | (b == self.Z), self.Z, res)

    def add(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        Z, n = self.Z, self.n
        k = (b - a) % n
        z = self.zech[k]
        res = np.where(z == Z, Z, (a + z) % n)
        res = np.where(a == Z, b, res)
        return np.where(b == Z, a, res)

    def neg(self, a):
        a = np.asarray(a)
        return np.where(a == self.Z, self.Z, (a + self.half) % self.n)

    def chi(self, a):
        a = np.asarray(a)
        return np.where(a == self.Z, 0, 1 - 2 * (a & 1))

    def poly_eval(self, coeffs_logs, t_logs):
        """Horner evaluation; coefficients given as logs (lowest first)."""
        acc = np.full(np.shape(t_logs), self.Z, dtype=np.int64)
        for c in reversed(coeffs_logs):
            acc = self.add(self.mul(acc, t_logs), c)
        return acc

    def poly_logs(self, poly: UPoly):
        """Logs of the coefficients of a polynomial over F_p or F_q."""
        F = self.field
        out = []
        for c in poly.coeffs:
            if isinstance(c, tuple):
                out.append(self.to_log(c))
            else:
                out.append(self.base_log(int(c)))
        return out


@lru_cache(maxsize=16)
def log_tables(p: int, r: int) -> LogTables:
    return LogTables(build_extension(p, r))


class ZechField(Field):
    """Scalar field interface over log-form elements (ints)."""

    def __init__(self, tables: LogTables):
        self.t = tables
        self.order = tables.q
        self.characteristic = tables.p
        self.zero = tables.Z
        self.one = 0
        self._zech = tables.zech.tolist()
        self._n = tables.n
        self._half = tables.half

    def add(self, a, b):
        Z = self.zero
        if a == Z:
            return b
        if b == Z:
            return a
        z = self._zech[(b - a) % self._n]
        return Z if z == Z else (a + z) % self._n

    def neg(self, a):
        return a if a == self.zero else (a + self._half) % self._n

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        return (a + b) % self._n

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of 0")
        return (-a) % self._n

    def div(self, a, b):
        if b == self.zero:
            raise ZeroDivisionError("division by 0")
        if a == self.zero:
            return a
        return (a - b) % self._n

    def pow(self, a, k):
        if a == self.zero:
            return self.zero if k else self.one
        return (a * k) % self._n

    def from_int(self, n):
        return self.t.base_log(n)

    def coerce(self, a):
        return a

    def is_zero(self, a):
        return a == self.zero

    def eq(self, a, b):
        return a == b

    def sqrt(self, a):
        if a == self.zero:
            return a
        if a & 1:
            return None
        return a // 2

    def quadratic_character(self, a):
        if a == self.zero:
            return 0
        return -1 if a & 1 else 1

    def random_element(self, rng: random.Random):
        return rng.randrange(self.order)

    def elements(self):
        return range(self.order)

    def __repr__(self):
        return f"ZechGF({self.t.q})"
