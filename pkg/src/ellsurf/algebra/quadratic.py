"""Square classes, Hilbert symbols and rational quadratic forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import factorint

INFINITY = "inf"


@dataclass(frozen=True, order=True)
class SquareClass:
    """Class of a nonzero rational modulo squares, kept with its sign."""

    representative: int

    def __post_init__(self):
        r = self.representative
        if r == 0 or any(e > 1 for e in factorint(r).values()):
            raise ValueError(f"{r} is not a nonzero squarefree integer")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.representative * other.representative)

    def abs(self) -> "SquareClass":
        return SquareClass(abs(self.representative))

    def factors(self) -> list[int]:
        return sorted(factorint(self.representative))

    def __str__(self):
        r = self.representative
        s = "*".join(str(p) for p in self.factors()) or "1"
        return ("-" if r < 0 else "") + s


def square_class(q) -> SquareClass:
    q = Fraction(q)
    if q == 0:
        raise ValueError("square class of 0")
    n = q.numerator * q.denominator
    sign = -1 if n < 0 else 1
    rep = 1
    for p, e in factorint(n).items():
        if e % 2:
            rep *= p
    return SquareClass(sign * rep)


def _split(q: Fraction, p: int):
    """q = p^v * u with u a p-adic unit; returns (v, u)."""
    num, den, v = q.numerator, q.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _legendre(u: Fraction, p: int) -> int:
    a = u.numerator * pow(u.denominator, -1, p) % p
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_v for nonzero rationals a, b and v a prime or INFINITY."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if place == INFINITY:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    # reduce to squarefree integers: the symbol only depends on square classes
    a = square_class(a).representative
    b = square_class(b).representative
    alpha, u = _split(Fraction(a), p)
    beta, w = _split(Fraction(b), p)
    if p != 2:
        s = 1
        if (alpha * beta) % 2 and p % 4 == 3:
            s = -1
        if beta % 2:
            s *= _legendre(u, p)
        if alpha % 2:
            s *= _legendre(w, p)
        return s
    ui = u.numerator * u.denominator
    wi = w.numerator * w.denominator

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(ui % 8) * eps(wi % 8) + alpha * omega(wi % 8) + beta * omega(ui % 8)
    return -1 if e % 2 else 1


def is_local_square(q, place) -> bool:
    q = Fraction(q)
    if place == INFINITY:
        return q > 0
    p = int(place)
    v, u = _split(q, p)
    if v % 2:
        return False
    if p != 2:
        return _legendre(u, p) == 1
    return (u.numerator * u.denominator) % 8 == 1


@dataclass(frozen=True)
class QForm:
    """Quadratic form x^T G x with symmetric rational Gram matrix G."""

    gram: tuple

    def __init__(self, gram):
        g = tuple(tuple(Fraction(x) for x in row) for row in gram)
        n = len(g)
        if not 1 <= n <= 4 or any(len(r) != n for r in g):
            raise ValueError("Gram matrix must be square of size 1..4")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def dimension(self) -> int:
        return len(self.gram)

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def binary(cls, a, b, c, scale=1):
        """scale * (a u^2 + b u v + c v^2)."""
        s = Fraction(scale)
        return cls([[s * a, s * Fraction(b) / 2], [s * Fraction(b) / 2, s * c]])

    def __call__(self, *x):
        n = self.dimension
        return sum(self.gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))

    def determinant(self) -> Fraction:
        from .linalg import det

        return det([list(r) for r in self.gram])

    def direct_sum(self, other: "QForm") -> "QForm":
        n, m = self.dimension, other.dimension
        rows = [list(r) + [0] * m for r in self.gram]
        rows += [[0] * n + list(r) for r in other.gram]
        return QForm(rows)

    def scaled(self, c) -> "QForm":
        c = Fraction(c)
        return QForm([[c * x for x in r] for r in self.gram])

    def orthogonal_difference(self, other: "QForm") -> "QForm":
        """self ⊖ other, i.e. self(u) - other(x) on the direct sum."""
        return self.direct_sum(other.scaled(-1))

    def binary_coefficients(self):
        """(a, b, c) with form a u^2 + b u v + c v^2 (dimension 2)."""
        g = self.gram
        return g[0][0], 2 * g[0][1], g[1][1]

    def diagonalize(self) -> list[Fraction]:
        """Symmetric Gaussian elimination over Q."""
        a = [list(r) for r in self.gram]
        n = len(a)
        diag = []
        for k in range(n):
            if a[k][k] == 0:
                j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
                if j is not None:
                    a[k], a[j] = a[j], a[k]
                    for r in a:
                        r[k], r[j] = r[j], r[k]
                else:
                    j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                    if j is None:
                        diag.append(Fraction(0))
                        continue
                    # e_k <- e_k + e_j makes the pivot 2*a[k][j]
                    for i in range(n):
                        a[k][i] += a[j][i]
                    for i in range(n):
                        a[i][k] += a[i][j]
            piv = a[k][k]
            diag.append(piv)
            for i in range(k + 1, n):
                f = a[i][k] / piv
                if f:
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
            for i in range(k + 1, n):
                a[k][i] = Fraction(0)
                a[i][k] = Fraction(0)
        return diag

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.gram) + "]"


def _locally_isotropic(diag: list[Fraction], place) -> bool:
    n = len(diag)
    if place == INFINITY:
        return n >= 2 and any(d > 0 for d in diag) and any(d < 0 for d in diag)
    d = Fraction(1)
    for x in diag:
        d *= x
    eps = 1
    for i in range(n):
        for j in range(i + 1, n):
            eps *= hilbert_symbol(diag[i], diag[j], place)
    if n == 1:
        return False
    if n == 2:
        return is_local_square(-d, place)
    if n == 3:
        return hilbert_symbol(-1, -d, place) == eps
    if n == 4:
        return (not is_local_square(d, place)) or eps == hilbert_symbol(-1, -1, place)
    return True


def relevant_places(diag) -> list:
    primes = {2}
    for x in diag:
        primes |= set(factorint(x.numerator)) | set(factorint(x.denominator))
    primes.discard(1)
    return [INFINITY] + sorted(primes)


@dataclass
class IsotropyResult:
    isotropic: bool
    failing_places: list

    @property
    def witness(self):
        return self.failing_places[0] if self.failing_places else None

    def __bool__(self):
        return self.isotropic


def is_isotropic_over_Q(form: QForm) -> IsotropyResult:
    """Hasse-Minkowski: isotropic over Q iff isotropic at every place.

    Only infinity, 2 and primes dividing a diagonal entry can fail.
    """
    diag = form.diagonalize()
    if any(d == 0 for d in diag):
        raise ValueError("degenerate form; split off the radical first")
    failing = [v for v in relevant_places(diag) if not _locally_isotropic(diag, v)]
    return IsotropyResult(not failing, failing)


def hilbert_product_places(a, b) -> list:
    a, b = Fraction(a), Fraction(b)
    return relevant_places([a, b])
