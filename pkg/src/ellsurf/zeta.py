"""Point counts on the smooth surface X_p and the Frobenius polynomial on H^2.

For an elliptic surface X over F_p with b1 = 0 the trace formula reads

    n_r = |X(F_{p^r})| = 1 + p^(2r) + p^r * sum_i alpha_i^r,

where p * alpha_i run over the eigenvalues of Frobenius on H^2.  We count
n_r fibre by fibre (singular fibres through their resolved configuration),
peel off the part of the spectrum coming from known divisor classes, and
rebuild the rest with Newton's identities and the functional equation.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import numpy as np
import sympy

from .algebra.cyclotomic import CyclotomicSplit, cyclotomic_split, format_factored
from .algebra.factor import factor_over_Q
from .algebra.fields import QQ
from .algebra.quadratic import SquareClass, square_class
from .algebra.upoly import UPoly
from .curves import WModel, count_points_bsgs
from .finite_fields import ZechField, log_tables
from .kodaira import FiberData, SurfaceAnalysis

log = logging.getLogger(__name__)

CODE_VERSION = "1"
NAIVE_THRESHOLD = 4096
_BLOCK_CELLS = 1 << 21


class BudgetExceeded(RuntimeError):
    """Counting stopped early; ``partial`` maps finished shard index -> count."""

    def __init__(self, msg, partial):
        super().__init__(msg)
        self.partial = partial


class InsufficientData(ValueError):
    pass


# -- single fibres -------------------------------------------------------------

def fiber_point_count(fd: FiberData, r: int, p: int, a_t: int | None = None) -> int:
    """Points over F_{p^r} on the resolved fibre above one F_{p^r}-point of fd's place.

    ``a_t`` is only used for smooth fibres (symbol I0), where the answer is
    q + 1 - a_t.
    """
    q = p ** r
    d = fd.degree
    if r % d:
        raise ValueError(f"place of degree {d} has no points over F_{p}^{r}")
    k = r // d  # local Frobenius over F_q is (Frob_{p^d})^k
    fam, sym, sp = fd.family, fd.symbol, fd.splitting
    if sym == "I0":
        if a_t is None:
            raise ValueError("smooth fibre needs a_t")
        return q + 1 - a_t
    split = bool(sp) or k % 2 == 0
    if fam == "In":
        n = fd.n
        if split:
            return n * q if n > 1 else q
        if n == 1:
            return q + 2
        return 2 * q + 2 if n % 2 == 0 else q + 2
    if sym == "I0*":
        f = {3: 3, 1: 3 if k % 2 == 0 else 1, 0: 3 if k % 3 == 0 else 0}[sp]
        return (2 + f) * q + 1
    if sym == "II":
        return q + 1
    if sym == "III":
        return 2 * q + 1
    if sym == "IV":
        return 3 * q + 1 if split else q + 1
    if sym == "IV*":
        return 7 * q + 1 if split else 3 * q + 1
    if sym == "III*":
        return 8 * q + 1
    if sym == "II*":
        return 9 * q + 1
    raise NotImplementedError(f"point count on {sym} fibres")


# -- whole surfaces --------------------------------------------------------------

@dataclass
class PointCounts:
    p: int
    counts: dict = field(default_factory=dict)       # r -> n_r
    provenance: dict = field(default_factory=dict)   # r -> "naive" | "bsgs"
    computed: list = field(default_factory=list)     # r counted in this run (not cached)

    def check_weil(self, b2: int):
        for r, n in self.counts.items():
            q = self.p ** r
            if abs(n - 1 - q * q) > b2 * q:
                raise ArithmeticError(f"n_{r} = {n} violates the Weil bound")

    def to_dict(self) -> dict:
        return {"p": self.p, "counts": {str(r): n for r, n in sorted(self.counts.items())},
                "provenance": {str(r): v for r, v in sorted(self.provenance.items())}}


def _bad_points(an: SurfaceAnalysis, r: int, T, t_logs):
    """Map index-in-t_logs -> (FiberData or shifted place) for roots of bad places."""
    out = {}
    for fd in list(an.fibers) + list(an.smooth_shifted):
        if fd.place.is_infinite or r % fd.degree:
            continue
        vals = T.poly_eval(T.poly_logs(fd.place.poly), t_logs)
        for i in np.nonzero(vals == T.Z)[0]:
            out[int(i)] = fd
    return out


def _short_coeffs(c4: UPoly, c6: UPoly):
    return c4 * (-27), c6 * (-54)


def _count_good_block(T, A, B, lx, lx3):
    """sum over x of chi(x^3 + A x + B) for a block of (A, B) in log form."""
    v = T.add(T.add(lx3[None, :], T.mul(A[:, None], lx[None, :])), B[:, None])
    return T.chi(v).sum(axis=1)


def _shard_count(args):
    p, r, Alog, Blog, threshold = args
    T = log_tables(p, r)
    q = T.q
    if q <= threshold:
        lx = T.all_logs()
        lx3 = T.mul(T.mul(lx, lx), lx)
        total = 0
        step = max(1, _BLOCK_CELLS // q)
        for s in range(0, len(Alog), step):
            total += int((q + 1 + _count_good_block(T, Alog[s:s + step], Blog[s:s + step],
                                                    lx, lx3)).sum())
        return total
    K = ZechField(T)
    total = 0
    for A, B in zip(Alog.tolist(), Blog.tolist()):
        W = WModel([K.zero, K.zero, K.zero, A, B], K)
        total += count_points_bsgs(W, threshold=0)
    return total


def count_surface(an: SurfaceAnalysis, p: int, r: int, workers: int = 1,
                  threshold: int = NAIVE_THRESHOLD, shards: int | None = None,
                  budget: int | None = None) -> tuple[int, str]:
    """n_r = |X(F_{p^r})| for the smooth model of a surface analysed over F_p.

    Returns (n_r, provenance).  ``budget`` caps the number of shards run;
    when it is hit the completed shards are carried by BudgetExceeded.
    """
    T = log_tables(p, r)
    q = T.q
    A, B = _short_coeffs(an.c4, an.c6)
    t_logs = T.all_logs()
    Alog = T.poly_eval(T.poly_logs(A), t_logs)
    Blog = T.poly_eval(T.poly_logs(B), t_logs)
    bad = _bad_points(an, r, T, t_logs)
    total = 0
    good = np.ones(q, dtype=bool)
    for i, fd in bad.items():
        good[i] = False
        if fd.symbol == "I0":
            # minimalised smooth fibre: count the shifted model at this point
            s = fd.shift
            pi = fd.place.poly
            A2 = A.exact_div(pi ** (4 * s))
            B2 = B.exact_div(pi ** (6 * s))
            a2 = T.poly_eval(T.poly_logs(A2), t_logs[i:i + 1])
            b2 = T.poly_eval(T.poly_logs(B2), t_logs[i:i + 1])
            total += _shard_count((p, r, a2, b2, threshold))
        else:
            total += fiber_point_count(fd, r, p)
    # sanity: every other t must give a smooth fibre
    D = T.poly_eval(T.poly_logs(an.disc), t_logs)
    if np.any((D == T.Z) & good):
        raise ArithmeticError("discriminant vanishes outside the listed places")
    # the fibre at infinity
    fd_inf = next((f for f in an.fibers if f.place.is_infinite), None)
    if fd_inf is not None:
        total += fiber_point_count(fd_inf, r, p)
    else:
        e = an.e_inf
        a_inf = int(A[4 * e]) if A.degree() >= 4 * e else 0
        b_inf = int(B[6 * e]) if B.degree() >= 6 * e else 0
        total += _shard_count((p, r, np.array([T.base_log(a_inf)]),
                               np.array([T.base_log(b_inf)]), threshold))
    idx = np.nonzero(good)[0]
    n_shards = shards or max(1, workers)
    pieces = [(p, r, Alog[c], Blog[c], threshold) for c in np.array_split(idx, n_shards)]
    limit = len(pieces) if budget is None else min(budget, len(pieces))
    results = {}
    if workers > 1 and limit > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for k, v in enumerate(ex.map(_shard_count, pieces[:limit])):
                results[k] = v
    else:
        for k in range(limit):
            results[k] = _shard_count(pieces[k])
    if limit < len(pieces):
        raise BudgetExceeded(f"budget of {budget} shards exhausted", results)
    total += sum(results[k] for k in sorted(results))
    return total, ("naive" if q <= threshold else "bsgs")


class CountCache:
    """JSON cache: <dir>/<surface>/<p>.json holding {r: n_r} and provenance."""

    def __init__(self, directory: str | None):
        self.dir = directory

    def _path(self, surface: str, p: int) -> str:
        return os.path.join(self.dir, surface.replace(",", "-"), f"{p}.json")

    def load(self, surface: str, p: int) -> PointCounts:
        pc = PointCounts(p)
        if not self.dir:
            return pc
        try:
            with open(self._path(surface, p)) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            return pc
        if doc.get("code_version") != CODE_VERSION:
            log.info("ignoring stale cache for %s mod %d", surface, p)
            return pc
        pc.counts = {int(r): int(n) for r, n in doc["counts"].items()}
        pc.provenance = {int(r): v for r, v in doc["provenance"].items()}
        return pc

    def store(self, surface: str, pc: PointCounts):
        if not self.dir:
            return
        path = self._path(surface, pc.p)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        doc = {"schema_version": 1, "code_version": CODE_VERSION, "surface": surface}
        doc.update(pc.to_dict())
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(doc, fh, indent=2)
        os.replace(tmp, path)


# -- from counts to the characteristic polynomial -----------------------------------

def power_sums(f: UPoly, R: int) -> list[Fraction]:
    """s_1..s_R of the roots of f (any leading coefficient)."""
    lc = Fraction(f.lc())
    n = f.degree()
    e = [Fraction(1)] + [(-1) ** k * Fraction(f[n - k]) / lc for k in range(1, n + 1)]
    s = []
    for k in range(1, R + 1):
        v = Fraction((-1) ** (k - 1) * k) * (e[k] if k <= n else 0)
        for i in range(1, k):
            if k - i <= n:
                v += (-1) ** (k - i - 1) * e[k - i] * s[i - 1]
        s.append(v)
    return s


def _elementary_from_power_sums(s: list[Fraction]) -> list[Fraction]:
    e = [Fraction(1)]
    for k in range(1, len(s) + 1):
        v = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        e.append(v / k)
    return e


def _poly_from_elementary(e: list[Fraction]) -> UPoly:
    u = len(e) - 1
    return UPoly([(-1) ** (u - i) * e[u - i] for i in range(u + 1)], QQ)


def _roots_on_unit_circle(f: UPoly) -> bool:
    """All complex roots of f have absolute value 1 (exact, via Sturm)."""
    x = sympy.Symbol("x")
    P = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                    for c in (Fraction(v) for v in reversed(f.coeffs))], x)
    for fac, _ in P.sqf_list()[1]:
        for lin in (x - 1, x + 1):
            while fac.degree() > 0 and fac.rem(sympy.Poly(lin, x)).is_zero:
                fac = fac.quo(sympy.Poly(lin, x))
        k2 = fac.degree()
        if k2 == 0:
            continue
        c = fac.all_coeffs()
        if k2 % 2 or c != c[::-1]:
            return False
        k = k2 // 2
        # W(x) / x^k = w_k + sum_j w_{k+j} (x^j + x^-j) and x^j + x^-j = D_j(x + 1/x)
        y = sympy.Symbol("y")
        D = [sympy.Integer(2), y]
        for _ in range(2, k + 1):
            D.append(sympy.expand(y * D[-1] - D[-2]))
        w = c[::-1]
        V = w[k] + sum(w[k + j] * D[j] for j in range(1, k + 1))
        V = sympy.Poly(V, y)
        for g, _ in V.sqf_list()[1]:
            if g.count_roots(-2, 2) != g.degree():
                return False
    return True


@dataclass
class FrobCharPoly:
    f: UPoly
    sign: int
    p: int

    @property
    def b2(self) -> int:
        return self.f.degree()

    @property
    def split(self) -> CyclotomicSplit:
        return cyclotomic_split(self.f)

    def to_text(self) -> str:
        sp = self.split
        hf = [(g * (1 / Fraction(g.lc())), e) for g, e in factor_over_Q(sp.h)] if sp.h.degree() > 0 else []
        lead = Fraction(self.f.lc())
        sign = 1 if lead > 0 else -1
        return format_factored(sp.multiplicities, hf, sign)

    def to_dict(self) -> dict:
        return {"p": self.p, "sign": self.sign, "factored": self.to_text(),
                "coefficients": [str(c) for c in self.f.coeffs]}


def charpoly_from_counts(counts: PointCounts, known: UPoly, b2: int) -> FrobCharPoly:
    """Rebuild f_p from n_1..n_R and a known divisor (Frobenius on known classes)."""
    p = counts.p
    u = b2 - known.degree()
    R = max(counts.counts) if counts.counts else 0
    if any(r not in counts.counts for r in range(1, R + 1)):
        raise InsufficientData("counts must cover r = 1..R")
    if u < 0:
        raise ValueError("known factor larger than b2")
    t = [Fraction(counts.counts[r] - 1 - p ** (2 * r), p ** r) for r in range(1, R + 1)]
    for r, tr in enumerate(t, 1):
        if abs(tr) > b2:
            raise ArithmeticError(f"power sum t_{r} out of range")
    sk = power_sums(known, R)
    s = [a - b for a, b in zip(t, sk)]
    if 2 * R + 1 < u:
        raise InsufficientData(f"need r up to {ceil((u - 1) / 2)}, have {R}")
    e_known = _elementary_from_power_sums(s)
    survivors = []
    top = min(R, u)
    for eps in (1, -1):
        # palindrome: e_{u-i} = e_u e_i with e_u = eps
        e: list = e_known[:top + 1] + [None] * (u - top)
        ok = True
        for i in range(top + 1):
            val = eps * e_known[i]
            if e[u - i] is not None and e[u - i] != val:
                ok = False
                break
            e[u - i] = val
        if not ok or any(v is None for v in e):
            continue
        # Newton data beyond u must vanish (u roots only)
        if any(e_known[k] != 0 for k in range(u + 1, len(e_known))):
            continue
        if any((v * p ** i).denominator != 1 for i, v in enumerate(e)):
            continue
        U = _poly_from_elementary(e)
        if not _roots_on_unit_circle(U):
            continue
        survivors.append(U)
    if not survivors:
        raise InsufficientData("no functional-equation sign gives a consistent polynomial")
    if len(survivors) > 1 and survivors[0] != survivors[1]:
        raise InsufficientData("both functional-equation signs fit; more counts needed")
    full = known * survivors[0]
    full = full * (1 / Fraction(full[0]))
    rev = full.reverse(b2)
    sign = 1 if rev == full else -1
    if rev != full * sign:
        raise ArithmeticError("functional equation fails")
    return FrobCharPoly(full, sign, p)


def counts_needed(b2: int, known_degree: int) -> int:
    u = b2 - known_degree
    return max(1, ceil((u - 1) / 2)) if u > 0 else 1


def frobenius_polynomial(an: SurfaceAnalysis, p: int, known: UPoly, surface: str = "",
                         r_max: int = 4, cache: CountCache | None = None, workers: int = 1,
                         threshold: int = NAIVE_THRESHOLD,
                         time_budget: float | None = None) -> tuple[FrobCharPoly, PointCounts]:
    """Count as few n_r as the known factor allows, adding more on ambiguity.

    With ``time_budget`` (seconds) no new n_r is started once the budget is
    spent; finished counts stay in the cache and BudgetExceeded is raised.
    """
    start = time.monotonic()
    cache = cache or CountCache(None)
    pc = cache.load(surface, p)
    b2 = an.b2
    r_need = counts_needed(b2, known.degree())
    r = 1
    while True:
        while r <= r_need:
            if r > r_max:
                raise InsufficientData(f"would need n_{r} but r_max = {r_max}")
            if r not in pc.counts:
                if time_budget is not None and time.monotonic() - start > time_budget:
                    raise BudgetExceeded(f"time budget spent before n_{r}", dict(pc.counts))
                n, prov = count_surface(an, p, r, workers=workers, threshold=threshold)
                pc.counts[r] = n
                pc.provenance[r] = prov
                pc.computed.append(r)
                cache.store(surface, pc)
            r += 1
        pc.check_weil(b2)
        sub = PointCounts(p, {k: pc.counts[k] for k in range(1, r_need + 1)})
        try:
            return charpoly_from_counts(sub, known, b2), pc
        except InsufficientData:
            if r_need >= r_max:
                raise
            r_need += 1


# -- Picard-number bounds -------------------------------------------------------

def rho_p_upper(f: FrobCharPoly) -> int:
    return f.split.g.degree()


def delta_p_kl(f: FrobCharPoly) -> SquareClass:
    h = f.split.h
    return square_class(abs(Fraction(h(1)) * Fraction(h(-1))))


def delta_p_bsd(analysis: SurfaceAnalysis, gram) -> SquareClass:
    from .mordell_weil import delta_from_gram
    return delta_from_gram(analysis, gram)


def geometric_mw_bound(analysis: SurfaceAnalysis, rho_p: int) -> int:
    out = rho_p - 2 - analysis.sum_mt_minus_1()
    if out < 0:
        raise ValueError("rho_p below the rank of the trivial lattice")
    return out
