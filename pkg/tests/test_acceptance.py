"""Acceptance suite: one line per criterion, PASS or FAIL.

Run under pytest (the lines are repeated in the terminal summary) or
directly with ``python3 tests/test_acceptance.py``.
"""

import random
import tempfile
import time
from fractions import Fraction

import pytest

from ellsurf import moduli as M
from ellsurf.algebra.fields import PrimeField
from ellsurf.algebra.quadratic import square_class
from ellsurf.catalog import catalog, get_surface, reference_frobenius
from ellsurf.curves import WModel, count_points_bsgs, count_points_naive
from ellsurf.finite_fields import build_extension
from ellsurf.mordell_weil import EllipticSurface
from ellsurf.picard import certify_picard, prime_record, regulator_form_at
from ellsurf.verify import LARGE_PRIMES, SMALL_PRIMES, check_fibers, check_form, check_sections
from ellsurf.zeta import CountCache, count_surface, power_sums

RESULTS = {}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def cold_cache():
    # counts are recomputed from scratch here, never taken from an earlier run
    with tempfile.TemporaryDirectory() as d:
        yield d


# 1 -------------------------------------------------------------------------------

def test_criterion_1_catalog_fidelity():
    t = time.monotonic()
    checks = [check_fibers(e) for e in catalog()]
    bad = [c.name for c in checks if not c.ok]
    dt = time.monotonic() - t
    report(1, not bad and dt < 60,
           f"{len(checks) - len(bad)}/{len(checks)} surfaces match fibres, torsion, Euler total "
           f"({dt:.1f}s){' mismatches: ' + ', '.join(bad) if bad else ''}")


# 2 -------------------------------------------------------------------------------

def test_criterion_2_section_tables():
    t = time.monotonic()
    checks = [check_sections(e) for e in catalog()]
    bad = [c.name for c in checks if not c.ok]
    dt = time.monotonic() - t
    report(2, not bad and dt < 300,
           f"{len(checks) - len(bad)}/{len(checks)} surfaces: sections lift, regulators nonzero "
           f"({dt:.1f}s){' mismatches: ' + ', '.join(bad) if bad else ''}")


# 3, 4 ----------------------------------------------------------------------------

def _frobenius_rows(primes, cache):
    got, bad = [], []
    for name, ps in primes.items():
        e = get_surface(name)
        for p in ps:
            rec = prime_record(e, p, CountCache(cache))
            ok = rec.f.f.coeffs == reference_frobenius(name, p).coeffs
            (got if ok else bad).append(f"({name})/{p}")
    return got, bad


def test_criterion_3_frobenius_small(cold_cache):
    t = time.monotonic()
    got, bad = _frobenius_rows(SMALL_PRIMES, cold_cache)
    dt = time.monotonic() - t
    report(3, not bad and dt < 1800,
           f"{len(got)}/{len(got) + len(bad)} small-scope f_p equal the reference rows "
           f"({dt:.1f}s){' mismatches: ' + ', '.join(bad) if bad else ''}")


def test_criterion_4_frobenius_large(cold_cache):
    t = time.monotonic()
    got, bad = _frobenius_rows(LARGE_PRIMES, cold_cache)
    dt = time.monotonic() - t
    report(4, not bad and dt < 7200,
           f"{len(got)}/{len(got) + len(bad)} large-scope f_p equal the reference rows "
           f"({dt:.1f}s){' mismatches: ' + ', '.join(bad) if bad else ''}")


# 5 -------------------------------------------------------------------------------

DELTAS = {("9,1", 5): 3 * 17, ("9,1", 7): 2 * 3, ("12,1", 5): 1, ("12,1", 11): 7,
          ("9,2", 7): 2, ("9,2", 13): 17, ("10,1", 7): 1, ("10,1", 17): 2 * 59,
          ("10,3", 31): 2 * 5, ("10,3", 37): 1, ("11,1", 23): 2 * 7 * 11 * 13,
          ("11,1", 53): 11 * 131}


def test_criterion_5_square_classes(cold_cache):
    bad, both = [], 0
    for (name, p), want in DELTAS.items():
        rec = prime_record(get_surface(name), p, CountCache(cold_cache))
        ok = rec.delta == square_class(want)
        if rec.delta_bsd is not None:
            both += 1
            ok = ok and rec.delta_bsd == rec.delta_kl
        if not ok:
            bad.append(f"({name})/{p}: {rec.delta}")
    report(5, not bad,
           f"{len(DELTAS) - len(bad)}/{len(DELTAS)} Delta_p match; both routes agree at {both} primes"
           f"{' mismatches: ' + ', '.join(bad) if bad else ''}")


# 6 -------------------------------------------------------------------------------

FORMS = {("10,1", 7): (Fraction(2, 75), 7, -12, 18), ("10,3", 37): (Fraction(1, 8), 5, 0, 8),
         ("11,1", 23): (Fraction(11, 480), 57, -46, 137)}


def test_criterion_6_regulator_forms():
    checks = [check_form(name, p) for name, ps in LARGE_PRIMES.items() for p in ps]
    checks.append(check_form("10,1", 7))
    bad = [c.name for c in checks if not c.ok]
    for (name, p), (k, a, b, c) in FORMS.items():
        got = [Fraction(v) for v in regulator_form_at(get_surface(name), p).binary_coefficients()]
        if got != [k * a, k * b, k * c]:
            bad.append(f"({name})/{p} literal")
    report(6, not bad and len(checks) == 6,
           f"{len(checks) - len(bad)}/6 regulator forms reproduced"
           f"{' mismatches: ' + ', '.join(bad) if bad else ''}")


# 7 -------------------------------------------------------------------------------

RHO = {"6,5": 20, "7,3": 20, "8,3": 20, "8,5": 20, "9,1": 19, "12,1": 19,
       "8,7": 30, "9,2": 29, "10,1": 28, "10,3": 28, "11,1": 28}
CLOSERS = {"9,1": ("van_luijk", None), "12,1": ("van_luijk", None), "9,2": ("van_luijk", None),
           "10,1": ("refine_by_two", "3"), "10,3": ("refine_by_two", "3"),
           "11,1": ("refine_by_two", "11")}


def test_criterion_7_picard(cold_cache):
    bad = []
    for name, rho in RHO.items():
        cert = certify_picard(name, cache_dir=cold_cache)
        if cert.rho != rho:
            bad.append(f"({name}) rho={cert.rho}")
            continue
        if name in CLOSERS:
            step, place = CLOSERS[name]
            last = cert.chain[-1]
            if last["step"] != step or (place and last.get("place") != place):
                bad.append(f"({name}) closed by {last}")
    report(7, not bad,
           f"{len(RHO) - len(bad)}/{len(RHO)} Picard numbers certified with the expected closing step"
           f"{' mismatches: ' + ', '.join(bad) if bad else ''}")


# 8 -------------------------------------------------------------------------------

def test_criterion_8_moduli_chain():
    t = time.monotonic()
    summary, ok = [], True
    for case2N in ("6,5", "10,1", "10,3"):
        pairs = M.first_pairs(case2N, count=10, height=20, bound=500)
        T0s = {p.source["T0"] for p in pairs}
        good = [p for p in pairs if p.evidence.ok and p.disc_ratio_square
                and len(set(p.j_invariants())) == 2 and p.evidence.bound == 500]
        ok = ok and len(T0s) >= 10 and len(good) == len(pairs)
        summary.append(f"({case2N}) {len(good)} pairs from {len(T0s)} T0")
    dt = time.monotonic() - t
    report(8, ok and dt < 600, f"{'; '.join(summary)} ({dt:.1f}s)")


# 9 -------------------------------------------------------------------------------

def _rq(rng, h=12):
    return Fraction(rng.randint(-h, h), rng.randint(1, h))


def test_criterion_9_identities():
    t = time.monotonic()
    rng = random.Random(2024)
    bad = []
    for case in M.CASES:
        done = 0
        while done < 20:
            a, b = _rq(rng), _rq(rng)
            if 4 * a ** 3 + 27 * b ** 2 == 0:
                continue
            x = _rq(rng)
            kd = M.klein_covariants(case, a, b, check=False)
            if not kd.check_syzygy():
                bad.append(f"syzygy {case} at {a},{b}")
            P = M.aux_polys(a, b)  # raises if j^2 = -4h^3 - 27 Delta f^2 fails
            X = M._rat(x)
            fx, f, j, h = (E.subs({M.x_: X}) for E in (P.fx, P.f, P.j, P.h))
            D_klein = kd.dehomogenised(x)[0]
            if case == "3,2" and not (M._q(fx ** 3 - 27 * f ** 2) == M._q(j - 3 * fx * h) == D_klein):
                bad.append(f"D = fx^3 - 27f^2 = j - 3 fx h at {a},{b},{x}")
            if case == "5,2":
                g = P.g.subs({M.x_: X})
                dl = P.delta
                nice = 16 * dl * f ** 4 - g ** 3 + 4 * (2 * g ** 3 - g ** 2 * j - 4 * dl * f ** 2 * g)
                if M._q(nice) != D_klein:
                    bad.append(f"dehomogenised D for 5,2 at {a},{b},{x}")
            if any(M.model_relation(case, M.forward_map(case, a, b, x))):
                bad.append(f"model {case} at {a},{b},{x}")
            done += 1
    dt = time.monotonic() - t
    report(9, not bad and dt < 60,
           f"3 syzygies, aux identities and 3 model relations at 20 points each ({dt:.1f}s)"
           f"{' failures: ' + '; '.join(bad[:5]) if bad else ''}")


# 10 ------------------------------------------------------------------------------

def test_criterion_10_counting():
    rng = random.Random(10)
    agree = {}
    for p, r in ((521, 1), (5, 4), (7, 3)):
        F = build_extension(p, r) if r > 1 else PrimeField(p)
        n = 0
        while n < 200:
            a, b = F.random_element(rng), F.random_element(rng)
            W = WModel([F.zero, F.zero, F.zero, a, b], F)
            if F.is_zero(W.invariants().disc):
                continue
            if count_points_bsgs(W, threshold=0, seed=n) != count_points_naive(W):
                break
            n += 1
        agree[p ** r] = n
    # n_r = 1 + p^2r + p^r * (power sum of the roots of f_p), from the reference rows
    derived, counted = {}, {}
    for name, r in (("9,1", 1), ("9,1", 2), ("12,1", 1)):
        f = reference_frobenius(name, 5)
        derived[(name, r)] = 1 + 5 ** (2 * r) + 5 ** r * power_sums(f, r)[r - 1]
        an = EllipticSurface.from_entry(get_surface(name), 5).analysis
        counted[(name, r)] = count_surface(an, 5, r)[0]
    ok = all(v == 200 for v in agree.values()) and derived == counted
    vals = ", ".join(f"n_{r}({name})={counted[(name, r)]}" for name, r in counted)
    report(10, ok,
           f"BSGS = naive on {agree[521]}/{agree[625]}/{agree[343]} curves (q=521/625/343); "
           f"{vals} equal the trace-formula values from the reference rows "
           f"(the literal 684 and 680 in the criterion do not satisfy that formula)")


if __name__ == "__main__":
    import sys
    d = tempfile.mkdtemp()
    fails = 0
    tests = [(int(k.split("_")[2]), fn) for k, fn in globals().items()
             if k.startswith("test_criterion_")]
    for _, fn in sorted(tests, key=lambda kv: kv[0]):
        try:
            fn(d) if fn.__code__.co_argcount else fn()
        except AssertionError:
            fails += 1
    sys.exit(1 if fails else 0)
