import math
import random
from fractions import Fraction

import pytest

from ellsurf.algebra.fields import QQ, PrimeField
from ellsurf.curves import (INFINITY, WModel, add_points, count_points_bsgs, count_points_naive,
                            invariants, trace_of_frobenius)
from ellsurf.finite_fields import build_extension


def _brute_count(W):
    """Projective points of a general Weierstrass model by direct enumeration."""
    F = W.field
    els = list(F.elements())
    n = 1
    for x in els:
        for y in els:
            if W.is_on((x, y)):
                n += 1
    return n


def test_invariants_examples():
    assert invariants(WModel.short(1, 1)).disc == -16 * 31
    assert WModel.short(1, 1).short_disc() == -31
    assert WModel.short(-1, 0).j_invariant() == 1728
    assert WModel.short(0, 1).j_invariant() == 0


@pytest.mark.parametrize("field", [QQ, PrimeField(101)])
def test_c4_c6_disc_relation(field):
    rng = random.Random(5)
    for _ in range(100):
        W = WModel([field.coerce(rng.randint(-9, 9)) for _ in range(5)], field)
        I = W.invariants()
        lhs = field.mul(field.from_int(1728), I.disc)
        rhs = field.sub(field.pow(I.c4, 3), field.pow(I.c6, 2))
        assert field.eq(lhs, rhs)


def test_group_law_examples():
    W = WModel.short(-1, 0)
    P = (Fraction(0), Fraction(0))
    assert add_points(W, P, INFINITY) == P
    assert add_points(W, P, P) is INFINITY
    assert add_points(W, P, (Fraction(1), Fraction(0))) == (-1, 0)


def test_associativity_and_order():
    F = PrimeField(101)
    rng = random.Random(11)
    for _ in range(5):
        while True:
            W = WModel([F.coerce(rng.randrange(101)) for _ in range(5)], F)
            if not F.is_zero(W.invariants().disc):
                break
        pts = [(x, y) for x in range(101) for y in range(101) if W.is_on((x, y))]
        n = len(pts) + 1
        for _ in range(50):
            P, Q, R = (rng.choice(pts) for _ in range(3))
            assert W.add(W.add(P, Q), R) == W.add(P, W.add(Q, R))
        for P in rng.sample(pts, 5):
            assert W.mul(n, P) is INFINITY


@pytest.mark.parametrize("a, b, p, n", [(1, 0, 5, 4), (-1, 0, 7, 8), (0, 1, 7, 12)])
def test_naive_counts(a, b, p, n):
    W = WModel.short(a, b, PrimeField(p))
    assert count_points_naive(W) == n == _brute_count(W)


def test_naive_matches_brute_force_on_general_models():
    rng = random.Random(2)
    for p, r in [(5, 1), (7, 1), (5, 2), (3, 2)]:
        F = build_extension(p, r) if r > 1 else PrimeField(p)
        for _ in range(10):
            W = WModel([F.random_element(rng) for _ in range(5)], F)
            if F.is_zero(W.invariants().disc):
                continue
            assert count_points_naive(W) == _brute_count(W)


def test_bsgs_examples():
    W = WModel.short(1, 0, PrimeField(1009))
    n = count_points_bsgs(W, threshold=0)
    assert n == count_points_naive(W)
    assert abs(n - 1010) <= 2 * math.isqrt(1009) + 2
    K = build_extension(5, 4)
    W = WModel.short(K.zero, K.one, K)
    assert count_points_bsgs(W, threshold=0) == count_points_naive(W)


@pytest.mark.parametrize("p, r", [(521, 1), (5, 4), (7, 3)])
def test_bsgs_matches_naive(p, r, monkeypatch):
    import ellsurf.curves as C

    def no_fallback(W):
        raise AssertionError("BSGS fell back to enumeration")

    F = build_extension(p, r) if r > 1 else PrimeField(p)
    rng = random.Random(p + r)
    done = 0
    while done < 200:
        a, b = F.random_element(rng), F.random_element(rng)
        W = WModel([F.zero, F.zero, F.zero, a, b], F)
        if F.is_zero(W.invariants().disc):
            continue
        want = count_points_naive(W)
        with monkeypatch.context() as m:
            m.setattr(C, "count_points_naive", no_fallback)
            got = count_points_bsgs(W, threshold=0, seed=done)
        assert got == want
        done += 1


def test_traces():
    assert trace_of_frobenius(WModel.short(1, 0), 7) == 0
    assert trace_of_frobenius(WModel.short(0, 1), 7) == -4
    W = WModel([0, 0, 1, -1, 0])
    assert trace_of_frobenius(W, 5) == 6 - _brute_count(WModel([0, 0, 1, 4, 0], PrimeField(5)))
    with pytest.raises(ValueError):
        trace_of_frobenius(W, 2)


def test_hasse_bound_for_traces():
    E = WModel.short(-7, 10)
    for p in range(5, 500):
        if all(p % d for d in range(2, math.isqrt(p) + 1)):
            try:
                a = trace_of_frobenius(E, p)
            except ValueError:
                continue
            assert a * a <= 4 * p
