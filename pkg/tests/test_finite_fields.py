import random

import pytest

from ellsurf.algebra.fields import PrimeField
from ellsurf.finite_fields import (ZechField, build_extension, log_tables, quadratic_character,
                                   sqrt_in_field)


def test_modulus_selection():
    F = build_extension(3, 2)
    assert [int(c) for c in F.modulus.coeffs] == [1, 0, 1]
    assert [int(c) for c in build_extension(5, 1).modulus.coeffs] == [0, 1]
    assert build_extension(7, 3).order == 343


def test_modulus_is_deterministic():
    a = build_extension(5, 4).modulus.coeffs
    b = build_extension(5, 4).modulus.coeffs
    assert a == b


def test_quadratic_character_examples():
    F = PrimeField(5)
    assert [quadratic_character(F, x) for x in (0, 2, 4)] == [0, -1, 1]


def test_sqrt_examples():
    F = PrimeField(7)
    assert sqrt_in_field(F, 4) == 2
    assert sqrt_in_field(F, 3) is None
    assert sqrt_in_field(F, 0) == 0
    K = build_extension(5, 3)
    assert sqrt_in_field(K, K.zero) == K.zero


@pytest.mark.parametrize("p, r", [(5, 3), (7, 2), (53, 2)])
def test_sqrt_of_squares(p, r):
    F = build_extension(p, r)
    rng = random.Random(p * 100 + r)
    for _ in range(1000):
        x = F.random_element(rng)
        s = sqrt_in_field(F, F.mul(x, x))
        assert F.mul(s, s) == F.mul(x, x)


@pytest.mark.parametrize("p, r", [(5, 2), (7, 2), (5, 3)])
def test_character_is_multiplicative_on_squares(p, r):
    F = build_extension(p, r)
    rng = random.Random(1)
    for _ in range(300):
        x, y = F.random_element(rng), F.random_element(rng)
        if F.is_zero(x) or F.is_zero(y):
            continue
        assert F.quadratic_character(F.mul(x, F.mul(y, y))) == F.quadratic_character(x)


@pytest.mark.parametrize("p, r", [(3, 3), (5, 2)])
def test_frobenius_is_a_ring_map(p, r):
    F = build_extension(p, r)
    els = list(F.elements())
    for a in els:
        for b in els:
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


def test_frobenius_fixes_prime_field_only():
    F = build_extension(3, 6)
    fixed = [a for a in F.elements() if F.frobenius(a) == a]
    assert len(fixed) == 3
    assert all(all(c == 0 for c in a[1:]) for a in fixed)


@pytest.mark.parametrize("p, r", [(5, 2), (7, 3), (11, 2)])
def test_zech_tables_agree_with_polynomial_field(p, r):
    T = log_tables(p, r)
    F = T.field
    assert F.modulus.coeffs == build_extension(p, r).modulus.coeffs
    Z = ZechField(T)
    rng = random.Random(r)
    for _ in range(400):
        a, b = F.random_element(rng), F.random_element(rng)
        la, lb = T.to_log(a), T.to_log(b)
        assert T.from_log(Z.add(la, lb)) == F.add(a, b)
        assert T.from_log(Z.mul(la, lb)) == F.mul(a, b)
        assert Z.quadratic_character(la) == F.quadratic_character(a)
