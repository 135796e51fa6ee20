import json
import os
from fractions import Fraction

import pytest

from ellsurf.algebra.fields import PrimeField
from ellsurf.algebra.upoly import UPoly
from ellsurf.catalog import get_surface, reference_frobenius, reference_rows
from ellsurf.kodaira import Place, poly_invariants, tate_local, trivial_lattice_charpoly
from ellsurf.mordell_weil import EllipticSurface
from ellsurf.picard import known_factor, prime_record, van_luijk
from ellsurf.zeta import (BudgetExceeded, CountCache, InsufficientData, PointCounts,
                          charpoly_from_counts, count_surface, fiber_point_count,
                          frobenius_polynomial, geometric_mw_bound, power_sums)


def _fibre(a, pi):
    c4, c6, d = poly_invariants(a)
    return tate_local(c4, c6, d, pi, Place(pi.monic()))


def _analysis(name, p):
    return EllipticSurface.from_entry(get_surface(name), p).analysis


# -- single fibres ------------------------------------------------------------------

def test_fibre_counts():
    F = PrimeField(5)
    T = UPoly([0, 1], F)
    z = UPoly([0], F)
    good = _fibre([z, z, z, UPoly([1], F), T + 1], T - 3)
    assert fiber_point_count(good, 1, 5, a_t=2) == 4
    split3 = _fibre([z, UPoly([1], F), z, z, T ** 3], T)
    assert fiber_point_count(split3, 1, 5) == 15
    split1 = _fibre([z, UPoly([1], F), z, z, T], T)
    assert split1.symbol == "I1" and fiber_point_count(split1, 1, 5) == 5
    ns2 = _fibre([z, UPoly([2], F), z, z, T ** 2], T)
    # non-split I2: both components defined over F_5, the two nodes conjugate
    assert fiber_point_count(ns2, 1, 5) == 12
    assert fiber_point_count(ns2, 2, 5) == 50


def test_smooth_fibre_needs_trace():
    F = PrimeField(5)
    T = UPoly([0, 1], F)
    z = UPoly([0], F)
    good = _fibre([z, z, z, UPoly([1], F), T + 1], T - 3)
    with pytest.raises(ValueError):
        fiber_point_count(good, 1, 5)


# -- whole-surface counts ---------------------------------------------------------------

@pytest.mark.parametrize("name, p, r, n", [("9,1", 5, 1, 84), ("9,1", 5, 2, 1050),
                                           ("12,1", 5, 1, 80)])
def test_surface_counts(name, p, r, n):
    assert count_surface(_analysis(name, p), p, r)[0] == n


@pytest.mark.parametrize("name, p, r", [("9,1", 5, 3), ("10,1", 7, 2), ("6,5", 5, 4)])
def test_bsgs_and_naive_surface_counts_agree(name, p, r):
    an = _analysis(name, p)
    naive, prov_n = count_surface(an, p, r, threshold=10 ** 9)
    fast, prov_b = count_surface(an, p, r, threshold=0)
    assert (prov_n, prov_b) == ("naive", "bsgs")
    assert naive == fast


def test_sharded_counts_agree():
    an = _analysis("9,2", 7)
    assert count_surface(an, 7, 2, shards=5)[0] == count_surface(an, 7, 2)[0]


def test_shard_budget():
    an = _analysis("9,2", 7)
    with pytest.raises(BudgetExceeded) as ei:
        count_surface(an, 7, 1, shards=4, budget=2)
    assert sorted(ei.value.partial) == [0, 1]


# -- characteristic polynomials ---------------------------------------------------------

def _counts_from(f: UPoly, p: int, R: int) -> PointCounts:
    t = power_sums(f, R)
    return PointCounts(p, {r: 1 + p ** (2 * r) + p ** r * t[r - 1] for r in range(1, R + 1)})


@pytest.mark.parametrize("entry, p", reference_rows(), ids=lambda v: getattr(v, "name", str(v)))
def test_charpoly_rebuilt_from_reference_counts(entry, p):
    f = reference_frobenius(entry.name, p)
    S = EllipticSurface.from_entry(entry, p)
    known = known_factor(S, entry, p)[0]
    got = charpoly_from_counts(_counts_from(f, p, 4), known, f.degree())
    assert got.f.coeffs == f.coeffs
    # functional equation
    assert got.f.reverse(f.degree()).coeffs == (got.f * got.sign).coeffs


def test_negative_sign_row():
    f = reference_frobenius("10,1", 17)
    assert Fraction(f.lc()) == -1
    assert f.reverse(f.degree()).coeffs == (f * -1).coeffs


def test_charpoly_needs_enough_counts():
    f = reference_frobenius("9,1", 5)
    an = _analysis("9,1", 5)
    bare = trivial_lattice_charpoly(an)
    with pytest.raises(InsufficientData):
        charpoly_from_counts(_counts_from(f, 5, 1), bare, 22)


def test_power_sums_bounded_by_b2():
    an = _analysis("9,1", 5)
    pc = PointCounts(5, {r: count_surface(an, 5, r)[0] for r in (1, 2)})
    pc.check_weil(22)
    for r, n in pc.counts.items():
        assert abs(Fraction(n - 1 - 25 ** r, 5 ** r)) <= 22


def test_weil_violation_detected():
    with pytest.raises(ArithmeticError):
        PointCounts(5, {1: 10 ** 6}).check_weil(22)


# -- cache -------------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    e = get_surface("9,1")
    S = EllipticSurface.from_entry(e, 5)
    known = known_factor(S, e, 5)[0]
    cache = CountCache(str(tmp_path))
    f1, pc1 = frobenius_polynomial(S.analysis, 5, known, "9,1", cache=cache)
    assert pc1.computed
    path = tmp_path / "9-1" / "5.json"
    doc = json.loads(path.read_text())
    assert doc["counts"]["1"] == 84
    f2, pc2 = frobenius_polynomial(S.analysis, 5, known, "9,1", cache=CountCache(str(tmp_path)))
    assert pc2.computed == [] and f2.f.coeffs == f1.f.coeffs
    assert f1.f.coeffs == reference_frobenius("9,1", 5).coeffs


def test_stale_cache_ignored(tmp_path):
    d = tmp_path / "9-1"
    os.makedirs(d)
    (d / "5.json").write_text(json.dumps({"code_version": "old", "counts": {"1": 1},
                                          "provenance": {"1": "naive"}}))
    assert CountCache(str(tmp_path)).load("9,1", 5).counts == {}


def test_time_budget(tmp_path):
    e = get_surface("9,2")
    S = EllipticSurface.from_entry(e, 13)
    known = known_factor(S, e, 13)[0]
    with pytest.raises(BudgetExceeded):
        frobenius_polynomial(S.analysis, 13, known, "9,2", cache=CountCache(str(tmp_path)),
                             time_budget=0.0)


# -- discriminants and Picard bounds ------------------------------------------------------

@pytest.mark.parametrize("name, p, bound", [("9,2", 7, 3), ("10,1", 7, 3)])
def test_geometric_mw_bound(name, p, bound, count_cache):
    rec = prime_record(get_surface(name), p, CountCache(count_cache))
    assert geometric_mw_bound(_analysis(name, p), rec.rho_p) == bound


def test_geometric_mw_bound_8_3():
    assert geometric_mw_bound(EllipticSurface.from_entry(get_surface("8,3")).analysis, 20) == 5


@pytest.mark.parametrize("entry, p", reference_rows(), ids=lambda v: getattr(v, "name", str(v)))
def test_delta_matches_reference(entry, p, count_cache):
    from ellsurf.algebra.quadratic import square_class
    rec = prime_record(entry, p, CountCache(count_cache))
    assert rec.delta == square_class(entry.delta[p])
    if rec.delta_bsd is not None:
        assert rec.delta_bsd == rec.delta_kl


def test_delta_method_choice(count_cache):
    rec = prime_record(get_surface("12,1"), 11, CountCache(count_cache))
    assert rec.method == "frobenius" and rec.assumes_tate
    rec = prime_record(get_surface("12,1"), 5, CountCache(count_cache))
    assert rec.method == "regulator" and not rec.assumes_tate


def test_van_luijk(count_cache):
    e = get_surface("9,1")
    r5, r7 = (prime_record(e, p, CountCache(count_cache)) for p in (5, 7))
    assert r5.rho_p == r7.rho_p == 20
    assert van_luijk(r5, r7) == 19
    assert van_luijk(r5, r5) is None
