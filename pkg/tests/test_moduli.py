import random
from fractions import Fraction

import pytest
import sympy

from ellsurf import moduli as M


def _rand_q(rng, h=9):
    return Fraction(rng.randint(-h, h), rng.randint(1, h))


def _rand_curve(rng):
    while True:
        a, b = _rand_q(rng), _rand_q(rng)
        if 4 * a ** 3 + 27 * b ** 2:
            return a, b


# -- auxiliary polynomials and Klein forms ------------------------------------------

def test_aux_at_1_1():
    P = M.aux_polys(1, 1)
    at1 = {M.x_: 1}
    assert P.h.subs(at1) == 11
    assert P.j.subs(at1) == -47
    assert P.delta == -31
    assert sympy.Poly(P.k, M.x_).LM() == sympy.Poly(M.x_ ** 9, M.x_).LM()


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        M.aux_polys(-3, 2)


def _D_from_aux(case, P):
    if case == "3,2":
        return P.fx ** 3 - 27 * P.f ** 2
    if case == "5,1":
        return 4 * P.k * P.f - 3 * (P.f ** 2 + P.g) ** 2 + 32 * P.delta * (P.f ** 2 + P.g)
    return 16 * P.delta * P.f ** 4 - P.g ** 3 + 4 * (2 * P.g ** 3 - P.g ** 2 * P.j
                                                    - 4 * P.delta * P.f ** 2 * P.g)


@pytest.mark.parametrize("case", M.CASES)
def test_syzygy_and_dehomogenised_D(case):
    # the acceptance suite runs 20 points per case; a few suffice here
    rng = random.Random(case)
    for _ in range(5):
        a, b = _rand_curve(rng)
        x = _rand_q(rng)
        kd = M.klein_covariants(case, a, b)  # raises if the syzygy fails
        P = M.aux_polys(a, b)
        assert kd.dehomogenised(x)[0] == M._q(_D_from_aux(case, P).subs({M.x_: M._rat(x)}))


def test_aux_identities_at_random_points():
    rng = random.Random(1)
    for _ in range(20):
        a, b = _rand_curve(rng)
        P = M.aux_polys(a, b)  # checks j^2 = -4h^3 - 27 Delta f^2
        assert sympy.expand(P.fx ** 3 - 27 * P.f ** 2 - (P.j - 3 * P.fx * P.h)) == 0


# -- model coordinates --------------------------------------------------------------

def test_forward_example():
    assert M.forward_map("3,2", 1, 1, 1) == (-179, 44, 1331, -1830519)


@pytest.mark.parametrize("case", M.CASES)
def test_forward_lands_on_model_and_inverts(case):
    rng = random.Random(len(case) * 7 + int(case[-1]))
    done = 0
    while done < 20:
        a, b = _rand_curve(rng)
        x = _rand_q(rng)
        coords = M.forward_map(case, a, b, x)
        assert not any(M.model_relation(case, coords))
        try:
            back = M.inverse_map(case, coords)
        except ValueError:
            continue
        assert M.weighted_equal((x, a, b), back) is not None
        done += 1


def test_inverse_scaling_example():
    back = M.inverse_map("3,2", M.forward_map("3,2", 1, 1, 1))
    assert M.weighted_equal((1, 1, 1), back) == 3267


def test_weighted_equal():
    assert M.weighted_equal((1, 2, 3), (2, 8, 24)) == 2
    assert M.weighted_equal((1, 2, 3), (2, 8, 25)) is None


@pytest.mark.parametrize("case", M.CASES)
def test_points_give_congruent_pairs(case):
    rng = random.Random(3)
    got = 0
    while got < 2:
        a, b = _rand_curve(rng)
        try:
            pair = M.congruent_pair_from_point(case, a, b, _rand_q(rng), bound=150)
        except ValueError:
            continue
        assert pair.evidence.ok and pair.disc_ratio_square
        got += 1


# -- double planes and tangent lines --------------------------------------------------

@pytest.mark.parametrize("case", M.CASES)
def test_branch_cubics_are_cuspidal(case):
    for F in M.F_pm(case):
        assert sympy.Poly(F, M.u_, M.v_, M.w_).total_degree() == 3
        assert M.cusp_count(F) == (1, 1)


@pytest.mark.parametrize("case2N", ["6,5", "10,1", "10,3"])
def test_tangent_lines_are_tangent(case2N):
    rng = random.Random(case2N)
    seen = 0
    while seen < 20:
        T0 = _rand_q(rng, 20)
        try:
            tf = M.tangent_fibration(case2N, T0)
        except ValueError:
            continue
        assert tf.square.degree() == 2
        assert tf.quartic.degree() == 4
        s0 = M._rat(tf.linear_root)
        assert tf.quartic.eval(s0) == 0
        seen += 1


def test_quartic_points_lie_on_quartic():
    tf = M.tangent_fibration("10,1", 2)
    pts = M.quartic_points(tf, height=10)
    assert pts
    for s, y in pts:
        assert tf.quartic.eval(M._rat(s)) == M._rat(y) ** 2


@pytest.mark.parametrize("case2N, T0", [("6,5", 2), ("10,1", -1), ("10,3", 2)])
def test_end_to_end(case2N, T0):
    pairs = M.pairs_for(case2N, [T0], height=20, bound=300)
    assert len(pairs) == 1
    P = pairs[0]
    j1, j2 = P.j_invariants()
    assert j1 != j2 and P.evidence.ok and P.disc_ratio_square
    assert P.N == int(case2N.split(",")[0])
    assert M.two_congruence_test(j1, j2)


# -- 2-congruence and trace checks ----------------------------------------------------

def _jl(l):
    l = Fraction(l)
    return 256 * (l * l - l + 1) ** 3 / (l * l * (l - 1) ** 2)


def test_two_congruence():
    # full 2-torsion: y^2 = x(x-1)(x-l) all share the trivial 2-torsion module
    assert M.two_congruence_test(_jl(3), _jl(5))
    assert M.two_congruence_test(_jl(5), _jl(3))
    assert M.two_congruence_test(_jl(7), _jl(7))
    assert not M.two_congruence_test(M.j_invariant(1, 1), _jl(3))
    with pytest.raises(ValueError):
        M.two_congruence_test(0, 5)


def test_trace_check_rejects_unrelated_pair():
    ev = M.trace_congruence_check(M.short_curve(1, 1), M.short_curve(-1, 3), 5, 200)
    assert not ev.ok and ev.first_failure is not None


# -- involutions and j-families -----------------------------------------------------

@pytest.mark.parametrize("case", M.CASES)
def test_involutions_preserve_double_plane(case):
    rng = random.Random(11)
    Fp, Fm = M.F_pm(case)
    found = 0
    while found < 5:
        u, v, w = (rng.randint(-12, 12) for _ in range(3))
        val = (Fp * Fm).subs({M.u_: u, M.v_: v, M.w_: w})
        y = M._rational_sqrt(M._q(val))
        if y is None or y == 0:
            continue
        P = (u, v, w, y)
        try:
            i1, i2 = M.involutions(case, P)
        except ZeroDivisionError:
            continue
        assert M.on_double_plane(case, i1) and M.on_double_plane(case, i2)
        found += 1


def test_j_families():
    assert M.j_family("5,2", 1) == 125 * 27 * 17 ** 3
    T = Fraction(2, 3)
    assert M.j_family("3,1", T) == 27 * (T - 3) ** 3 * (T + 1) ** 3 / T ** 3
    with pytest.raises(KeyError):
        M.j_family("7,1", 1)
