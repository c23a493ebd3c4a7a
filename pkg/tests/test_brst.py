import random
from fractions import Fraction

import pytest

from gradedqft.bv import (
    FiberPoly,
    NotASymmetryError,
    TheorySpec,
    brst_M_components,
    brst_operator,
    covariant_domega,
    euler_lagrange,
    ghost_lagrangian_decompose,
    ghost_number_derivation,
    horizontal_diff,
    lagrangian_gauge,
    lagrangian_ghost,
    lagrangian_matter,
    noether_current,
)
from gradedqft.lie import su2, su3, u1
from gradedqft.scalars import ScalarExpr

F = Fraction

THEORIES = {
    "u1": TheorySpec.make(u1()),
    "su2": TheorySpec.make(su2()),
    "su3": TheorySpec.make(su3()),
}


def theory(name):
    return THEORIES[name]


def test_brst_on_ghost_is_half_c_omega_omega():
    th = theory("su2")
    s = brst_operator(th)
    got = s(FiberPoly.coord(th.omega(0)))
    want = FiberPoly.word((th.omega(1), th.omega(2)))  # (1/2) eps: two terms merge
    assert got == want


def test_brst_on_antighost_and_nl():
    th = theory("su2")
    s = brst_operator(th)
    assert s(FiberPoly.coord(th.omegabar(1))) == FiberPoly.coord(th.nl(1))
    assert s(FiberPoly.coord(th.nl(1))).is_zero()
    assert s(s(FiberPoly.coord(th.omegabar(1)))).is_zero()


def test_brst_on_gauge_field_is_covariant_gradient():
    th = theory("su2")
    s = brst_operator(th)
    for li in range(3):
        for lam in range(4):
            assert s(FiberPoly.coord(th.a_gauge(li, lam))) == \
                covariant_domega(th, li, lam)


def test_brst_kills_antifields():
    th = theory("su2")
    s = brst_operator(th)
    anti = FiberPoly.coord(th.omega(0).partner())
    assert s(anti).is_zero()


@pytest.mark.parametrize("name", ["u1", "su2", "su3"])
def test_brst_squares_to_zero_on_generators(name):
    th = theory(name)
    s = brst_operator(th)
    for c in th.all_base_coords():
        assert s(s(FiberPoly.coord(c))).is_zero(), c
    # and on first jets
    for c in (th.psi(0, 0, (1,)), th.a_gauge(0, 2, (0,)), th.omega(0, (3,))):
        assert s(s(FiberPoly.coord(c))).is_zero(), c


@pytest.mark.parametrize("name", ["u1", "su2", "su3"])
def test_brst_squares_to_zero_on_random_polynomials(name):
    th = theory(name)
    s = brst_operator(th)
    coords = th.all_base_coords()
    coords = coords + [c.lift(1) for c in coords[: len(coords) // 2]]
    rng = random.Random(hash(name) % 10 ** 6)
    for _ in range(100):
        f = FiberPoly.zero()
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(0, 3)
            w = tuple(rng.choice(coords) for _ in range(k))
            f = f + FiberPoly.word(w, ScalarExpr.rational(rng.randint(-2, 2)))
        assert s(s(f)).is_zero()


def test_brst_grade_raises_parity():
    th = theory("su2")
    s = brst_operator(th)
    for c in (th.psi(1, 0), th.a_gauge(0, 1), th.omega(2), th.omegabar(0)):
        f = FiberPoly.coord(c)
        sf = s(f)
        if sf.is_zero():
            continue
        assert sf.parity() != f.parity()


@pytest.mark.parametrize("name", ["su2", "su3"])
def test_negative_control_corrupted_constant_breaks_nilpotency(name):
    th = theory(name)
    bad = [[[x for x in row] for row in plane] for plane in th.lie.constants]
    bad[0][0][1] = bad[0][0][1] + 1
    bad[0][1][0] = bad[0][1][0] - 1  # keep index antisymmetry: the damage is Jacobi
    s_bad = brst_operator(th, tuple(tuple(tuple(r) for r in p) for p in bad))
    broken = any(
        not s_bad(s_bad(FiberPoly.coord(th.omega(li)))).is_zero()
        for li in range(th.d_lie))
    assert broken
    # the matter sector detects the same corruption through [l, l] = c l
    assert not s_bad(s_bad(FiberPoly.coord(th.psi(0, 0)))).is_zero()


@pytest.mark.parametrize("name", ["u1", "su2"])
def test_matter_gauge_lagrangian_is_brst_invariant(name):
    th = theory(name)
    s = brst_operator(th)
    l0 = lagrangian_matter(th) + lagrangian_gauge(th)
    assert s(l0).is_zero()


def test_horizontal_diff_commutes_with_brst():
    th = theory("su2")
    s = brst_operator(th)
    for c in (th.psi(0, 1), th.a_gauge(1, 2), th.omega(0), th.omegabar(2),
              th.nl(1)):
        f = FiberPoly.coord(c)
        for lam in range(4):
            assert horizontal_diff(s(f), lam) == s(horizontal_diff(f, lam))


@pytest.mark.parametrize("name", ["u1", "su2", "su3"])
def test_ghost_lagrangian_decomposition(name):
    th = theory(name)
    dec = ghost_lagrangian_decompose(th)
    assert dec.match, dec.residual
    # xi-derivative of the residual is identically zero as well
    assert dec.residual.partial_symbol("xi").is_zero()
    assert not dec.s_k.is_zero()
    assert not dec.dh_m.is_zero()


def test_ghost_lagrangian_is_the_decomposed_form():
    th = theory("su2")
    dec = ghost_lagrangian_decompose(th)
    assert dec.lagrangian == lagrangian_ghost(th)


def test_fp_symmetry_current_is_faddeev_popov():
    th = theory("su2")
    v = ghost_number_derivation(th)
    # ghost kinetic sector of the Lagrangian (covariant derivative kept)
    lk = FiberPoly.zero()
    from gradedqft.gammas import METRIC
    for li in range(th.d_lie):
        for lam in range(4):
            lk = lk + (FiberPoly.coord(th.omegabar(li, (lam,))) *
                       covariant_domega(th, li, lam)).scale(
                           ScalarExpr.rational(METRIC[lam]))
    currents = noether_current(v, lk, None, order=1)
    for lam in range(4):
        want = FiberPoly.zero()
        for li in range(th.d_lie):
            want = want + (FiberPoly.coord(th.omegabar(li, (lam,))) *
                           FiberPoly.coord(th.omega(li))).scale(
                               ScalarExpr.rational(METRIC[lam]))
            want = want - (FiberPoly.coord(th.omegabar(li)) *
                           covariant_domega(th, li, lam)).scale(
                               ScalarExpr.rational(METRIC[lam]))
        assert currents[lam] == want


def test_not_a_symmetry_reports_residual():
    th = theory("u1")
    v = ghost_number_derivation(th)
    # a lone antighost bilinear carries ghost number -2: not a symmetry
    bad_l = FiberPoly.coord(th.omegabar(0)) * FiberPoly.coord(th.omegabar(0, (1,)))
    with pytest.raises(NotASymmetryError) as exc:
        noether_current(v, bad_l, None, order=1)
    assert exc.value.residual is not None and not exc.value.residual.is_zero()


def test_adding_dh_m_preserves_current():
    # v = ghost number, L = free ghost kinetic term, M = the ghost form:
    # delta[v] M = 0, so the order-2 current of L + d_H M equals the
    # order-1 current of L
    th = theory("su2")
    v = ghost_number_derivation(th)
    from gradedqft.gammas import METRIC
    lk = FiberPoly.zero()
    for li in range(th.d_lie):
        for lam in range(4):
            lk = lk + (FiberPoly.coord(th.omegabar(li, (lam,))) *
                       covariant_domega(th, li, lam)).scale(
                           ScalarExpr.rational(METRIC[lam]))
    m_forms = brst_M_components(th)
    l2 = lk
    for lam in range(4):
        l2 = l2 + horizontal_diff(m_forms[lam], lam)
    j1 = noether_current(v, lk, None, order=1)
    n2 = [v(m_forms[lam]) for lam in range(4)]
    j2 = noether_current(v, l2, n2, order=2)
    for lam in range(4):
        assert j1[lam] == j2[lam]


def test_brst_currents_of_equivalent_lagrangians_agree():
    # L = L0 + Lghost (first order, N = S M) and L' = L0 + S K
    # (second order, N = 0) yield the same BRST current
    th = theory("su2")
    s = brst_operator(th)
    dec = ghost_lagrangian_decompose(th)
    l0 = lagrangian_matter(th) + lagrangian_gauge(th)
    l_full = l0 + dec.lagrangian
    m_forms = brst_M_components(th)
    n_forms = [s(m) for m in m_forms]
    j1 = noether_current(s, l_full, n_forms, order=1)
    l_prime = l0 + dec.s_k
    j2 = noether_current(s, l_prime, None, order=2)
    for lam in range(4):
        assert j1[lam] == j2[lam]


def test_euler_lagrange_of_nl_field_gives_gauge_condition():
    # E_{n_I}(L_ghost) = f^I + xi n^I: the auxiliary field equation
    th = theory("u1")
    e = euler_lagrange(lagrangian_ghost(th), th.nl(0), order=1)
    from gradedqft.bv import gauge_fix_f
    want = gauge_fix_f(th, 0) + FiberPoly.coord(th.nl(0), ScalarExpr.symbol("xi"))
    assert e == want
