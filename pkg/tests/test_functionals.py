from fractions import Fraction

import pytest

from gradedqft.algebra import ABSORB, EMIT, LOWER, UPPER, GradedExpr, OpGen
from gradedqft.fields import FieldPoint, ModeLattice, conjugate_field, field
from gradedqft.functionals import (
    FunctionalError,
    density_product,
    dirac_charge,
    four_momentum,
    fp_current_integral,
    free_hamiltonian,
    scalar_h_pieces,
    spatial_integral,
)
from gradedqft.scalars import ScalarExpr

F = Fraction


def lat_sym(**kw):
    masses = kw.pop("masses", {"scalar": 1, "fermion": 1, "dirac": 1})
    return ModeLattice.make([(0, 0, 0), (1, 0, 0), (-1, 0, 0)], masses, **kw)


def lat_nozero(**kw):
    masses = kw.pop("masses", {"scalar": 1, "fermion": 1, "dirac": 1})
    return ModeLattice.make([(1, 0, 0), (-1, 0, 0)], masses, **kw)


def lat_pyth(**kw):
    masses = kw.pop("masses", {"scalar": 3, "fermion": 3, "dirac": 3})
    return ModeLattice.make([(0, 0, 0), (4, 0, 0), (-4, 0, 0)], masses, **kw)


def test_plane_wave_orthogonality():
    x = FieldPoint.make("t", "x")
    lat = lat_nozero()
    f = field("scalar", 0, x, lat)
    g = field("scalar", 0, x, lat)
    prod = density_product(f, g)
    out = spatial_integral(prod, x)
    # a term survives iff its total plane-wave momentum vanishes
    # (emission contributes +p, absorption -p)
    assert out.n_terms
    for word, c in out.terms.items():
        assert len(word) == 2
        total = (F(0),) * 3
        for gen in word:
            sgn = 1 if gen.species == "emit" else -1
            total = tuple(t + sgn * pi for t, pi in
                          zip(total, lat.modes[gen.mode].momentum))
        assert total == (F(0),) * 3


def test_integrated_bilinear_single_mode():
    # integral of phibar_a phi^a on one nonzero mode, boson:
    # (2E)^{-1} (a+_a a^a + a+^a a_a), anti-normal pair reordered with +
    lat = ModeLattice.make([(4, 0, 0)], {"scalar": 3}, scalar_dim=1)
    x = FieldPoint.make("t", "x")
    dens = density_product(conjugate_field("scalar", 0, x, lat),
                           field("scalar", 0, x, lat))
    out = spatial_integral(dens, x)
    inv2e = ScalarExpr.rational(F(1, 10))
    want = GradedExpr({
        (OpGen(EMIT, LOWER, "scalar", 0, (0,)),
         OpGen(ABSORB, UPPER, "scalar", 0, (0,))): inv2e,
        (OpGen(EMIT, UPPER, "scalar", 0, (0,)),
         OpGen(ABSORB, LOWER, "scalar", 0, (0,))): inv2e,
    })
    assert out == want


def test_nonintegrable_density_flagged():
    lat = lat_nozero()
    x = FieldPoint.make("t", "x")
    y = FieldPoint.make("t", "y")
    bad = density_product(field("scalar", 0, x, lat))
    from gradedqft.scalars import NonIntegrablePhaseError
    with pytest.raises(NonIntegrablePhaseError):
        spatial_integral(bad, y)
    with pytest.raises(FunctionalError):
        density_product(field("scalar", 0, x, lat), field("scalar", 0, y, lat))


@pytest.mark.parametrize("make_lat", [lat_sym, lat_pyth])
def test_scalar_hamiltonian_reduces(make_lat):
    lat = make_lat()
    res = free_hamiltonian("scalar", lat)
    assert res.match, res.residual
    assert res.time_independent
    assert res.vacuum_expectation_zero


def test_scalar_hamiltonian_fermi_statistics():
    # same closed form for a fermionic generic field: the conjugate-field
    # minus sign and the odd reordering sign compensate
    res = free_hamiltonian("fermion", lat_sym())
    assert res.match, res.residual
    assert res.time_independent


def test_scalar_h_cross_terms_cancel_between_pieces():
    lat = lat_sym(scalar_dim=1)
    t_p, g_p, m_p = scalar_h_pieces(lat)

    def has_pair_terms(e):
        return any(
            len(w) == 2 and w[0].species == w[1].species for w in e.terms)

    # each piece alone carries aa / a+a+ terms; the sum does not
    assert has_pair_terms(t_p)
    assert has_pair_terms(g_p)
    assert has_pair_terms(m_p)
    assert not has_pair_terms(t_p + g_p + m_p)


@pytest.mark.parametrize("make_lat", [lat_sym, lat_pyth])
def test_dirac_charge_reduces(make_lat):
    res = dirac_charge(make_lat())
    assert res.match, res.residual
    assert res.time_independent
    assert res.vacuum_expectation_zero


@pytest.mark.parametrize("lam", [0, 1, 2, 3])
def test_dirac_momentum_reduces(lam):
    res = four_momentum("dirac", lam, lat_pyth())
    assert res.match, res.residual
    assert res.time_independent


@pytest.mark.parametrize("lam", [0, 1, 2, 3])
def test_ghost_momentum_reduces(lam):
    res = four_momentum("ghost", lam, lat_nozero(lie_dim=2))
    assert res.match, res.residual
    assert res.time_independent


def test_dirac_hamiltonian_equals_momentum_zero():
    lat = lat_pyth()
    h = free_hamiltonian("dirac", lat)
    p0 = four_momentum("dirac", 0, lat)
    assert h.match and p0.match
    assert h.reduced == p0.reduced


def test_ghost_hamiltonian_reduces():
    res = free_hamiltonian("ghost", lat_nozero(lie_dim=3))
    assert res.match, res.residual


def test_fp_charge_reduces_on_symmetric_lattice():
    res = fp_current_integral(0, lat_nozero(lie_dim=2))
    assert res.match, res.residual
    assert res.time_independent
    assert res.vacuum_expectation_zero


@pytest.mark.parametrize("lam", [0, 1, 2, 3])
def test_fp_current_integral_reduces_without_momentum_pairs(lam):
    # closed quadratic form holds exactly when no p/-p pair is present
    res = fp_current_integral(lam, ModeLattice.make([(1, 0, 0), (0, 2, 0)],
                                                    lie_dim=2))
    assert res.match, res.residual
    assert res.time_independent


def test_fp_spatial_cross_terms_on_symmetric_lattice():
    # with both p and -p on the lattice, the spatial current integrals keep
    # oscillating creation-creation / annihilation-annihilation pairs; only
    # the charge (lam = 0) is free of them
    res = fp_current_integral(1, lat_nozero(lie_dim=1))
    assert not res.match
    for word, c in res.residual.terms.items():
        assert len(word) == 2
        assert word[0].species == word[1].species
        assert c.has_time_dependence()


def test_fp_charge_counts_ghost_number():
    # lambda = 0 on one mode: i (g+ g - k+ k); the anti-ghost quanta enter
    # with the opposite sign to the 4-momentum case
    lat = ModeLattice.make([(1, 0, 0), (-1, 0, 0)], lie_dim=1)
    res = fp_current_integral(0, lat)
    assert res.match
    i_ = ScalarExpr.i()
    for mode in lat.modes:
        gplus = (OpGen(EMIT, LOWER, "ghost", mode.id, (0,)),
                 OpGen(ABSORB, UPPER, "ghost", mode.id, (0,)))
        kplus = (OpGen(EMIT, UPPER, "antighost", mode.id, (0,)),
                 OpGen(ABSORB, LOWER, "antighost", mode.id, (0,)))
        assert res.reduced.terms[gplus] == i_
        assert res.reduced.terms[kplus] == -i_


def test_fp_spatial_component_single_mode():
    # single mode (q,0,0): J^1 integral = -i (q/E)(g+ g - k+ k)
    lat = ModeLattice.make([(2, 0, 0)], lie_dim=1)
    res = fp_current_integral(1, lat)
    assert res.match
    gplus = (OpGen(EMIT, LOWER, "ghost", 0, (0,)),
             OpGen(ABSORB, UPPER, "ghost", 0, (0,)))
    assert res.reduced.terms[gplus] == -(ScalarExpr.i())  # q/E = 1 here


def test_negative_control_wrong_conjugate_sign_breaks_dirac_momentum():
    # rebuild the Dirac momentum with +c instead of -c in psibar: the
    # anti-particle branch flips and the reduction must fail
    lat = ModeLattice.make([(4, 0, 0), (-4, 0, 0)], {"dirac": 3})
    x = FieldPoint.make("t", "x")
    from gradedqft.fields import dirac_dressing, gen_absorb_dn, gen_emit_dn, plane_phase
    from gradedqft.functionals import dirac_momentum_target
    from gradedqft.gammas import GAMMA

    def psibar_wrong(al):
        expr = GradedExpr.zero()
        for mode in lat.modes:
            w = lat.weight("dirac", mode)
            esq = lat.energy_sq("dirac", mode)
            _, kinv = dirac_dressing(lat, mode)
            ph_m = plane_phase(+1, esq, mode.momentum, [(1, x)])
            ph_p = plane_phase(-1, esq, mode.momentum, [(1, x)])
            for aa in range(2):
                expr = expr + GradedExpr.of(
                    gen_absorb_dn("dirac_antiparticle", mode, (aa,)),
                    kinv[aa + 2][al] * w * ph_m)  # sign flipped here
                expr = expr + GradedExpr.of(
                    gen_emit_dn("dirac_particle", mode, (aa,)),
                    kinv[aa][al] * w * ph_p)
        from gradedqft.fields import FieldExpr
        return FieldExpr(expr, "dirac", al, x, lat)

    i_ = ScalarExpr.i()
    dens = GradedExpr.zero()
    for al in range(4):
        for be in range(4):
            g = GAMMA[0].rows[al][be]
            if g.is_zero():
                continue
            gs = ScalarExpr.gaussian(g)
            pb = psibar_wrong(al)
            ps = field("dirac", be, x, lat)
            dens = dens + density_product(pb.deriv(0), ps).scale(
                -(ScalarExpr.rational(F(1, 2)) * i_ * gs))
            dens = dens + density_product(pb, ps.deriv(0)).scale(
                ScalarExpr.rational(F(1, 2)) * i_ * gs)
    red = spatial_integral(dens, x)
    assert red != dirac_momentum_target(lat, 0)
