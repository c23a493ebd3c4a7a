import random
from fractions import Fraction

import numpy as np
import pytest

from gradedqft.algebra import (
    ABSORB,
    EMIT,
    LOWER,
    UPPER,
    GradedExpr,
    OpGen,
    koszul_product,
    normal_order,
    super_bracket,
)
from gradedqft.fields import FieldPoint, ModeLattice, conjugate_field, field, \
    field_supercommutator, propagator_D_total
from gradedqft.functionals import dirac_charge, four_momentum, free_hamiltonian
from gradedqft.oracle import (
    OracleError,
    OracleSpace,
    build_operator,
    product_residual,
    represent,
    residual,
)
from gradedqft.scalars import ScalarExpr

F = Fraction

BIND = {"t": 0.37, "t2": -0.11, "x": (0.2, -0.4, 0.15), "y": (-0.3, 0.05, 0.5)}


def lat2(**kw):
    masses = kw.pop("masses", {"scalar": 1, "fermion": 1, "dirac": 1})
    return ModeLattice.make([(1, 0, 0), (-1, 0, 0)], masses, **kw)


def test_fermionic_car_exact():
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",), n_max=0)
    c = build_operator(sp, OpGen(ABSORB, UPPER, "fermion", 0, (0,)))
    cd = build_operator(sp, OpGen(EMIT, LOWER, "fermion", 0, (0,)))
    anti = c @ cd + cd @ c
    assert np.array_equal(anti, np.eye(sp.dimension))
    # squares vanish identically
    assert not np.any(c @ c)
    assert not np.any(cd @ cd)


def test_cross_slot_anticommutator_vanishes_exactly():
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    c1 = build_operator(sp, OpGen(ABSORB, UPPER, "fermion", 0, (0,)))
    c2d = build_operator(sp, OpGen(EMIT, LOWER, "fermion", 1, (1,)))
    assert not np.any(c1 @ c2d + c2d @ c1)


def test_bosonic_truncation_defect():
    lat = ModeLattice.make([(1, 0, 0)], scalar_dim=1)
    sp = OracleSpace.make(lat, sectors=("scalar",), n_max=3)
    a = build_operator(sp, OpGen(ABSORB, UPPER, "scalar", 0, (0,)))
    ad = build_operator(sp, OpGen(EMIT, LOWER, "scalar", 0, (0,)))
    comm = a @ ad - ad @ a
    # identity on occupations 0..2 of the particle slot; the deviation
    # from the identity at the top state is -(n_max+1)
    occ = sp.occupations()
    part = sp.index[("scalar", 0, "p", (0,))]
    for state in range(sp.dimension):
        want = 1.0 if occ[state, part] < 3 else 1.0 - (3 + 1)
        assert comm[state, state] == want


def test_gauge_slots_carry_metric_weight():
    lat = ModeLattice.make([(1, 0, 0)], lie_dim=1)
    sp = OracleSpace.make(lat, sectors=("gauge",), n_max=1)
    for lam in range(4):
        b = build_operator(sp, OpGen(ABSORB, UPPER, "gauge", 0, (lam, 0)))
        bd = build_operator(sp, OpGen(EMIT, UPPER, "gauge", 0, (lam, 0)))
        comm = b @ bd - bd @ b
        mask = sp.safe_mask(1)
        eta = 1.0 if lam == 0 else -1.0
        sub = comm[np.ix_(mask, mask)]
        assert np.allclose(sub, eta * np.eye(sub.shape[0]))


def test_dimension_cap():
    lat = ModeLattice.make([(i, 0, 0) for i in range(1, 8)], scalar_dim=2)
    with pytest.raises(OracleError):
        OracleSpace.make(lat, sectors=("scalar",), n_max=3, cap=1024)


def test_missing_slot():
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    with pytest.raises(OracleError):
        build_operator(sp, OpGen(ABSORB, UPPER, "ghost", 0, (0,)))


def _random_word(rng, sectors, n_int=2, modes=2, length=3):
    gens = []
    for _ in range(length):
        sector = rng.choice(sectors)
        species = rng.choice([ABSORB, EMIT])
        if sector in ("scalar", "fermion"):
            pos = rng.choice([UPPER, LOWER])
        elif sector == "ghost":
            pos = UPPER if species == ABSORB else LOWER
        elif sector == "antighost":
            pos = LOWER if species == ABSORB else UPPER
        gens.append(OpGen(species, pos, sector, rng.randrange(modes),
                          (rng.randrange(n_int),)))
    return GradedExpr({tuple(gens): ScalarExpr.one()})


def test_homomorphism_physical_product_randomised():
    rng = random.Random(77)
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion", "ghost", "antighost"),
                          scalar_dim=1, lie_dim=1)
    spb = OracleSpace.make(lat, sectors=("scalar",), n_max=3, scalar_dim=1)
    for _ in range(40):
        a = _random_word(rng, ["fermion", "ghost", "antighost"], n_int=1,
                         length=rng.randint(1, 3))
        b = _random_word(rng, ["fermion", "ghost", "antighost"], n_int=1,
                         length=rng.randint(1, 3))
        assert product_residual(a, b, sp) < 1e-12
    for _ in range(25):
        a = _random_word(rng, ["scalar"], n_int=1, length=rng.randint(1, 3))
        b = _random_word(rng, ["scalar"], n_int=1, length=rng.randint(1, 3))
        assert product_residual(a, b, spb) < 1e-12


def test_normal_order_matches_on_fermions_without_contractions():
    # emission-only words have no contracting pairs: modified == physical
    rng = random.Random(78)
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    for _ in range(30):
        w = _random_word(rng, ["fermion"], length=3)
        gens = tuple(OpGen(EMIT, g.position, g.sector, g.mode, g.internal)
                     for g in next(iter(w.terms)))
        raw = GradedExpr({gens: ScalarExpr.one()})
        assert residual(normal_order(raw), raw, sp) < 1e-12


def test_elementary_brackets_cross_checked():
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    a = GradedExpr.of(OpGen(ABSORB, UPPER, "fermion", 0, (0,)))
    ad = GradedExpr.of(OpGen(EMIT, LOWER, "fermion", 0, (0,)))
    br = super_bracket(a, ad)
    assert residual(br, GradedExpr.unit(), sp) < 1e-15


def test_field_table_identity_numerically():
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    x = FieldPoint.make("t", "x")
    y = FieldPoint.make("t2", "y")
    f = field("fermion", 0, x, lat)
    fb = conjugate_field("fermion", 0, y, lat)
    br = super_bracket(f.expr, fb.expr)
    target = GradedExpr.unit(propagator_D_total([(1, x), (-1, y)], lat, "fermion"))
    assert residual(br, target, sp, BIND) < 1e-12


def test_scalar_hamiltonian_spectrum():
    # one bosonic mode (E = 5), internal dim 1, truncation 3: the reduced
    # H is occupation-diagonal with E/2 per quantum (the generic-sector
    # Lagrangian carries the 1/2 normalisation verbatim)
    lat = ModeLattice.make([(4, 0, 0)], {"scalar": 3}, scalar_dim=1)
    sp = OracleSpace.make(lat, sectors=("scalar",), n_max=3)
    res = free_hamiltonian("scalar", lat)
    assert res.match
    m = represent(res.reduced, sp, BIND)
    assert np.max(np.abs(m - m.conj().T)) < 1e-12
    evals = np.sort(np.linalg.eigvalsh(m).real)
    occ = sp.occupations()
    want = np.sort(2.5 * occ.sum(axis=1))
    assert np.allclose(evals, want)


def test_dirac_charge_spectrum():
    lat = ModeLattice.make([(4, 0, 0)], {"dirac": 3})
    sp = OracleSpace.make(lat, sectors=("dirac_particle", "dirac_antiparticle"))
    res = dirac_charge(lat)
    assert res.match
    m = represent(res.reduced, sp, BIND)
    assert np.max(np.abs(m - m.conj().T)) < 1e-12
    evals = np.sort(np.linalg.eigvalsh(m).real)
    occ = sp.occupations()
    part = [i for i, s in enumerate(sp.slots) if s.key[0] == "dirac_particle"]
    anti = [i for i, s in enumerate(sp.slots) if s.key[0] == "dirac_antiparticle"]
    want = np.sort((occ[:, part].sum(axis=1) - occ[:, anti].sum(axis=1)) / 6.0)
    assert np.allclose(evals, want)


def test_functional_reductions_cross_checked_numerically():
    lat = lat2(masses={"scalar": 1, "fermion": 1, "dirac": 1})
    spd = OracleSpace.make(lat, sectors=("dirac_particle", "dirac_antiparticle"))
    for lam in range(4):
        res = four_momentum("dirac", lam, lat)
        assert residual(res.reduced, res.target, spd, BIND) < 1e-12
    spg = OracleSpace.make(lat, sectors=("ghost", "antighost"), lie_dim=1)
    res = free_hamiltonian("ghost", lat)
    assert residual(res.reduced, res.target, spg, BIND) < 1e-12


def test_negative_control_sign_flip_has_large_residual():
    # flip the anti-particle absorption sign in the conjugate fermion field
    lat = lat2()
    sp = OracleSpace.make(lat, sectors=("fermion",))
    x = FieldPoint.make("t", "x")
    y = FieldPoint.make("t2", "y")
    f = field("fermion", 0, x, lat)
    fb = conjugate_field("fermion", 0, y, lat)
    # wrong conjugate: + on the absorption term
    from gradedqft.fields import conj_C_field
    fb_wrong = conj_C_field("fermion", 0, y, lat, star=True)
    target = GradedExpr.unit(propagator_D_total([(1, x), (-1, y)], lat, "fermion"))
    ok = residual(super_bracket(f.expr, fb.expr), target, sp, BIND)
    bad = residual(super_bracket(f.expr, fb_wrong.expr), target, sp, BIND)
    assert ok < 1e-12
    assert bad > 0.1
