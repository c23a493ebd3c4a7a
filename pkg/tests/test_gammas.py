import itertools
import random
from fractions import Fraction

import pytest

from gradedqft.gammas import (
    GAMMA,
    METRIC,
    DiracFrame,
    MasslessMomentumError,
    OnShellMomentum,
    SpinMatrix,
    anticommutator,
    boost_K,
    boost_K_float,
    boost_K_inverse_parts,
    boost_parts,
    dirac_adjoint,
    dirac_frame,
    gamma,
    shell_projectors,
    slash,
)
from gradedqft.scalars import GaussianRational

F = Fraction
IDENT = SpinMatrix.identity()

# engineered rational-energy momenta: (spatial, mass, energy)
PYTHAGOREAN = [
    ((F(4), F(0), F(0)), F(3), F(5)),
    ((F(0), F(3), F(0)), F(4), F(5)),
    ((F(3, 4), F(0), F(0)), F(1), F(5, 4)),
    ((F(0), F(0), F(12)), F(5), F(13)),
    ((F(2), F(3), F(6)), F(0) + F(0), None),  # massless, |p| = 7
]


def test_clifford_relations_all_pairs():
    for lam, mu in itertools.product(range(4), range(4)):
        want = IDENT.scale(2 * METRIC[lam]) if lam == mu else SpinMatrix.zero()
        assert anticommutator(gamma(lam), gamma(mu)) == want


def test_gamma_hermiticity():
    assert gamma(0).dagger() == gamma(0)
    for i in (1, 2, 3):
        assert gamma(i).dagger() == -gamma(i)


def test_gamma_index_range():
    with pytest.raises(Exception):
        gamma(4)


def test_slash_squares_to_mass_squared():
    for spatial, mass, energy in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        assert p.energy_exact == energy
        s = slash(p)
        assert s @ s == IDENT.scale(mass * mass)


def test_boost_at_rest_is_identity():
    p = OnShellMomentum.make((0, 0, 0), F(7, 2))
    assert boost_K(p) == IDENT


def test_boost_rejects_massless():
    p = OnShellMomentum.make((1, 0, 0), 0)
    with pytest.raises(MasslessMomentumError):
        boost_K(p)
    with pytest.raises(MasslessMomentumError):
        shell_projectors(p)


def test_boost_inverse_is_dirac_adjoint():
    for spatial, mass, _ in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        d, m = boost_parts(p)
        di, mi = boost_K_inverse_parts(p)
        assert d == di
        # M * gamma0 M gamma0 = D * identity, so K^-1 = gamma0 K gamma0
        assert m @ mi == IDENT.scale(d)
        assert mi == dirac_adjoint(m)


def test_boost_is_isometry_of_signature_form():
    # Gbar K = K^{-dagger} Gbar with Gbar = gamma0, i.e. K+ gamma0 K = gamma0
    for spatial, mass, _ in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        d, m = boost_parts(p)
        assert m.dagger() @ GAMMA[0] @ m == GAMMA[0].scale(d)


def test_boost_signature_unitarity_numeric_random():
    rng = random.Random(99)
    for _ in range(20):
        spatial = tuple(F(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(3))
        mass = F(rng.randint(1, 5), rng.randint(1, 3))
        p = OnShellMomentum.make(spatial, mass)
        k = boost_K_float(p)
        # adj = gamma0 K+ gamma0; check adj @ K = 1 to 1e-12
        g0 = [[complex(x) for x in r] for r in GAMMA[0].rows]
        kd = [[k[j][i].conjugate() for j in range(4)] for i in range(4)]

        def mul(a, b):
            return [[sum(a[i][l] * b[l][j] for l in range(4)) for j in range(4)]
                    for i in range(4)]

        adj = mul(mul(g0, kd), g0)
        prod = mul(adj, k)
        for i in range(4):
            for j in range(4):
                want = 1.0 if i == j else 0.0
                assert abs(prod[i][j] - want) < 1e-12


def test_shell_projectors_properties():
    for spatial, mass, _ in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        pp, pm = shell_projectors(p)
        assert pp @ pp == pp
        assert pm @ pm == pm
        assert pp @ pm == SpinMatrix.zero()
        assert pp + pm == IDENT
        assert pp.trace() == GaussianRational(2)
        assert pm.trace() == GaussianRational(2)


def test_rest_frame_projectors():
    p = OnShellMomentum.make((0, 0, 0), F(2))
    pp, pm = shell_projectors(p)
    assert pp == SpinMatrix.diagonal([1, 1, 0, 0])
    assert pm == SpinMatrix.diagonal([0, 0, 1, 1])


def test_boost_conjugates_gamma0_to_slash():
    # K gamma0 K^-1 = slash(p)/m drives the projector dressing
    for spatial, mass, _ in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        d, m = boost_parts(p)
        _, mi = boost_K_inverse_parts(p)
        lhs = m @ GAMMA[0] @ mi  # = D * K gamma0 K^-1
        assert lhs == slash(p).scale(d / mass)


def test_dirac_frame_spans_shell_subspaces():
    for spatial, mass, _ in PYTHAGOREAN[:4]:
        p = OnShellMomentum.make(spatial, mass)
        fr = dirac_frame(p)
        pp, pm = shell_projectors(p)
        for col in fr.u:
            assert pp.apply(col) == col
            assert pm.apply(col) == tuple([GaussianRational(0)] * 4)
        for col in fr.v:
            assert pm.apply(col) == col
            assert pp.apply(col) == tuple([GaussianRational(0)] * 4)


def test_dirac_frame_at_rest():
    # at p=0 the frame is the rest basis itself: M = 2m * identity, D = 4m^2
    fr = dirac_frame(OnShellMomentum.make((0, 0, 0), F(1)))
    doubled = IDENT.scale(2)
    assert fr == DiracFrame(F(4), (doubled.column(0), doubled.column(1)),
                            (doubled.column(2), doubled.column(3)))


def test_float_projectors_random_momenta():
    from gradedqft.gammas import shell_projectors_float
    rng = random.Random(31)
    for _ in range(10):
        spatial = tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
        p = OnShellMomentum.make(spatial, F(rng.randint(1, 4)))
        plus, minus = shell_projectors_float(p)

        def mul(a, b):
            return [[sum(a[i][l] * b[l][j] for l in range(4)) for j in range(4)]
                    for i in range(4)]

        pp = mul(plus, plus)
        pm = mul(plus, minus)
        for i in range(4):
            for j in range(4):
                assert abs(pp[i][j] - plus[i][j]) < 1e-12
                assert abs(pm[i][j]) < 1e-12
        assert abs(sum(plus[i][i] for i in range(4)) - 2.0) < 1e-12
