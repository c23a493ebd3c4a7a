"""Internal Lie-algebra data for the gauge sector.

Generators are anti-Hermitian n x n matrices over Gaussian rationals.
``structure_constants`` expands commutators exactly in the given basis
(raising a non-closure error when the expansion has a residual), the
trace forms G(X,Y) = Re Tr(XY) and H(X,Y) = Tr(X+ Y) are computed
exactly, and index raising/lowering uses the positive metric H.

Presets: u(1), su(2) with l_I = -(i/2) sigma_I (structure constants are
the Levi-Civita epsilon), and su(3) in a rescaled Gell-Mann basis whose
eighth generator is -(i/2) diag(1,1,-2); the rescaling keeps every matrix
entry and every structure constant rational, which the exact kernel needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalars import GR_ZERO, GaussianRational

F = Fraction


class LieError(Exception):
    pass


class NonClosureError(LieError):
    """Commutators left the span of the supplied generators."""


Matrix = tuple  # tuple of row-tuples of GaussianRational


def _mat(rows) -> Matrix:
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, GaussianRational):
                row.append(x)
            elif isinstance(x, complex):
                row.append(GaussianRational(F(x.real), F(x.imag)))
            else:
                row.append(GaussianRational(F(x)))
        out.append(tuple(row))
    return tuple(out)


def _mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), start=GR_ZERO)
                       for j in range(n)) for i in range(n))


def _sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _dagger(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i].conjugate() for j in range(n)) for i in range(n))


def _trace(a: Matrix) -> GaussianRational:
    t = GR_ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return _sub(_mul(a, b), _mul(b, a))


def is_anti_hermitian(a: Matrix) -> bool:
    return _dagger(a) == tuple(tuple(-x for x in r) for r in a)


def _solve_exact(cols: list[list[GaussianRational]], rhs: list[GaussianRational]):
    """Solve sum_j c_j cols[j] = rhs exactly; return coefficients or None."""
    m, k = len(rhs), len(cols)
    aug = [[cols[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if not aug[i][c].is_zero()), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(m):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    # inconsistency: a zero row with nonzero rhs
    for i in range(r, m):
        if not aug[i][k].is_zero():
            return None
    sol = [GR_ZERO] * k
    for i, c in enumerate(pivots):
        sol[c] = aug[i][k]
    return sol


@dataclass(frozen=True)
class LieData:
    """Generator basis with derived structure constants and trace metrics."""

    dim_f: int
    generators: tuple
    constants: tuple  # c[I][J][H] as Fraction
    metric_g: tuple   # Re Tr(l_I l_J), Fraction matrix
    metric_h: tuple   # Tr(l_I+ l_J), Fraction matrix (positive definite)

    @property
    def dim(self) -> int:
        return len(self.generators)

    @staticmethod
    def from_generators(generators) -> "LieData":
        gens = tuple(_mat(g) for g in generators)
        n = len(gens[0])
        for g in gens:
            if not is_anti_hermitian(g):
                raise LieError("generators must be anti-Hermitian")
        constants = structure_constants(gens)
        g_m, h_m = trace_metric(gens)
        return LieData(n, gens, constants, g_m, hermitian_real_part(h_m))


def structure_constants(generators: Sequence[Matrix]) -> tuple:
    """Exact expansion coefficients of [l_J, l_H] in the basis."""
    gens = [(_mat(g) if not isinstance(g, tuple) else g) for g in generators]
    d = len(gens)
    n = len(gens[0])
    cols = [[g[i][j] for i in range(n) for j in range(n)] for g in gens]
    out = [[[F(0)] * d for _ in range(d)] for _ in range(d)]
    for jj in range(d):
        for hh in range(d):
            comm = commutator(gens[jj], gens[hh])
            rhs = [comm[i][j] for i in range(n) for j in range(n)]
            sol = _solve_exact(cols, rhs)
            if sol is None:
                raise NonClosureError(
                    f"[l_{jj}, l_{hh}] is outside the span of the basis")
            for ii, c in enumerate(sol):
                if c.im != 0:
                    raise NonClosureError("structure constants must be real")
                out[ii][jj][hh] = c.re
    return tuple(tuple(tuple(r) for r in plane) for plane in out)


def trace_metric(generators: Sequence[Matrix]) -> tuple[tuple, tuple]:
    """(G, H): G_IJ = Re Tr(l_I l_J) as Fractions and the Hermitian form
    H_IJ = Tr(l_I+ l_J) as Gaussian rationals (complex on mixed bases)."""
    gens = [(_mat(g) if not isinstance(g, tuple) else g) for g in generators]
    d = len(gens)
    g_m = [[F(0)] * d for _ in range(d)]
    h_m = [[GR_ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            g_m[i][j] = _trace(_mul(gens[i], gens[j])).re
            h_m[i][j] = _trace(_mul(_dagger(gens[i]), gens[j]))
    return tuple(tuple(r) for r in g_m), tuple(tuple(r) for r in h_m)


def hermitian_real_part(h_m) -> tuple:
    """H as a Fraction matrix; raises when any entry is not real."""
    out = []
    for row in h_m:
        r = []
        for x in row:
            if x.im != 0:
                raise LieError("Hermitian trace form is not real on this basis")
            r.append(x.re)
        out.append(tuple(r))
    return tuple(out)


def signature(sym: Sequence[Sequence[Fraction]]) -> tuple[int, int]:
    """(positive, negative) inertia of a rational symmetric matrix,
    by exact Lagrange congruence reduction."""
    a = [list(map(F, row)) for row in sym]
    n = len(a)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx
                         if j != i and a[i][j] != 0), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(piv)
        for i in idx:
            f = a[i][piv] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return pos, neg


def jacobi_residual(constants) -> Fraction:
    """Max |sum_L (c^I_JL c^L_HK + c^I_HL c^L_KJ + c^I_KL c^L_JH)|."""
    d = len(constants)
    worst = F(0)
    for i in range(d):
        for j in range(d):
            for h in range(d):
                for k in range(d):
                    s = F(0)
                    for l in range(d):
                        s += (constants[i][j][l] * constants[l][h][k]
                              + constants[i][h][l] * constants[l][k][j]
                              + constants[i][k][l] * constants[l][j][h])
                    worst = max(worst, abs(s))
    return worst


def antisymmetry_residual(constants) -> Fraction:
    d = len(constants)
    worst = F(0)
    for i in range(d):
        for j in range(d):
            for h in range(d):
                worst = max(worst, abs(constants[i][j][h] + constants[i][h][j]))
    return worst


def _inverse(sym: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(sym)
    aug = [list(map(F, sym[i])) + [F(1) if j == i else F(0) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        d = aug[c][c]
        aug[c] = [x / d for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def lower_first_index(constants, h_metric) -> tuple:
    """c_IJH = H_II' c^I'_JH."""
    d = len(constants)
    out = [[[F(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for h in range(d):
                out[i][j][h] = sum((h_metric[i][ip] * constants[ip][j][h]
                                    for ip in range(d)), start=F(0))
    return tuple(tuple(tuple(r) for r in plane) for plane in out)


def raise_first_index(lowered, h_metric) -> tuple:
    return lower_first_index(lowered, _inverse(h_metric))


def total_antisymmetry_residual(lowered) -> Fraction:
    """Residual of full antisymmetry of the lowered constants."""
    d = len(lowered)
    worst = F(0)
    for i in range(d):
        for j in range(d):
            for h in range(d):
                worst = max(worst,
                            abs(lowered[i][j][h] + lowered[j][i][h]),
                            abs(lowered[i][j][h] + lowered[i][h][j]))
    return worst


# --- presets -----------------------------------------------------------

_I = GaussianRational(0, 1)
_MI2 = GaussianRational(0, F(-1, 2))


def u1() -> LieData:
    return LieData.from_generators([[[_I]]])


def su2() -> LieData:
    sigma = (
        ((0, 1), (1, 0)),
        ((0, GaussianRational(0, -1)), (GaussianRational(0, 1), 0)),
        ((1, 0), (0, -1)),
    )
    gens = [[[_MI2 * GaussianRational(F(x)) if isinstance(x, int) else _MI2 * x
              for x in row] for row in s] for s in sigma]
    return LieData.from_generators(gens)


def su3() -> LieData:
    i = GaussianRational(0, 1)
    lam = [
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, -i, 0], [i, 0, 0], [0, 0, 0]],
        [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, -i], [0, 0, 0], [i, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 0], [0, 0, -i], [0, i, 0]],
        # rescaled eighth direction: sqrt(3) * lambda_8, kept rational
        [[1, 0, 0], [0, 1, 0], [0, 0, -2]],
    ]
    gens = []
    for m in lam:
        gens.append([[_MI2 * (x if isinstance(x, GaussianRational)
                              else GaussianRational(F(x))) for x in row]
                     for row in m])
    return LieData.from_generators(gens)


def unitary_basis(n: int) -> list:
    """Anti-Hermitian basis of all of u(n): n^2 matrices."""
    i = GaussianRational(0, 1)
    zero = GaussianRational(0)
    gens = []
    for k in range(n):
        m = [[zero] * n for _ in range(n)]
        m[k][k] = i
        gens.append(m)
    for a in range(n):
        for b in range(a + 1, n):
            m = [[zero] * n for _ in range(n)]
            m[a][b] = GaussianRational(1)
            m[b][a] = GaussianRational(-1)
            gens.append(m)
            m2 = [[zero] * n for _ in range(n)]
            m2[a][b] = i
            m2[b][a] = i
            gens.append(m2)
    return gens


PRESETS = {"u1": u1, "su2": su2, "su3": su3}
