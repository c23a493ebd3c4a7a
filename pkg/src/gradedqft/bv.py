"""Fiber-polynomial algebra with antifields, BV operations and BRST.

Coordinates are graded classical fiber/jet symbols: for every field
coordinate y there is an antifield coordinate with inverted parity, and
jet labels up to second order.  Polynomials are kept Koszul-canonical
(words sorted, odd squares killed, signs folded into the coefficients),
so equality is dictionary equality.

Graded derivative conventions:

    left:   D_i (y_k1 ... y_kr) = sum_j delta_{i,kj}
            (-1)^{|i| (|k1|+...+|k_{j-1}|)} y_k1 ... ^y_kj ... y_kr
    right:  f D~_i = (-1)^{|i||f|} D_i f   (per homogeneous term)

The BV Laplacian is Delta f = sum_i D_i Dtilde^i f over field/antifield
pairs, and the antibracket is

    {f, g} = <f|1*|g> - (-1)^{(|f|+1)(|g|+1)} <g|1*|f>,
    <f|1*|g> = sum_i (f Dtilde<-^i) (D->_i g).

The induced canonical pairing comes out as {y, ytilde} = +1; the sign is
not postulated but pinned by the product identities the tests enforce.

The BRST derivation S acts on base coordinates by the gauge-theory table
(S psi = l_I omega^I psi, S psibar = psibar l_I omega^I, S A = covariant
gradient of omega, S omega = (1/2) c omega omega, S omegabar = n,
S n = 0), on jets by total-derivative prolongation, and kills antifield
coordinates.  Consistency (S^2 = 0, gauge invariance of the matter+gauge
Lagrangian) fixes the remaining component conventions:

    grad_lam psi = psi_{,lam} - A^I_lam l_I psi
    F^I_{lam nu} = A^I_{nu,lam} - A^I_{lam,nu} - c^I_{JH} A^J_lam A^H_nu
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .gammas import GAMMA, METRIC
from .lie import LieData
from .scalars import ScalarExpr

F = Fraction


class BVError(Exception):
    pass


class JetOrderError(BVError):
    pass


class NotASymmetryError(BVError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


SECTOR_PARITY = {"psi": 1, "psibar": 1, "A": 0, "omega": 1, "omegabar": 1, "n": 0}


@dataclass(frozen=True, slots=True, order=True)
class FiberCoord:
    sector: str
    kind: str  # 'field' | 'anti'
    idx: tuple
    jet: tuple  # sorted spacetime indices, length <= 2

    def __post_init__(self):
        if self.sector not in SECTOR_PARITY:
            raise BVError(f"unknown sector {self.sector!r}")
        if self.kind not in ("field", "anti"):
            raise BVError(f"bad coordinate kind {self.kind!r}")
        if len(self.jet) > 2:
            raise JetOrderError("jet order is capped at 2")
        if tuple(sorted(self.jet)) != self.jet:
            raise BVError("jet multi-index must be sorted")

    @property
    def parity(self) -> int:
        p = SECTOR_PARITY[self.sector]
        return p if self.kind == "field" else 1 - p

    def partner(self) -> "FiberCoord":
        return FiberCoord(self.sector, "anti" if self.kind == "field" else "field",
                          self.idx, self.jet)

    def lift(self, lam: int) -> "FiberCoord":
        return FiberCoord(self.sector, self.kind, self.idx,
                          tuple(sorted(self.jet + (lam,))))

    def __repr__(self) -> str:
        tilde = "~" if self.kind == "anti" else ""
        jets = ("," + "".join(str(j) for j in self.jet)) if self.jet else ""
        return f"{self.sector}{tilde}{list(self.idx)}{jets}"


def _sort_word(word: tuple):
    """(sign, canonical word) or None when an odd coordinate repeats."""
    w = list(word)
    sign = 1
    # insertion sort, counting odd-odd transpositions
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            if w[j - 1].parity and w[j].parity:
                sign = -sign
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b and a.parity:
            return None
    return sign, tuple(w)


class FiberPoly:
    """Polynomial in graded fiber coordinates with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, ScalarExpr] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            if not c.is_zero():
                clean[w] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("FiberPoly is immutable")

    @staticmethod
    def zero() -> "FiberPoly":
        return FiberPoly()

    @staticmethod
    def unit(c: ScalarExpr | None = None) -> "FiberPoly":
        return FiberPoly({(): c if c is not None else ScalarExpr.one()})

    @staticmethod
    def coord(c: FiberCoord, coeff: ScalarExpr | None = None) -> "FiberPoly":
        return FiberPoly({(c,): coeff if coeff is not None else ScalarExpr.one()})

    @staticmethod
    def word(coords: Sequence[FiberCoord], coeff: ScalarExpr | None = None) -> "FiberPoly":
        res = _sort_word(tuple(coords))
        if res is None:
            return FiberPoly()
        sign, w = res
        c = coeff if coeff is not None else ScalarExpr.one()
        return FiberPoly({w: c * sign})

    def __add__(self, other: "FiberPoly") -> "FiberPoly":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            s = acc.get(w, ScalarExpr.zero()) + c
            if s.is_zero():
                acc.pop(w, None)
            else:
                acc[w] = s
        return FiberPoly(acc)

    def __sub__(self, other: "FiberPoly") -> "FiberPoly":
        return self + other.scale(ScalarExpr.rational(-1))

    def __neg__(self) -> "FiberPoly":
        return self.scale(ScalarExpr.rational(-1))

    def scale(self, s: ScalarExpr) -> "FiberPoly":
        return FiberPoly({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: "FiberPoly") -> "FiberPoly":
        acc: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                res = _sort_word(w1 + w2)
                if res is None:
                    continue
                sign, w = res
                c = c1 * c2 * sign
                s = acc.get(w, ScalarExpr.zero()) + c
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return FiberPoly(acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiberPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, hash(c)) for w, c in self.terms.items()))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def parity(self) -> str:
        seen = {sum(c.parity for c in w) % 2 for w in self.terms}
        if not seen:
            return "even"
        if len(seen) > 1:
            return "mixed"
        return "odd" if seen.pop() else "even"

    def coords(self) -> set:
        out = set()
        for w in self.terms:
            out.update(w)
        return out

    def partial_symbol(self, name: str) -> "FiberPoly":
        return FiberPoly({w: c.partial_symbol(name) for w, c in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            ws = "·".join(repr(x) for x in w) if w else "1"
            bits.append(f"({c!r})·{ws}")
        return " + ".join(bits)


def left_deriv(f: FiberPoly, coord: FiberCoord) -> FiberPoly:
    acc: dict = {}
    p_i = coord.parity
    for w, c in f.terms.items():
        pref = 0
        for j, cj in enumerate(w):
            if cj == coord:
                sign = -1 if (p_i and pref % 2) else 1
                nw = w[:j] + w[j + 1:]
                s = acc.get(nw, ScalarExpr.zero()) + c * sign
                if s.is_zero():
                    acc.pop(nw, None)
                else:
                    acc[nw] = s
            pref += cj.parity
    return FiberPoly(acc)


def right_deriv(f: FiberPoly, coord: FiberCoord) -> FiberPoly:
    acc = FiberPoly.zero()
    p_i = coord.parity
    for w, c in f.terms.items():
        pf = sum(x.parity for x in w) % 2
        sign = -1 if (p_i and pf) else 1
        acc = acc + left_deriv(FiberPoly({w: c * sign}), coord)
    return acc


def partial_deriv(f: FiberPoly, coord: FiberCoord,
                  convention: str = "signed-right") -> FiberPoly:
    """The shorthand derivative d_i behind a convention switch.

    "signed-right" (default): d_i = (-1)^{|i|} (f <-D_i), the convention
    the rest of this module is built on; "left": d_i = D_i f, the other
    normalisation found in the literature.  They agree on even
    coordinates and differ by (-1)^{|f|+1} on odd ones.
    """
    if convention == "signed-right":
        out = right_deriv(f, coord)
        return -out if coord.parity else out
    if convention == "left":
        return left_deriv(f, coord)
    raise BVError(f"unknown derivative convention {convention!r}")


def _pairs_for(*polys: FiberPoly) -> set:
    """Field/antifield coordinate pairs appearing in any argument."""
    pairs = set()
    for f in polys:
        for c in f.coords():
            base = c if c.kind == "field" else c.partner()
            pairs.add((base, base.partner()))
    return pairs


def bv_laplacian(f: FiberPoly) -> FiberPoly:
    """Delta f = sum_i D_i Dtilde^i f."""
    acc = FiberPoly.zero()
    for yc, ac in _pairs_for(f):
        acc = acc + left_deriv(left_deriv(f, ac), yc)
    return acc


def _half_pairing(f: FiberPoly, g: FiberPoly, pairs) -> FiberPoly:
    acc = FiberPoly.zero()
    for yc, ac in pairs:
        acc = acc + right_deriv(f, ac) * left_deriv(g, yc)
    return acc


def bv_bracket(f: FiberPoly, g: FiberPoly) -> FiberPoly:
    """The antibracket; operands must be Z2-homogeneous."""
    pf, pg = f.parity(), g.parity()
    if "mixed" in (pf, pg):
        raise BVError("antibracket needs definite-parity operands")
    pairs = _pairs_for(f, g)
    first = _half_pairing(f, g, pairs)
    second = _half_pairing(g, f, pairs)
    sgn = (-1) ** (((pf == "odd") + 1) * ((pg == "odd") + 1))
    return first - second.scale(ScalarExpr.rational(sgn))


def horizontal_diff(f: FiberPoly, lam: int) -> FiberPoly:
    """Total spacetime derivative via jet prolongation (even derivation)."""
    acc: dict = {}
    for w, c in f.terms.items():
        for j, cj in enumerate(w):
            res = _sort_word(w[:j] + (cj.lift(lam),) + w[j + 1:])
            if res is None:
                continue
            sign, nw = res
            s = acc.get(nw, ScalarExpr.zero()) + c * sign
            if s.is_zero():
                acc.pop(nw, None)
            else:
                acc[nw] = s
    return FiberPoly(acc)


class VerticalDerivation:
    """Graded derivation determined by components on base field
    coordinates, prolonged to jets, zero on antifields."""

    def __init__(self, components: Mapping[FiberCoord, FiberPoly], parity: int):
        self.components = dict(components)
        self.parity = parity

    def on_coord(self, c: FiberCoord) -> FiberPoly:
        if c.kind == "anti":
            return FiberPoly.zero()
        base = FiberCoord(c.sector, c.kind, c.idx, ())
        comp = self.components.get(base)
        if comp is None:
            return FiberPoly.zero()
        for lam in c.jet:
            comp = horizontal_diff(comp, lam)
        return comp

    def __call__(self, f: FiberPoly) -> FiberPoly:
        acc = FiberPoly.zero()
        for w, c in f.terms.items():
            pref = 0
            for j, cj in enumerate(w):
                comp = self.on_coord(cj)
                if not comp.is_zero():
                    sign = -1 if (self.parity and pref % 2) else 1
                    piece = FiberPoly.word(w[:j], c * sign) * comp * \
                        FiberPoly.word(w[j + 1:])
                    acc = acc + piece
                pref += cj.parity
        return acc


# --- the gauge theory ------------------------------------------------------

@dataclass(frozen=True)
class TheorySpec:
    """Field content of the essential gauge theory over a Lie datum."""

    lie: LieData
    xi: ScalarExpr
    mass: ScalarExpr

    @staticmethod
    def make(lie: LieData, xi: ScalarExpr | None = None,
             mass: ScalarExpr | None = None) -> "TheorySpec":
        return TheorySpec(lie,
                          xi if xi is not None else ScalarExpr.symbol("xi"),
                          mass if mass is not None else ScalarExpr.symbol("m"))

    @property
    def n_f(self) -> int:
        return self.lie.dim_f

    @property
    def d_lie(self) -> int:
        return self.lie.dim

    # coordinate helpers
    def psi(self, al: int, i: int, jet=()) -> FiberCoord:
        return FiberCoord("psi", "field", (al, i), tuple(jet))

    def psibar(self, al: int, i: int, jet=()) -> FiberCoord:
        return FiberCoord("psibar", "field", (al, i), tuple(jet))

    def a_gauge(self, li: int, lam: int, jet=()) -> FiberCoord:
        return FiberCoord("A", "field", (li, lam), tuple(jet))

    def omega(self, li: int, jet=()) -> FiberCoord:
        return FiberCoord("omega", "field", (li,), tuple(jet))

    def omegabar(self, li: int, jet=()) -> FiberCoord:
        return FiberCoord("omegabar", "field", (li,), tuple(jet))

    def nl(self, li: int, jet=()) -> FiberCoord:
        return FiberCoord("n", "field", (li,), tuple(jet))

    def gen_entry(self, li: int, i: int, j: int) -> ScalarExpr:
        return ScalarExpr.gaussian(self.lie.generators[li][i][j])

    def c_const(self, i: int, j: int, h: int) -> Fraction:
        return self.lie.constants[i][j][h]

    def all_base_coords(self) -> list:
        out = []
        for al in range(4):
            for i in range(self.n_f):
                out.append(self.psi(al, i))
                out.append(self.psibar(al, i))
        for li in range(self.d_lie):
            for lam in range(4):
                out.append(self.a_gauge(li, lam))
            out.append(self.omega(li))
            out.append(self.omegabar(li))
            out.append(self.nl(li))
        return out


def brst_components(theory: TheorySpec, constants=None) -> dict:
    """The BRST component table; ``constants`` may override the Lie ones
    (negative controls corrupt a single entry)."""
    cs = constants if constants is not None else theory.lie.constants
    comp: dict[FiberCoord, FiberPoly] = {}
    d = theory.d_lie

    for al in range(4):
        for i in range(theory.n_f):
            acc = FiberPoly.zero()
            accb = FiberPoly.zero()
            for li in range(d):
                for j in range(theory.n_f):
                    e = theory.gen_entry(li, i, j)
                    if not e.is_zero():
                        acc = acc + FiberPoly.word(
                            (theory.omega(li), theory.psi(al, j)), e)
                    et = theory.gen_entry(li, j, i)
                    if not et.is_zero():
                        accb = accb + FiberPoly.word(
                            (theory.psibar(al, j), theory.omega(li)), et)
            comp[theory.psi(al, i)] = acc
            comp[theory.psibar(al, i)] = accb

    for li in range(d):
        for lam in range(4):
            acc = FiberPoly.coord(theory.omega(li, (lam,)))
            for jj in range(d):
                for hh in range(d):
                    c = cs[li][jj][hh]
                    if c:
                        acc = acc + FiberPoly.word(
                            (theory.omega(jj), theory.a_gauge(hh, lam)),
                            ScalarExpr.rational(c))
            comp[theory.a_gauge(li, lam)] = acc
        acc = FiberPoly.zero()
        for jj in range(d):
            for hh in range(d):
                c = cs[li][jj][hh]
                if c:
                    acc = acc + FiberPoly.word(
                        (theory.omega(jj), theory.omega(hh)),
                        ScalarExpr.rational(F(c) / 2))
        comp[theory.omega(li)] = acc
        comp[theory.omegabar(li)] = FiberPoly.coord(theory.nl(li))
        comp[theory.nl(li)] = FiberPoly.zero()
    return comp


def brst_operator(theory: TheorySpec, constants=None) -> VerticalDerivation:
    return VerticalDerivation(brst_components(theory, constants), parity=1)


def brst_S(f: FiberPoly, theory: TheorySpec) -> FiberPoly:
    return brst_operator(theory)(f)


def ghost_number_derivation(theory: TheorySpec) -> VerticalDerivation:
    """omega -> omega, omegabar -> -omegabar (even derivation)."""
    comp = {}
    for li in range(theory.d_lie):
        comp[theory.omega(li)] = FiberPoly.coord(theory.omega(li))
        comp[theory.omegabar(li)] = FiberPoly.coord(
            theory.omegabar(li), ScalarExpr.rational(-1))
    return VerticalDerivation(comp, parity=0)


# --- Lagrangians ------------------------------------------------------------

def covariant_dpsi(theory: TheorySpec, al: int, i: int, lam: int) -> FiberPoly:
    acc = FiberPoly.coord(theory.psi(al, i, (lam,)))
    for li in range(theory.d_lie):
        for j in range(theory.n_f):
            e = theory.gen_entry(li, i, j)
            if not e.is_zero():
                acc = acc + FiberPoly.word(
                    (theory.a_gauge(li, lam), theory.psi(al, j)), -e)
    return acc


def covariant_dpsibar(theory: TheorySpec, al: int, i: int, lam: int) -> FiberPoly:
    acc = FiberPoly.coord(theory.psibar(al, i, (lam,)))
    for li in range(theory.d_lie):
        for j in range(theory.n_f):
            e = theory.gen_entry(li, j, i)
            if not e.is_zero():
                acc = acc + FiberPoly.word(
                    (theory.a_gauge(li, lam), theory.psibar(al, j)), e)
    return acc


def covariant_domega(theory: TheorySpec, li: int, lam: int) -> FiberPoly:
    acc = FiberPoly.coord(theory.omega(li, (lam,)))
    for jj in range(theory.d_lie):
        for hh in range(theory.d_lie):
            c = theory.c_const(li, jj, hh)
            if c:
                acc = acc + FiberPoly.word(
                    (theory.omega(jj), theory.a_gauge(hh, lam)),
                    ScalarExpr.rational(c))
    return acc


def field_strength(theory: TheorySpec, li: int, lam: int, nu: int) -> FiberPoly:
    acc = FiberPoly.coord(theory.a_gauge(li, nu, (lam,))) - \
        FiberPoly.coord(theory.a_gauge(li, lam, (nu,)))
    for jj in range(theory.d_lie):
        for hh in range(theory.d_lie):
            c = theory.c_const(li, jj, hh)
            if c:
                acc = acc + FiberPoly.word(
                    (theory.a_gauge(jj, lam), theory.a_gauge(hh, nu)),
                    ScalarExpr.rational(-c))
    return acc


def lagrangian_matter(theory: TheorySpec) -> FiberPoly:
    """(i/2)(psibar gamma grad psi - grad psibar gamma psi) - m psibar psi."""
    half_i = ScalarExpr.i() * ScalarExpr.rational(F(1, 2))
    acc = FiberPoly.zero()
    for al in range(4):
        for be in range(4):
            for lam in range(4):
                g = GAMMA[lam].rows[al][be]
                if g.is_zero():
                    continue
                gs = ScalarExpr.gaussian(g)
                for i in range(theory.n_f):
                    acc = acc + (FiberPoly.coord(theory.psibar(al, i)) *
                                 covariant_dpsi(theory, be, i, lam)).scale(half_i * gs)
                    acc = acc - (covariant_dpsibar(theory, al, i, lam) *
                                 FiberPoly.coord(theory.psi(be, i))).scale(half_i * gs)
            if al == be:
                for i in range(theory.n_f):
                    acc = acc - FiberPoly.word(
                        (theory.psibar(al, i), theory.psi(be, i)), theory.mass)
    return acc


def lagrangian_gauge(theory: TheorySpec) -> FiberPoly:
    """-(1/4) F^I_{lam nu} F_I^{lam nu}."""
    acc = FiberPoly.zero()
    quarter = ScalarExpr.rational(F(-1, 4))
    for li in range(theory.d_lie):
        for lam in range(4):
            for nu in range(4):
                f1 = field_strength(theory, li, lam, nu)
                acc = acc + (f1 * f1).scale(
                    quarter * ScalarExpr.rational(METRIC[lam] * METRIC[nu]))
    return acc


def gauge_fix_f(theory: TheorySpec, li: int) -> FiberPoly:
    """f^I = d_lam (g^{lam mu} A^I_mu) in orthonormal flat coordinates."""
    acc = FiberPoly.zero()
    for lam in range(4):
        acc = acc + FiberPoly.coord(
            theory.a_gauge(li, lam, (lam,)), ScalarExpr.rational(METRIC[lam]))
    return acc


def lagrangian_ghost(theory: TheorySpec) -> FiberPoly:
    """g^{lam mu} omegabar_{I,lam} grad_mu omega^I + n_I (f^I + xi/2 n^I)."""
    acc = FiberPoly.zero()
    for li in range(theory.d_lie):
        for lam in range(4):
            acc = acc + (FiberPoly.coord(theory.omegabar(li, (lam,))) *
                         covariant_domega(theory, li, lam)).scale(
                             ScalarExpr.rational(METRIC[lam]))
        acc = acc + FiberPoly.coord(theory.nl(li)) * gauge_fix_f(theory, li)
        acc = acc + FiberPoly.word((theory.nl(li), theory.nl(li)),
                                   theory.xi * ScalarExpr.rational(F(1, 2)))
    return acc


@dataclass(frozen=True)
class GhostDecomposition:
    lagrangian: FiberPoly
    s_k: FiberPoly
    dh_m: FiberPoly
    residual: FiberPoly

    @property
    def match(self) -> bool:
        return self.residual.is_zero()


def ghost_lagrangian_decompose(theory: TheorySpec) -> GhostDecomposition:
    """L_ghost = (S A) Atilde + (S omegabar) omegabartilde = S K + d_H M."""
    s = brst_operator(theory)
    lhs = FiberPoly.zero()
    for li in range(theory.d_lie):
        for lam in range(4):
            atilde = FiberPoly.coord(
                theory.omegabar(li, (lam,)), ScalarExpr.rational(-METRIC[lam]))
            lhs = lhs + s(FiberPoly.coord(theory.a_gauge(li, lam))) * atilde
        obt = gauge_fix_f(theory, li) + FiberPoly.coord(
            theory.nl(li), theory.xi * ScalarExpr.rational(F(1, 2)))
        lhs = lhs + s(FiberPoly.coord(theory.omegabar(li))) * obt
    k = FiberPoly.zero()
    for li in range(theory.d_lie):
        k = k + FiberPoly.coord(theory.omegabar(li)) * (
            gauge_fix_f(theory, li) + FiberPoly.coord(
                theory.nl(li), theory.xi * ScalarExpr.rational(F(1, 2))))
    dh_m = FiberPoly.zero()
    for lam in range(4):
        m_lam = FiberPoly.zero()
        for li in range(theory.d_lie):
            m_lam = m_lam + (FiberPoly.coord(theory.omegabar(li)) *
                             covariant_domega(theory, li, lam)).scale(
                                 ScalarExpr.rational(METRIC[lam]))
        dh_m = dh_m + horizontal_diff(m_lam, lam)
    s_k = s(k)
    return GhostDecomposition(lhs, s_k, dh_m, lhs - (s_k + dh_m))


def brst_M_components(theory: TheorySpec) -> list:
    """M^lam = g^{lam mu} omegabar_I grad_mu omega^I."""
    out = []
    for lam in range(4):
        m_lam = FiberPoly.zero()
        for li in range(theory.d_lie):
            m_lam = m_lam + (FiberPoly.coord(theory.omegabar(li)) *
                             covariant_domega(theory, li, lam)).scale(
                                 ScalarExpr.rational(METRIC[lam]))
        out.append(m_lam)
    return out


# --- variational calculus ---------------------------------------------------

def _jet1_coords(f: FiberPoly) -> set:
    return {c for c in f.coords() if len(c.jet) == 1}


def _base_coords(f: FiberPoly) -> set:
    return {FiberCoord(c.sector, c.kind, c.idx, ()) for c in f.coords()}


def jet_deriv(f: FiberPoly, base: FiberCoord, jet: tuple) -> FiberPoly:
    """Left derivative by the jet coordinate, with the symmetric-pair
    weight 1/2 for distinct second-order labels."""
    coord = FiberCoord(base.sector, base.kind, base.idx, tuple(sorted(jet)))
    out = left_deriv(f, coord)
    if len(jet) == 2 and jet[0] != jet[1]:
        out = out.scale(ScalarExpr.rational(F(1, 2)))
    return out


def euler_lagrange(lagr: FiberPoly, base: FiberCoord, order: int = 1) -> FiberPoly:
    """E_i(l) = D_i l - d_lam D^lam_i l (+ d_lam d_mu D^{lam mu}_i l)."""
    acc = left_deriv(lagr, base)
    for lam in range(4):
        acc = acc - horizontal_diff(jet_deriv(lagr, base, (lam,)), lam)
    if order >= 2:
        for lam in range(4):
            for mu in range(4):
                term = jet_deriv(lagr, base, (lam, mu))
                if not term.is_zero():
                    acc = acc + horizontal_diff(horizontal_diff(term, mu), lam)
    return acc


def noether_current(v: VerticalDerivation, lagr: FiberPoly,
                    n_forms: Sequence[FiberPoly] | None = None,
                    order: int = 1) -> list:
    """Conserved current components J^lam of the vertical symmetry v.

    Requires delta[v] L = d_lam N^lam (exactly); raises otherwise with the
    residual attached.  For order 2 the current uses the second-jet
    correction terms; in both cases the off-shell conservation identity
    d_lam J^lam + sum_i v^i E_i(l) = d_lam N^lam - delta[v] L = 0 holds by
    construction and is re-checked.
    """
    if order not in (1, 2):
        raise BVError("Noether currents are implemented for order 1 and 2 only")
    n_forms = list(n_forms) if n_forms is not None else \
        [FiberPoly.zero() for _ in range(4)]
    varied = v(lagr)
    dh_n = FiberPoly.zero()
    for lam in range(4):
        dh_n = dh_n + horizontal_diff(n_forms[lam], lam)
    resid = varied - dh_n
    if not resid.is_zero():
        raise NotASymmetryError("delta[v] L is not the stated horizontal "
                                "differential", resid)
    bases = {b for b in _base_coords(lagr) if b.kind == "field"}
    currents = []
    for lam in range(4):
        j = -n_forms[lam]
        for b in bases:
            comp = v.on_coord(b)
            if comp.is_zero():
                continue
            first = jet_deriv(lagr, b, (lam,))
            if order >= 2:
                for mu in range(4):
                    first = first - horizontal_diff(jet_deriv(lagr, b, (lam, mu)), mu)
            j = j + comp * first
            if order >= 2:
                for mu in range(4):
                    second = jet_deriv(lagr, b, (lam, mu))
                    if not second.is_zero():
                        j = j + horizontal_diff(comp, mu) * second
        currents.append(j)
    # off-shell conservation: d_lam J^lam = -sum v^i E_i(l) (+ d N absorbed)
    div = FiberPoly.zero()
    for lam in range(4):
        div = div + horizontal_diff(currents[lam], lam)
    onshell = FiberPoly.zero()
    for b in bases:
        comp = v.on_coord(b)
        if not comp.is_zero():
            onshell = onshell + comp * euler_lagrange(lagr, b, order)
    if not (div + onshell).is_zero():
        raise BVError("internal error: Noether conservation identity failed")
    return currents
