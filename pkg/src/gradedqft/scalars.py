"""Exact scalar coefficients for the graded-operator engine.

A :class:`ScalarExpr` is a finite sum of terms

    coefficient * (formal symbols) * (Kronecker deltas) * (plane-wave phase)

where the coefficient is a Gaussian rational (complex number with rational
real and imaginary parts).  All arithmetic is exact: no floats enter until
:func:`evaluate` is called.  Every expression is normalised on construction,
so two expressions are mathematically equal in the supported fragment iff
their term dictionaries compare equal.

Symbols come in four flavours, encoded in the term key:

``('sym', name, tag, val)``
    a plain named symbol such as the gauge parameter ``xi`` or a formal
    function value ``f(q)`` indexed by a mode token.
``('rad', d)``
    the square root of the squarefree integer ``d > 1``; pairs reduce to
    the integer ``d``.
``('wgt', r)``
    the mode weight ``(2*sqrt(r))**-1/2`` for a non-square rational
    ``r = m**2 + |p|**2``; its square reduces to ``sqrt(1/r)/2``.
``('kw', m, r)``
    the spinor-boost prefactor ``(2*m*(sqrt(r)+m))**-1/2``; its square
    reduces to ``(sqrt(r)-m) / (2*m*(r-m**2))``.

The last two exist so that half-integer powers never require a general
radical engine: whenever two field factors meet in a bracket or an
integrated density, the weights pair up and the squares collapse to exact
rationals (possibly times a single ``rad``).

Phases are kept unevaluated.  The exponent of a phase is ``i`` times a
formal linear expression in time symbols, spatial vector symbols and a
constant, with coefficients in Q + Q*sqrt(d) (on-shell energies are
generally irrational).  Equality of phases is syntactic on this exponent.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Union[int, Fraction]


class ScalarError(Exception):
    pass


class UnboundIndexError(ScalarError):
    """A mode-index variable was left unbound where a value is required."""


class UnboundSymbolError(ScalarError):
    """A formal symbol had no numeric binding during evaluation."""


class NonIntegrablePhaseError(ScalarError):
    """A spatial integral met a phase in a foreign position variable."""


def _frac(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _squarefree(n: int) -> tuple[int, int]:
    """Return (a, d) with n = a*a*d and d squarefree, for n > 0."""
    a, d = 1, 1
    i = 2
    while i * i <= n:
        if n % i == 0:
            cnt = 0
            while n % i == 0:
                n //= i
                cnt += 1
            a *= i ** (cnt // 2)
            if cnt % 2:
                d *= i
        i += 1
    return a, d * n


def canonical_sqrt(q: Rational) -> tuple[Fraction, int]:
    """Write sqrt(q) = c*sqrt(d) with d squarefree; q must be >= 0."""
    q = _frac(q)
    if q < 0:
        raise ScalarError(f"square root of negative rational {q}")
    if q == 0:
        return Fraction(0), 1
    a, d = _squarefree(q.numerator * q.denominator)
    return Fraction(a, q.denominator), d


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other) -> "GaussianRational":
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re / other, self.im / other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return self * GaussianRational(other.re / n, -other.im / n)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


# --- linear combinations over Q of sqrt(d), used in phase exponents ---

QSum = tuple  # tuple[(d: int, c: Fraction)], sorted by d, c != 0


def qsum(pairs: Iterable[tuple[int, Rational]]) -> QSum:
    acc: dict[int, Fraction] = {}
    for d, c in pairs:
        acc[d] = acc.get(d, Fraction(0)) + _frac(c)
    return tuple(sorted((d, c) for d, c in acc.items() if c != 0))


def qsum_rat(c: Rational) -> QSum:
    return qsum([(1, c)])


def qsum_add(a: QSum, b: QSum) -> QSum:
    return qsum(list(a) + list(b))


def qsum_neg(a: QSum) -> QSum:
    return tuple((d, -c) for d, c in a)


def qsum_scale(a: QSum, s: Rational) -> QSum:
    s = _frac(s)
    if s == 0:
        return ()
    return tuple((d, c * s) for d, c in a)


def qsum_float(a: QSum) -> float:
    return sum(float(c) * math.sqrt(d) for d, c in a)


def qsum_sqrt(q: Rational) -> QSum:
    """sqrt(q) as a QSum (exact)."""
    c, d = canonical_sqrt(q)
    return qsum([(d, c)])


# --- term keys ---------------------------------------------------------

# symbols: tuple of ((kind, ...), exponent) sorted
# deltas:  tuple of ((tok1, tok2)) sorted, tok = ('m', id) or ('v', name)
# phase:   tuple of ((key, value)) sorted,
#          key = ('c',) | ('t', name) | ('x', name)
#          value = QSum for 'c'/'t', (Fraction, Fraction, Fraction) for 'x'

Term = tuple


def sym_key(name: str, token: tuple | None = None) -> tuple:
    if token is None:
        return ("sym", name, "", 0)
    tag, val = token
    return ("sym", name, tag, val)


def mode_tok(mode_id: int) -> tuple:
    return ("m", mode_id)


def var_tok(name: str) -> tuple:
    return ("v", name)


def _delta_pair(t1: tuple, t2: tuple):
    """Normalise one delta factor; returns pair, 1 (keep), or 0 (kill)."""
    if t1 == t2:
        return None  # identically 1
    if t1[0] == "m" and t2[0] == "m":
        return 0  # distinct concrete modes
    return tuple(sorted((t1, t2)))


def _phase_normal(entries: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for key, val in entries:
        if key[0] == "x":
            cur = acc.get(key, (Fraction(0),) * 3)
            acc[key] = tuple(a + b for a, b in zip(cur, val))
        else:
            acc[key] = qsum_add(acc.get(key, ()), val)
    out = []
    for key, val in acc.items():
        if key[0] == "x":
            if any(v != 0 for v in val):
                out.append((key, val))
        elif val:
            out.append((key, val))
    return tuple(sorted(out))


def _phase_mul(p1: tuple, p2: tuple) -> tuple:
    if not p1:
        return p2
    if not p2:
        return p1
    return _phase_normal(list(p1) + list(p2))


def _phase_neg(p: tuple) -> tuple:
    out = []
    for key, val in p:
        if key[0] == "x":
            out.append((key, tuple(-v for v in val)))
        else:
            out.append((key, qsum_neg(val)))
    return tuple(sorted(out))


def _square_value(key: tuple) -> "ScalarExpr":
    """The exact value of symbol**2 for the reducible symbol kinds."""
    kind = key[0]
    if kind == "wgt":
        r = key[1]
        # (2*sqrt(r))**-1 = sqrt(1/r)/2
        c, d = canonical_sqrt(Fraction(1) / r)
        return ScalarExpr.radical(d) * ScalarExpr.rational(c / 2)
    if kind == "kw":
        m, r = key[1], key[2]
        # 1/(2m(sqrt(r)+m)) = (sqrt(r)-m) / (2m(r-m**2))
        den = 2 * m * (r - m * m)
        c, d = canonical_sqrt(r)
        return (ScalarExpr.radical(d) * ScalarExpr.rational(c) - ScalarExpr.rational(m)) * ScalarExpr.rational(Fraction(1) / den)
    raise ScalarError(f"symbol {key} has no defined square")


class ScalarExpr:
    """Canonical-form exact scalar expression."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Term, GaussianRational] | None = None, _raw=False):
        if terms is None:
            object.__setattr__(self, "terms", {})
        elif _raw:
            object.__setattr__(self, "terms", dict(terms))
        else:
            object.__setattr__(self, "terms", _normalize(terms))

    def __setattr__(self, *a):
        raise AttributeError("ScalarExpr is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "ScalarExpr":
        return _ZERO

    @staticmethod
    def one() -> "ScalarExpr":
        return _ONE

    @staticmethod
    def rational(x: Rational) -> "ScalarExpr":
        return ScalarExpr.gaussian(GaussianRational(x))

    @staticmethod
    def gaussian(c: GaussianRational) -> "ScalarExpr":
        if c.is_zero():
            return _ZERO
        return ScalarExpr({((), (), ()): c}, _raw=True)

    @staticmethod
    def i() -> "ScalarExpr":
        return _I

    @staticmethod
    def symbol(name: str, token: tuple | None = None) -> "ScalarExpr":
        return ScalarExpr({(((sym_key(name, token), 1),), (), ()): GR_ONE}, _raw=True)

    @staticmethod
    def radical(d: int) -> "ScalarExpr":
        """sqrt(d) for a squarefree integer d >= 1."""
        if d == 1:
            return _ONE
        return ScalarExpr({(((("rad", d), 1),), (), ()): GR_ONE}, _raw=True)

    @staticmethod
    def sqrt_rational(q: Rational) -> "ScalarExpr":
        """Exact sqrt of a nonnegative rational."""
        c, d = canonical_sqrt(q)
        if c == 0:
            return _ZERO
        return ScalarExpr.radical(d) * ScalarExpr.rational(c)

    @staticmethod
    def energy(r: Rational) -> "ScalarExpr":
        """sqrt(r) where r = m**2 + |p|**2; exact, rational when possible."""
        return ScalarExpr.sqrt_rational(r)

    @staticmethod
    def mode_weight(r: Rational) -> "ScalarExpr":
        """(2*E)**-1/2 with E = sqrt(r): the per-mode field weight."""
        r = _frac(r)
        if r <= 0:
            raise ScalarError("mode weight needs positive energy squared")
        c, d = canonical_sqrt(r)
        if d == 1:
            return ScalarExpr.sqrt_rational(Fraction(1) / (2 * c))
        return ScalarExpr({(((("wgt", r), 1),), (), ()): GR_ONE}, _raw=True)

    @staticmethod
    def boost_weight(m: Rational, r: Rational) -> "ScalarExpr":
        """(2*m*(E+m))**-1/2 with E = sqrt(r): the spinor boost prefactor."""
        m, r = _frac(m), _frac(r)
        c, d = canonical_sqrt(r)
        if d == 1:
            return ScalarExpr.sqrt_rational(Fraction(1) / (2 * m * (c + m)))
        return ScalarExpr({(((("kw", m, r), 1),), (), ()): GR_ONE}, _raw=True)

    @staticmethod
    def delta(t1: tuple, t2: tuple) -> "ScalarExpr":
        p = _delta_pair(t1, t2)
        if p == 0:
            return _ZERO
        if p is None:
            return _ONE
        return ScalarExpr({((), (p,), ()): GR_ONE}, _raw=True)

    @staticmethod
    def phase(entries: Iterable[tuple]) -> "ScalarExpr":
        """exp(i * (linear form)) from (key, value) entries."""
        ph = _phase_normal(entries)
        return ScalarExpr({((), (), ph): GR_ONE}, _raw=True)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "ScalarExpr") -> "ScalarExpr":
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for t, c in other.terms.items():
            s = acc.get(t, GR_ZERO) + c
            if s.is_zero():
                acc.pop(t, None)
            else:
                acc[t] = s
        return ScalarExpr(acc, _raw=True)

    def __sub__(self, other: "ScalarExpr") -> "ScalarExpr":
        return self + (-other)

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr({t: -c for t, c in self.terms.items()}, _raw=True)

    def __mul__(self, other) -> "ScalarExpr":
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.rational(other)
        elif isinstance(other, GaussianRational):
            other = ScalarExpr.gaussian(other)
        raw: dict[Term, GaussianRational] = {}
        for (s1, d1, p1), c1 in self.terms.items():
            for (s2, d2, p2), c2 in other.terms.items():
                syms: dict = {}
                for k, e in list(s1) + list(s2):
                    syms[k] = syms.get(k, 0) + e
                term = (
                    tuple(sorted((k, e) for k, e in syms.items() if e)),
                    tuple(sorted(set(d1) | set(d2))),
                    _phase_mul(p1, p2),
                )
                c = c1 * c2
                prev = raw.get(term)
                raw[term] = c if prev is None else prev + c
        return ScalarExpr(raw)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ScalarExpr":
        if n < 0:
            raise ScalarError("negative powers are not supported")
        out = _ONE
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "ScalarExpr":
        """Complex conjugation; formal symbols are treated as real."""
        acc: dict[Term, GaussianRational] = {}
        for (s, d, p), c in self.terms.items():
            acc[(s, d, _phase_neg(p))] = c.conjugate()
        return ScalarExpr(acc, _raw=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator[tuple[Term, GaussianRational]]:
        return iter(sorted(self.terms.items()))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def constant_value(self) -> GaussianRational:
        """The value of an expression that must be a pure number."""
        if not self.terms:
            return GR_ZERO
        if len(self.terms) == 1:
            term, c = next(iter(self.terms.items()))
            if term == ((), (), ()):
                return c
        raise ScalarError(f"not a pure number: {self}")

    # -- calculus on phases and symbols ----------------------------------

    def d_dt(self, tname: str) -> "ScalarExpr":
        """Derivative along the time symbol (phases only)."""
        out = _ZERO
        key = ("t", tname)
        for (s, d, p), c in self.terms.items():
            coeff = dict(p).get(key)
            if not coeff:
                continue
            # multiply by i * (sum of c_d * sqrt(d))
            factor = ScalarExpr(
                {(((("rad", dd), 1),) if dd != 1 else (), (), ()):
                 GaussianRational(0, cc) for dd, cc in coeff})
            out = out + ScalarExpr({(s, d, p): c}, _raw=True) * factor
        return out

    def d_dx(self, xname: str, j: int) -> "ScalarExpr":
        """Derivative along component j of the spatial symbol (phases only)."""
        out = _ZERO
        key = ("x", xname)
        for (s, d, p), c in self.terms.items():
            vec = dict(p).get(key)
            if vec is None or vec[j] == 0:
                continue
            out = out + ScalarExpr({(s, d, p): c * GaussianRational(0, vec[j])}, _raw=True)
        return out

    def partial_symbol(self, name: str) -> "ScalarExpr":
        """d/d(name) for a plain named symbol."""
        key = sym_key(name)
        acc: dict[Term, GaussianRational] = {}
        for (s, d, p), c in self.terms.items():
            sdict = dict(s)
            e = sdict.get(key, 0)
            if not e:
                continue
            if e == 1:
                del sdict[key]
            else:
                sdict[key] = e - 1
            term = (tuple(sorted(sdict.items())), d, p)
            prev = acc.get(term, GR_ZERO)
            acc[term] = prev + c * e
        return ScalarExpr(acc, _raw=True)

    def translate_space(self, xname: str, shift_name: str) -> "ScalarExpr":
        """Substitute x -> x + a, with a the named shift vector symbol."""
        acc: dict[Term, GaussianRational] = {}
        for (s, d, p), c in self.terms.items():
            vec = dict(p).get(("x", xname))
            if vec is None:
                acc[(s, d, p)] = acc.get((s, d, p), GR_ZERO) + c
                continue
            newp = _phase_normal(list(p) + [(("x", shift_name), vec)])
            t = (s, d, newp)
            acc[t] = acc.get(t, GR_ZERO) + c
        return ScalarExpr(acc, _raw=True)

    def spatial_integrate(self, xname: str, strict: bool = True) -> "ScalarExpr":
        """Integrate over the spatial symbol: lattice plane waves are
        orthonormal, so a term survives iff its x-coefficient vanishes."""
        acc: dict[Term, GaussianRational] = {}
        for (s, d, p), c in self.terms.items():
            pd = dict(p)
            if ("x", xname) in pd:
                continue
            if strict:
                for key in pd:
                    if key[0] == "x":
                        raise NonIntegrablePhaseError(
                            f"phase depends on foreign position {key[1]!r}")
            acc[(s, d, p)] = acc.get((s, d, p), GR_ZERO) + c
        return ScalarExpr(acc, _raw=True)

    def has_time_dependence(self) -> bool:
        for (_, _, p) in self.terms:
            for key, _ in p:
                if key[0] == "t":
                    return True
        return False

    # -- delta machinery --------------------------------------------------

    def delta_contract(self, var: str, mode_ids: Sequence[int],
                       allow_free_sum: bool = True) -> "ScalarExpr":
        """Sum over the mode-index variable, consuming sifting deltas."""
        tok = var_tok(var)
        out = _ZERO
        for (s, d, p), c in self.terms.items():
            partner = None
            for pair in d:
                if pair[0] == tok:
                    partner = pair[1]
                    break
                if pair[1] == tok:
                    partner = pair[0]
                    break
            one = ScalarExpr({(s, d, p): c}, _raw=True)
            if partner is not None:
                out = out + _substitute_token(one, tok, partner)
            else:
                if not allow_free_sum:
                    raise UnboundIndexError(
                        f"index {var!r} is not bound by any delta")
                for mid in mode_ids:
                    out = out + _substitute_token(one, tok, mode_tok(mid))
        return out

    # -- numeric evaluation ----------------------------------------------

    def evaluate(self, bindings: Mapping | None = None) -> complex:
        bindings = bindings or {}
        total = 0j
        for (s, d, p), c in self.terms.items():
            if d:
                raise UnboundIndexError(f"unresolved delta factors {d}")
            val = complex(c)
            for key, e in s:
                kind = key[0]
                if kind == "rad":
                    base = math.sqrt(key[1])
                elif kind == "wgt":
                    base = (2.0 * math.sqrt(key[1])) ** -0.5
                elif kind == "kw":
                    m, r = float(key[1]), float(key[2])
                    base = (2.0 * m * (math.sqrt(r) + m)) ** -0.5
                else:
                    _, name, tag, tv = key
                    bkey = name if tag == "" else (name, (tag, tv))
                    if bkey not in bindings:
                        raise UnboundSymbolError(f"no binding for symbol {bkey!r}")
                    base = bindings[bkey]
                val *= base ** e
            theta = 0.0
            for key, v in p:
                if key[0] == "c":
                    theta += qsum_float(v)
                elif key[0] == "t":
                    if key[1] not in bindings:
                        raise UnboundSymbolError(f"no binding for time {key[1]!r}")
                    theta += qsum_float(v) * float(bindings[key[1]])
                else:
                    if key[1] not in bindings:
                        raise UnboundSymbolError(f"no binding for position {key[1]!r}")
                    xv = bindings[key[1]]
                    theta += sum(float(a) * float(b) for a, b in zip(v, xv))
            total += val * cmath.exp(1j * theta)
        return total

    # -- display -----------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (s, d, p), c in sorted(self.terms.items()):
            bits = [repr(c)]
            for key, e in s:
                bits.append(_sym_str(key) + (f"^{e}" if e != 1 else ""))
            for pair in d:
                bits.append(f"δ({_tok_str(pair[0])},{_tok_str(pair[1])})")
            if p:
                bits.append(_phase_str(p))
            parts.append("·".join(bits))
        return " + ".join(parts)


def _substitute_token(e: ScalarExpr, old: tuple, new: tuple) -> ScalarExpr:
    raw: dict[Term, GaussianRational] = {}
    for (s, d, p), c in e.terms.items():
        syms = []
        for key, ex in s:
            if key[0] == "sym" and (key[2], key[3]) == old:
                key = ("sym", key[1], new[0], new[1])
            syms.append((key, ex))
        sd: dict = {}
        for k, ex in syms:
            sd[k] = sd.get(k, 0) + ex
        deltas = []
        for t1, t2 in d:
            t1 = new if t1 == old else t1
            t2 = new if t2 == old else t2
            deltas.append((t1, t2))
        term_syms = tuple(sorted(sd.items()))
        # re-run the delta normalisation (a pair may now be concrete)
        dead = False
        keep = []
        for t1, t2 in deltas:
            pr = _delta_pair(t1, t2)
            if pr == 0:
                dead = True
                break
            if pr is not None:
                keep.append(pr)
        if dead:
            continue
        term = (term_syms, tuple(sorted(set(keep))), p)
        raw[term] = raw.get(term, GR_ZERO) + c
    return ScalarExpr(raw)


def _normalize(raw: Mapping[Term, GaussianRational]) -> dict:
    out: dict[Term, GaussianRational] = {}
    work = list(raw.items())
    while work:
        (syms, deltas, phase), coeff = work.pop()
        if coeff is None or coeff.is_zero():
            continue
        dead = False
        keep_d = []
        for t1, t2 in deltas:
            pr = _delta_pair(t1, t2)
            if pr == 0:
                dead = True
                break
            if pr is not None:
                keep_d.append(pr)
        if dead:
            continue
        mult: ScalarExpr | None = None
        keep_s = []
        for key, e in syms:
            kind = key[0]
            if kind == "rad" and e >= 2:
                coeff = coeff * (Fraction(key[1]) ** (e // 2))
                e = e % 2
            elif kind in ("wgt", "kw") and e >= 2:
                sq = _square_value(key) ** (e // 2)
                mult = sq if mult is None else mult * sq
                e = e % 2
            if e:
                keep_s.append((key, e))
        term = (tuple(sorted(keep_s)), tuple(sorted(set(keep_d))), phase)
        if mult is not None:
            for (s2, d2, p2), c2 in (ScalarExpr({term: coeff}, _raw=True) * mult).terms.items():
                work.append(((s2, d2, p2), c2))
            continue
        prev = out.get(term)
        s = coeff if prev is None else prev + coeff
        if s.is_zero():
            out.pop(term, None)
        else:
            out[term] = s
    return out


def _sym_str(key: tuple) -> str:
    kind = key[0]
    if kind == "sym":
        _, name, tag, tv = key
        if tag == "":
            return name
        return f"{name}({_tok_str((tag, tv))})"
    if kind == "rad":
        return f"√{key[1]}"
    if kind == "wgt":
        return f"(2E[{key[1]}])^-½"
    if kind == "kw":
        return f"(2·{key[1]}·(E[{key[2]}]+{key[1]}))^-½"
    return str(key)


def _tok_str(tok: tuple) -> str:
    return f"p{tok[1]}" if tok[0] == "m" else str(tok[1])


def _phase_str(p: tuple) -> str:
    bits = []
    for key, v in p:
        if key[0] == "c":
            bits.append(_qsum_str(v))
        elif key[0] == "t":
            bits.append(f"({_qsum_str(v)})·{key[1]}")
        else:
            bits.append(f"({v[0]},{v[1]},{v[2]})·{key[1]}")
    return "e^{i[" + " + ".join(bits) + "]}"


def _qsum_str(v: QSum) -> str:
    return " + ".join(str(c) if d == 1 else f"{c}√{d}" for d, c in v) or "0"


_ZERO = ScalarExpr({}, _raw=True)
_ONE = ScalarExpr({((), (), ()): GR_ONE}, _raw=True)
_I = ScalarExpr({((), (), ()): GR_I}, _raw=True)


class ModeIndex:
    """One lattice mode: small id plus exact covariant spatial momentum."""

    __slots__ = ("id", "momentum")

    def __init__(self, mid: int, momentum):
        object.__setattr__(self, "id", mid)
        object.__setattr__(self, "momentum", tuple(_frac(x) for x in momentum))

    def __setattr__(self, *a):
        raise AttributeError("ModeIndex is immutable")

    @staticmethod
    def make(mid: int, momentum) -> "ModeIndex":
        return ModeIndex(mid, momentum)

    def __eq__(self, other):
        if not isinstance(other, ModeIndex):
            return NotImplemented
        return self.id == other.id and self.momentum == other.momentum

    def __hash__(self):
        return hash((self.id, self.momentum))

    def __repr__(self):
        return f"p{self.id}{tuple(str(x) for x in self.momentum)}"

    def token(self) -> tuple:
        return mode_tok(self.id)


def scalar_add(a: ScalarExpr, b: ScalarExpr) -> ScalarExpr:
    """Canonical-form sum (module-level alias for the operator)."""
    return a + b


def delta_contract(e: ScalarExpr, var: str, mode_ids: Sequence[int],
                   allow_free_sum: bool = True) -> ScalarExpr:
    return e.delta_contract(var, mode_ids, allow_free_sum)
