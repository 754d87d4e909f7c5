"""Computable models of R, R' = L[b][1/b0], Rhat = L[[e]]/[2](e), Rhat[1/e]
and the finite stages A_k, B_k, Rbar_k.

Elements of R are stored as pairs (image in R', image in Rhat); the pair
map is injective because R is the pullback of R' and Rhat over Rhat[1/e].

Equality in Rhat and Rhat[1/e] is decided by dividing by [2](e) = e*(2 + ...)
over the rationals.  The quotient is unique, so the two sides agree in the
integral ring exactly when that cofactor has coefficients in L; the
cofactor is certified coefficient by coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import (B0, E, Family, Polynomial, Truncation, b_var, format_poly, s_var, t_var)
from .lazard import fgl, integrality_witness, two_series
from .series import EXACT, NotDivisible, TruncSeries, series_divide


class Inconclusive(RuntimeError):
    """A budget (e-power search, enumeration cap, precision) ran out."""


class PullbackError(AssertionError):
    """The two components of a pair disagree in Rhat[1/e]."""


@dataclass
class Comparison:
    """Outcome of an equality test; truthy iff equal."""

    equal: bool
    cofactor: object = None
    power: int = 0
    witness: str | None = None

    def __bool__(self):
        return self.equal


# --- R generators (words) -------------------------------------------------

def gen_e() -> Polynomial:
    return Polynomial.var(E)


def gen_s(i: int, j: int) -> Polynomial:
    """The generator s_ij, with b_k = s_0k and e = b_0 = s_00 resolved."""
    if i == 0 and j == 0:
        return Polynomial.var(E)
    if i == 0:
        return Polynomial.var(b_var(j))
    return Polynomial.var(s_var(i, j))


def gen_b(k: int) -> Polynomial:
    return gen_s(0, k)


def gen_t(k: int) -> Polynomial:
    return Polynomial.var(t_var(k))


def parse_generator(name: str) -> Polynomial:
    """Parse ``e``, ``b3``, ``t2``, ``s(1,2)``, ``s1,2`` or ``s12`` (single digits)."""
    import re

    name = name.strip().replace(" ", "")
    if name == "e":
        return gen_e()
    m = re.fullmatch(r"([bt])_?(\d+)", name)
    if m:
        k = int(m.group(2))
        return gen_b(k) if m.group(1) == "b" else gen_t(k)
    m = re.fullmatch(r"s_?\(?(\d+),(\d+)\)?", name) or re.fullmatch(r"s_?(\d)(\d)", name)
    if m:
        return gen_s(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"cannot parse generator name {name!r}")


# --- Rhat and Rhat[1/e] ---------------------------------------------------

def _two(tr: Truncation) -> TruncSeries:
    return two_series(tr)


def _integral_series(q: TruncSeries) -> str | None:
    for n in q.exponents():
        w = integrality_witness(q.coeffs[n], q.tr)
        if w is not None:
            return f"cofactor term e^{n}: {w}"
    return None


def rhat_equal(f: TruncSeries, g: TruncSeries) -> Comparison:
    """Decide ``f == g`` in L[[e]]/[2](e) at the known precision."""
    d = f - g
    if d.coeffs and d.valuation() < 0:
        raise ValueError("Rhat elements are power series; use rhatloc_equal for Laurent series")
    try:
        q = series_divide(d, _two(f.tr))
    except NotDivisible as exc:
        return Comparison(False, witness=f"difference has term {format_poly(exc.coefficient)}"
                                         f"*e^{exc.exponent} not divisible by [2](e)")
    bad = _integral_series(q)
    if bad:
        return Comparison(False, cofactor=q, witness=bad)
    return Comparison(True, cofactor=q)


def rhatloc_equal(f: TruncSeries, g: TruncSeries, budget: int | None = None) -> Comparison:
    """Decide ``f == g`` in Rhat[1/e].

    Equal iff ``e^w (f - g) = c [2](e)`` with ``c`` integral; the result
    carries ``c`` and the least such ``w``.  Raises :class:`Inconclusive`
    if ``w`` would exceed ``budget`` (default N).
    """
    tr = f.tr
    budget = tr.N if budget is None else budget
    d = f - g
    q = series_divide(d, _two(tr), laurent=True)
    w = max(0, -q.valuation()) if q.coeffs else 0
    if w > budget:
        raise Inconclusive(f"needs e^{w} to clear denominators, budget is e^{budget}")
    bad = _integral_series(q)
    if bad:
        return Comparison(False, cofactor=q, power=w, witness=bad)
    return Comparison(True, cofactor=q.shift(w), power=w)


# --- pair representation -------------------------------------------------

@dataclass(frozen=True)
class RElement:
    """Element of R as (theta-image in R', phi-image in Rhat)."""

    rprime: Polynomial
    rhat: TruncSeries
    tr: Truncation = field(compare=False)

    def __add__(self, other):
        return RElement(self.rprime + other.rprime, self.rhat + other.rhat, self.tr)

    def __sub__(self, other):
        return RElement(self.rprime - other.rprime, self.rhat - other.rhat, self.tr)

    def __neg__(self):
        return RElement(-self.rprime, -self.rhat, self.tr)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RElement(self.rprime.scale(other), self.rhat.scale_by(other), self.tr)
        return RElement(self.rprime.mul(other.rprime, self.tr), self.rhat.mul(other.rhat),
                        self.tr)

    __rmul__ = __mul__

    def compare(self, other) -> Comparison:
        diff = (self.rprime - other.rprime).truncate(self.tr)
        if diff:
            return Comparison(False, witness=f"R' components differ by {diff}")
        return rhat_equal(self.rhat, other.rhat)

    def is_zero(self) -> Comparison:
        return self.compare(RElement(Polynomial.const(0), TruncSeries({}, EXACT, self.tr), self.tr))

    def __str__(self):
        return f"({self.rprime}, {self.rhat})"


@dataclass(frozen=True)
class RLocElement:
    """Element of R[1/e] as (element of R', element of Rhat[1/e])."""

    rprime: Polynomial
    rhatloc: TruncSeries
    tr: Truncation = field(compare=False)

    @classmethod
    def one(cls, tr: Truncation) -> "RLocElement":
        return cls(Polynomial.const(1), TruncSeries.const(1, tr), tr)

    @classmethod
    def from_relement(cls, x: RElement) -> "RLocElement":
        return cls(x.rprime, x.rhat, x.tr)

    def __add__(self, other):
        return RLocElement(self.rprime + other.rprime, self.rhatloc + other.rhatloc, self.tr)

    def __sub__(self, other):
        return RLocElement(self.rprime - other.rprime, self.rhatloc - other.rhatloc, self.tr)

    def __neg__(self):
        return RLocElement(-self.rprime, -self.rhatloc, self.tr)

    def mul(self, other, tr=None):
        return RLocElement(self.rprime.mul(other.rprime, self.tr), self.rhatloc.mul(other.rhatloc),
                           self.tr)

    __mul__ = mul

    def scale_by(self, c: Polynomial) -> "RLocElement":
        return RLocElement(self.rprime.mul(c, self.tr), self.rhatloc.scale_by(c), self.tr)

    def compare(self, other) -> Comparison:
        diff = (self.rprime - other.rprime).truncate(self.tr)
        if diff:
            return Comparison(False, witness=f"R' components differ by {diff}")
        return rhatloc_equal(self.rhatloc, other.rhatloc)


def build_relement(w: Polynomial, tr: Truncation, suite=None, verify: bool = True) -> RElement:
    """Pair of images of an R-word; checks that xi(theta w) == zeta(phi w)."""
    from .maps import map_suite

    suite = suite or map_suite(tr)
    rp = suite.theta.apply(w)
    rh = suite.phi.apply(w)
    if verify:
        got = rhatloc_equal(suite.xi.apply(rp), rh)
        if not got:
            raise PullbackError(f"pair for {w} is not compatible: {got.witness}")
    return RElement(rp, rh, tr)


# --- A_k, B_k and Rbar_k --------------------------------------------------

@dataclass(frozen=True)
class RBarModel:
    k: int
    tr: Truncation
    a_gens: tuple
    b_gens: tuple
    g: Polynomial
    ideal: dict

    def ideal_generators(self):
        for fam, gens in self.ideal.items():
            for label, p in gens:
                yield fam, label, p


def bk_s(i: int, j: int, k: int) -> Polynomial:
    """s_ij as a B_k generator; s_k0 is zero there."""
    if i == k and j == 0:
        return Polynomial.const(0)
    return gen_s(i, j)


def rbar_model(k: int, tr: Truncation) -> RBarModel:
    if k < 2 or k > tr.N:
        raise ValueError(f"k must satisfy 1 < k <= N={tr.N}, got {k}")
    law = fgl(tr)
    J = tr.N
    e = gen_e()
    a_gens = (t_var(k),) + tuple(s_var(k, j) for j in range(1, J + 1))
    b_gens = tuple(t_var(i) for i in range(k + 1)) + tuple(
        v for i in range(k + 1) for j in range(J + 1) if not (i == k and j == 0)
        for v in gen_s(i, j).variables())
    g = Polynomial.const(0)
    for l in range(k):
        for m in range(k):
            if m + l >= 1:
                g = g + law.a(m, l) * Polynomial.var(E, m + l - 1)
    for l in range(1, k):
        g = g + Polynomial.var(s_var(k, l)) * Polynomial.var(E, k + l - 1)
    g = g + gen_t(k) * Polynomial.var(E, k - 1)
    ideal = {
        "units": [("t0", gen_t(0)), ("t1+1", gen_t(1) + 1), ("s(1,0)-1", bk_s(1, 0, k) - 1)],
        "s_i0": [(f"s({i},0)", bk_s(i, 0, k)) for i in range(2, k + 1)],
        "t-chain": [(f"t{i}-b{i}-e*t{i + 1}", gen_t(i) - gen_b(i) - e * gen_t(i + 1))
                    for i in range(k)],
        "s-chain": [(f"s({i},{j})-a({i},{j})-e*s({i + 1},{j})",
                     bk_s(i, j, k) - law.a(i, j) - e * bk_s(i + 1, j, k))
                    for i in range(k) for j in range(J + 1)],
    }
    return RBarModel(k, tr, a_gens, b_gens, g.truncate(tr), ideal)


def divide_in_poly_ring(f: Polynomial, g: Polynomial, tr: Truncation) -> Comparison:
    """Decide ``f in (g)`` inside A[e] where ``g(0)`` is a nonzero rational.

    Computes the power-series quotient over Q, checks it is a polynomial
    reproducing ``f`` exactly, and certifies its coefficients integral.
    """
    tr2 = tr.with_order(max(tr.order, (f.max_exponent(E) or 0) + 1))
    if not f:
        return Comparison(True, cofactor=Polynomial.const(0))
    G = TruncSeries(g.collect(E), EXACT, tr2)
    F = TruncSeries(f.collect(E), EXACT, tr2)
    if G.valuation() != 0 or not G.coeffs[0].is_constant():
        raise ValueError("divisor must have a nonzero rational constant term")
    deg_f = f.max_exponent(E)
    deg_g = g.max_exponent(E)
    if deg_f < deg_g:
        return Comparison(False, witness=f"e-degree {deg_f} below divisor degree {deg_g}")
    q = series_divide(F, G, order=deg_f - deg_g + 1).to_poly()
    rem = (f - q.mul(g, tr2)).truncate(tr2)
    if rem:
        return Comparison(False, cofactor=q, witness=f"remainder {rem}")
    bad = integrality_witness(q, tr)
    if bad:
        return Comparison(False, cofactor=q, witness=bad)
    return Comparison(True, cofactor=q)
