"""Fracture squares for rings with bounded d-torsion, executed on small rings.

If ``S`` has bounded ``d``-torsion then ``S`` is the pullback of ``S[1/d]``
and the ``d``-adic completion over ``(S^_d)[1/d]``.  This module runs the
constructive half of that statement as an algorithm: given a compatible
pair (u, v) it rebuilds the element of ``S`` mapping to it.

Rings are finitely presented over Z (:class:`DeskRing`).  Normal forms
come from the Hermite form of the relation lattice in bounded degree, with
high-degree monomials eliminated first.  This decides equality whenever the
degree-``D`` part of the ideal is spanned by monomial multiples of the
relations of degree ``<= D`` (true for monomial relations such as ``2x``,
``x^2``).  Completion elements are finite compatible sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .exactpoly import Polynomial, Truncation, format_poly, x_var
from .lattice import IntegerLattice
from .rings import Inconclusive
from .series import EXACT, TruncSeries, series_divide


@dataclass(frozen=True)
class Unbounded:
    """No stable torsion exponent found up to ``depth`` (not a disproof)."""

    depth: int

    def __str__(self):
        return f"unbounded up to depth {self.depth}"


class DeskRing:
    """``Z[gens]/(relations)`` with exhaustive small-element enumeration."""

    def __init__(self, name: str, gens=(), relations=(), deg_cap: int = 4, coeff_cap: int = 4,
                 slack: int = 2):
        self.name = name
        self.vars = tuple(x_var(g) for g in gens)
        self.keys = tuple(v.key for v in self.vars)
        self.relations = tuple(self._own(r) for r in relations)
        for r in self.relations:
            if any(c.denominator != 1 for _, c in r.items()):
                raise ValueError(f"relation {r} has non-integer coefficients")
        self.deg_cap = deg_cap
        self.coeff_cap = coeff_cap
        self.slack = slack
        self._lattices: dict = {}

    def __repr__(self):
        return f"DeskRing({self.name})"

    # -- elements ----------------------------------------------------------
    def gen(self, name: str) -> Polynomial:
        for v in self.vars:
            if v.name == name:
                return Polynomial.var(v)
        raise KeyError(name)

    def const(self, c: int) -> Polynomial:
        return Polynomial.const(c)

    def _own(self, p) -> Polynomial:
        p = p if isinstance(p, Polynomial) else Polynomial.const(p)
        if any(v.key not in self.keys for v in p.variables()):
            raise ValueError(f"{p} uses variables outside {self.name}")
        return p

    def mul(self, a, b) -> Polynomial:
        return self._own(a).mul(self._own(b))

    def sub(self, a, b) -> Polynomial:
        return self._own(a) - self._own(b)

    def add(self, a, b) -> Polynomial:
        return self._own(a) + self._own(b)

    def power(self, a, n: int) -> Polynomial:
        return self._power(self._own(a), n)

    @lru_cache(maxsize=4096)
    def _power(self, a: Polynomial, n: int) -> Polynomial:
        if n == 0:
            return Polynomial.const(1)
        return self._power(a, n - 1).mul(a)

    # -- monomial bookkeeping ----------------------------------------------
    def _exps(self, p: Polynomial) -> dict:
        out = {}
        for mono, c in p.items():
            e = [0] * len(self.vars)
            for idx in range(0, len(mono), 2):
                e[self.keys.index(mono[idx])] = mono[idx + 1]
            out[tuple(e)] = int(c)
        return out

    def _poly(self, exps: dict) -> Polynomial:
        return Polynomial({tuple(x for k, n in zip(self.keys, e) if n for x in (k, n)): c
                           for e, c in exps.items() if c})

    def degree(self, p: Polynomial) -> int:
        return max((sum(e) for e in self._exps(p)), default=0)

    @lru_cache(maxsize=None)
    def monomials(self, D: int) -> tuple:
        """Exponent tuples of total degree <= D, highest degree first."""
        n = len(self.vars)
        out = [e for e in itertools.product(range(D + 1), repeat=n) if sum(e) <= D]
        out.sort(key=lambda e: (-sum(e), tuple(-x for x in e)))
        return tuple(out)

    def _vector(self, p: Polynomial, D: int) -> list[int]:
        cols = {e: k for k, e in enumerate(self.monomials(D))}
        v = [0] * len(cols)
        for e, c in self._exps(p).items():
            v[cols[e]] = c
        return v

    def _from_vector(self, v, D: int) -> Polynomial:
        return self._poly(dict(zip(self.monomials(D), v)))

    def _shifted(self, p: Polynomial, D: int) -> list[list[int]]:
        """Vectors of ``mono * p`` for every monomial keeping degree <= D."""
        dp = self.degree(p)
        out = []
        for e in self.monomials(max(D - dp, 0)):
            if sum(e) + dp > D:
                continue
            q = p.mul(self._poly({e: 1}))
            out.append(self._vector(q, D))
        return out

    def _ideal_rows(self, D: int) -> list[list[int]]:
        rows = []
        for r in self.relations:
            rows += self._shifted(r, D)
        return rows

    def _lattice(self, D: int, d: Polynomial | None = None, n: int = 0):
        key = (D, None if d is None else format_poly(d), n)
        got = self._lattices.get(key)
        if got is None:
            head = [] if d is None else self._shifted(self.power(d, n), D)
            got = (len(head), IntegerLattice(len(self.monomials(D)), head + self._ideal_rows(D)))
            self._lattices[key] = got
        return got

    def _work_degree(self, *ps) -> int:
        rel = max((self.degree(r) for r in self.relations), default=0)
        return max([rel] + [self.degree(p) for p in ps]) + self.slack

    # -- decisions -----------------------------------------------------------
    def normal_form(self, p) -> Polynomial:
        p = self._own(p)
        D = self._work_degree(p)
        _, lat = self._lattice(D)
        residue, _ = lat.reduce(self._vector(p, D))
        return self._from_vector(residue, D)

    def equal(self, a, b) -> bool:
        return not self.normal_form(self.sub(a, b))

    def is_zero(self, a) -> bool:
        return not self.normal_form(a)

    def divide_by_power(self, x, d, n: int) -> Polynomial | None:
        """Some ``w`` with ``d^n w == x`` in S, or None."""
        x, d = self._own(x), self._own(d)
        D = self._work_degree(x, self.power(d, n))
        head, lat = self._lattice(D, d, n)
        sol = lat.solve(self._vector(x, D))
        if sol is None:
            return None
        dn = self.power(d, n)
        dp = self.degree(dn)
        monos = [e for e in self.monomials(max(D - dp, 0)) if sum(e) + dp <= D]
        return self._poly({e: c for e, c in zip(monos, sol[:head]) if c})

    def in_power_ideal(self, x, d, m: int) -> bool:
        return self.divide_by_power(x, d, m) is not None

    # -- enumeration ---------------------------------------------------------
    def elements(self, limit: int = 200_000):
        """Distinct normal forms of all elements within the degree and coefficient caps."""
        D = max(self.deg_cap, self._work_degree() - self.slack)
        monos = [e for e in self.monomials(D) if sum(e) <= self.deg_cap]
        size = (2 * self.coeff_cap + 1) ** len(monos)
        if size > limit:
            raise Inconclusive(f"{size} raw elements exceed the enumeration limit {limit}")
        _, lat = self._lattice(D)
        allcols = self.monomials(D)
        pos = [allcols.index(e) for e in monos]
        seen = {}
        rng = range(-self.coeff_cap, self.coeff_cap + 1)
        for coeffs in itertools.product(rng, repeat=len(monos)):
            v = [0] * len(allcols)
            for p, c in zip(pos, coeffs):
                v[p] = c
            residue = tuple(lat.reduce(v)[0])
            if residue not in seen:
                seen[residue] = None
        return [self._from_vector(r, D) for r in seen]


# --- torsion -----------------------------------------------------------------

def torsion_order(S: DeskRing, d, x, depth: int) -> int | None:
    """Least ``k <= depth`` with ``d^k x == 0``, or None."""
    y = S._own(x)
    for k in range(depth + 1):
        if S.is_zero(y):
            return k
        y = S.mul(d, y)
    return None


def torsion_exponent(S: DeskRing, d, depth: int = 6, elements=None):
    """Smallest N with ann(d^k) = ann(d^N) for all k <= depth, on enumerated elements."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    elements = S.elements() if elements is None else elements
    N = 0
    for x in elements:
        k = torsion_order(S, d, x, depth)
        if k is not None:
            N = max(N, k)
    if N >= depth:
        return Unbounded(depth)
    return N


# --- fracture data -----------------------------------------------------------

@dataclass(frozen=True)
class FractureDatum:
    """``u = u_num / d^i`` in S[1/d] and ``v`` given by ``v_m`` (mod d^m), m = 0..P."""

    u_num: object
    i: int
    v: tuple

    @property
    def precision(self) -> int:
        return len(self.v) - 1


def image_datum(S, d, s, P: int, i: int = 0, tweak=None) -> FractureDatum:
    """The pair of ``s``: ``u = d^i s / d^i`` and ``v_m = s + d^m * tweak``."""
    u_num = S.mul(S.power(d, i), s)
    seq = []
    for m in range(P + 1):
        vm = s if tweak is None else S.add(s, S.mul(S.power(d, m), tweak))
        seq.append(vm)
    return FractureDatum(u_num, i, tuple(seq))


def is_compatible(S, d, datum: FractureDatum) -> bool:
    return all(S.in_power_ideal(S.sub(datum.v[m + 1], datum.v[m]), d, m)
               for m in range(datum.precision))


def agreement_exponent(S, d, datum: FractureDatum, precision: int,
                       j_budget: int | None = None) -> int | None:
    """Least ``j`` with ``d^j u_num == d^(i+j) v`` modulo ``d^precision``."""
    if precision > datum.precision:
        raise Inconclusive(f"precision {precision} exceeds the datum's {datum.precision}")
    j_budget = precision // 2 if j_budget is None else j_budget
    vP = datum.v[precision]
    for j in range(j_budget + 1):
        lhs = S.mul(S.power(d, j), datum.u_num)
        rhs = S.mul(S.power(d, datum.i + j), vP)
        if S.in_power_ideal(S.sub(lhs, rhs), d, precision):
            return j
    return None


def fracture_agree(S, d, datum: FractureDatum, precision: int,
                   j_budget: int | None = None) -> bool:
    """Do u and v have the same image in (S^_d)[1/d], judged modulo d^precision?"""
    return agreement_exponent(S, d, datum, precision, j_budget) is not None


@dataclass
class FractureTrace:
    j: int
    N: int
    w: list = field(default_factory=list)
    v_corrected: list = field(default_factory=list)
    x: list = field(default_factory=list)
    result: object = None


def fracture_reconstruct(S, d, N: int, datum: FractureDatum, precision: int | None = None,
                         trace: bool = False):
    """The element of S mapping to (u, v), following the stabilisation argument.

    Corrects ``v_m`` to ``v_m + d^m w_m`` so that ``d^j u_num = d^(i+j) v_m``,
    then uses the torsion bound to show the corrected sequence is constant
    from ``m = N`` on.  Raises :class:`Inconclusive` when a step cannot be
    carried out at the available precision.
    """
    precision = datum.precision if precision is None else precision
    j = agreement_exponent(S, d, datum, precision)
    if j is None:
        raise Inconclusive("u and v do not agree within the j budget")
    i = datum.i
    if i + j + N + 1 > precision:
        raise Inconclusive(f"need precision {i + j + N + 1}, have {precision}")
    tr = FractureTrace(j, N)
    dj_u = S.mul(S.power(d, j), datum.u_num)
    for m in range(N + 2):
        target = S.sub(dj_u, S.mul(S.power(d, i + j), datum.v[m]))
        w = S.divide_by_power(target, d, i + j + m)
        if w is None:
            raise Inconclusive(f"no correction w_{m}: {target} is not divisible by d^{i + j + m}")
        tr.w.append(w)
        tr.v_corrected.append(S.add(datum.v[m], S.mul(S.power(d, m), w)))
    for m in range(N + 1):
        x = S.divide_by_power(S.sub(tr.v_corrected[m + 1], tr.v_corrected[m]), d, m)
        if x is None:
            raise Inconclusive(f"corrected sequence is not compatible at m={m}")
        if not S.is_zero(S.mul(S.power(d, N), x)):
            raise Inconclusive(f"d^{N} x_{m} != 0: the torsion bound {N} is too small")
        tr.x.append(x)
    if not S.equal(tr.v_corrected[N], tr.v_corrected[N + 1]):
        raise Inconclusive("corrected sequence did not stabilise")
    tr.result = S.normal_form(tr.v_corrected[N])
    return tr if trace else tr.result


def kernel_probe(S: DeskRing, d, precision: int, depth: int, elements=None) -> list:
    """Enumerated nonzero elements dying in both S[1/d] and S/d^precision."""
    elements = S.elements() if elements is None else elements
    bad = []
    for s in elements:
        if not s:
            continue
        if torsion_order(S, d, s, depth) is not None and S.in_power_ideal(s, d, precision):
            bad.append(s)
    return bad


def round_trip(S: DeskRing, d, N: int, s, precision: int) -> list[str]:
    """Reconstruct ``s`` from several representatives of its pair; list any mismatches."""
    problems = []
    tweaks = [None, S.const(1)] + [Polynomial.var(v) for v in S.vars]
    for i in (0, 1):
        for tweak in tweaks:
            datum = image_datum(S, d, s, precision, i=i, tweak=tweak)
            got = fracture_reconstruct(S, d, N, datum, precision)
            if not S.equal(got, s):
                problems.append(f"{s} with i={i}, tweak={tweak} rebuilt as {got}")
    return problems


# --- the desk suite ------------------------------------------------------------

def desk_suite(deg_cap: int = 4, coeff_cap: int = 4):
    """(ring, d, expected torsion exponent) for the standard small examples."""
    x = Polynomial.var(x_var("x"))
    Z = DeskRing("Z", (), (), deg_cap, coeff_cap)
    A = DeskRing("Z[x]/(2x)", ("x",), (2 * x,), deg_cap, coeff_cap)
    B = DeskRing("Z[x]/(x^2)", ("x",), (x * x,), deg_cap, coeff_cap)
    two = Polynomial.const(2)
    return [(Z, two, 0), (A, x, 1), (A, two, 1), (B, x, 2), (B, two, 0)]


# --- the Rhat instance ---------------------------------------------------------

class RHatRing:
    """Rhat = L[[e]]/[2](e) with d = e, enough structure for ``fracture_agree``."""

    def __init__(self, tr: Truncation):
        from .lazard import two_series

        self.tr = tr
        self.two = two_series(tr)

    def mul(self, a, b):
        return self._s(a).mul(self._s(b))

    def sub(self, a, b):
        return self._s(a) - self._s(b)

    def add(self, a, b):
        return self._s(a) + self._s(b)

    def power(self, a, n: int):
        return self._s(a).pow(n)

    def _s(self, a):
        return a if isinstance(a, TruncSeries) else TruncSeries.const(a, self.tr)

    def in_power_ideal(self, x, d, m: int) -> bool:
        """``x in (e^m, [2](e))``; ``d`` must be e."""
        from .lazard import integrality_witness

        x = self._s(x)
        if m == 0:
            return True
        if x.coeffs and x.valuation() < 1:
            return False
        if m - 1 > self.tr.order:
            raise Inconclusive(f"e^{m} is beyond the series order {self.tr.order}")
        q = series_divide(x, self.two, order=m - 1)
        return all(integrality_witness(c, self.tr) is None for c in q.coeffs.values())

    def e(self) -> TruncSeries:
        return TruncSeries.monomial(1, self.tr)


def rhat_torsion_instance(tr: Truncation,
                          precision: int | None = None) -> tuple[bool, int | None]:
    """(agree?, j) for u = 0 in R[1/e] and v = [2](e)/e in Rhat."""
    S = RHatRing(tr)
    v = series_divide(S.two, S.e())
    P = min(tr.order, 2 * tr.N) if precision is None else precision
    datum = FractureDatum(TruncSeries({}, EXACT, tr), 0, tuple([v] * (P + 1)))
    j = agreement_exponent(S, S.e(), datum, P)
    return j is not None, j


__all__ = ["DeskRing", "Unbounded", "FractureDatum", "FractureTrace", "torsion_order",
           "torsion_exponent", "image_datum", "is_compatible", "agreement_exponent",
           "fracture_agree", "fracture_reconstruct", "kernel_probe", "round_trip", "desk_suite",
           "RHatRing", "rhat_torsion_instance"]
