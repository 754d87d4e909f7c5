"""The Lazard ring through the universal logarithm.

L embeds in ``Q[m1, m2, ...]`` by writing the universal formal group law as
``F(x, y) = exp(log x + log y)`` with ``log x = x + sum m_i x^(i+1)``.
Integrality (membership in the image of L) is certified separately, by
lattice membership over monomials in the coefficients ``a_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, lcm

from .exactpoly import (Family, Polynomial, Truncation, format_mono, homogeneous_degree, m_var,
                        mono_weight, substitute_hom, x_var)
from .lattice import IntegerLattice
from .series import EXACT, TruncSeries

X = x_var("x", -2)
Y = x_var("y", -2)
Z = x_var("z", -2)


class TruncationRangeError(IndexError):
    pass


class FormalGroupLaw:
    """Universal formal group law over the weight-truncated model of L.

    In the truncation every coefficient of weight > N vanishes, so ``log``,
    ``exp`` and ``F`` are polynomials of degree at most ``N + 1``.
    """

    def __init__(self, tr: Truncation):
        self.tr = tr
        top = tr.N + 1
        self.top = top
        one = Polynomial.const(1)
        zero = Polynomial.const(0)
        self.log_coeffs = [zero, one] + [Polynomial.var(m_var(i)) for i in range(1, tr.N + 1)]
        self.exp_coeffs = self._invert(self.log_coeffs)
        self._log_powers = self._powers(self.log_coeffs)
        self._table: dict[tuple[int, int], Polynomial] = {}
        for p in range(top + 1):
            for q in range(p, top + 1 - p):
                self._table[(p, q)] = self._table[(q, p)] = self._coeff(p, q)

    # -- univariate helpers ------------------------------------------------
    def _mul(self, f: list, g: list) -> list:
        top = self.top
        out = [Polynomial.const(0)] * (top + 1)
        for i, fi in enumerate(f):
            if not fi:
                continue
            for j in range(0, top + 1 - i):
                gj = g[j] if j < len(g) else None
                if gj:
                    out[i + j] = out[i + j] + fi.mul(gj, self.tr)
        return out

    def _powers(self, f: list) -> list[list]:
        """``powers[a][p]`` = coefficient of x^p in f(x)^a, for a <= top."""
        one = [Polynomial.const(1)] + [Polynomial.const(0)] * self.top
        out = [one]
        for _ in range(self.top):
            out.append(self._mul(out[-1], f))
        return out

    def _invert(self, f: list) -> list:
        """Compositional inverse of ``x + ...`` term by term."""
        top = self.top
        g = [Polynomial.const(0), Polynomial.const(1)] + [Polynomial.const(0)] * (top - 1)
        for n in range(2, top + 1):
            # [x^n] f(g(x)) = g_n + sum_{k>=2} f_k [x^n] g^k, and g^k (k >= 2) skips g_n
            rest = Polynomial.const(0)
            gp = g
            for k in range(2, n + 1):
                gp = self._mul(gp, g)
                if k < len(f) and f[k]:
                    rest = rest + f[k].mul(gp[n], self.tr)
            g[n] = -rest
        return g

    def _coeff(self, p: int, q: int) -> Polynomial:
        lam = self._log_powers
        total = Polynomial.const(0)
        for a in range(0, p + 1):
            la = lam[a][p]
            if not la:
                continue
            for b in range(0, q + 1):
                n = a + b
                if n == 0 or n > self.top:
                    continue
                c = self.exp_coeffs[n]
                lb = lam[b][q]
                if not c or not lb:
                    continue
                total = total + c.mul(la, self.tr).mul(lb, self.tr).scale(comb(n, a))
        return total

    # -- public --------------------------------------------------------------
    def a(self, i: int, j: int) -> Polynomial:
        """``a_ij`` in the truncated ring; zero once ``i + j > N + 1``."""
        if i < 0 or j < 0:
            raise ValueError("negative index")
        return self._table.get((i, j), Polynomial.const(0))

    def series(self, coeffs: list) -> TruncSeries:
        return TruncSeries({n: c for n, c in enumerate(coeffs)}, EXACT, self.tr, X)

    def log(self) -> TruncSeries:
        return self.series(self.log_coeffs)

    def exp(self) -> TruncSeries:
        return self.series(self.exp_coeffs)

    def formal_sum(self, x: Polynomial | None = None, y: Polynomial | None = None) -> Polynomial:
        """``F(x, y) = sum a_ij x^i y^j`` (defaults to the variables x, y)."""
        x = Polynomial.var(X) if x is None else x
        y = Polynomial.var(Y) if y is None else y
        f = Polynomial.const(0)
        for (i, j), c in self._table.items():
            if c:
                f = f + c * Polynomial.monomial([(X, i), (Y, j)])
        if x == Polynomial.var(X) and y == Polynomial.var(Y):
            return f
        return substitute_hom({X: x, Y: y}, f, self.tr)

    def two_series(self) -> TruncSeries:
        terms: dict[int, Polynomial] = {}
        for (i, j), c in self._table.items():
            if c:
                terms[i + j] = terms.get(i + j, Polynomial.const(0)) + c
        return TruncSeries(terms, EXACT, self.tr)

    def two_series_via_log(self) -> TruncSeries:
        """``exp(2 log e)`` by direct composition; independent of the a_ij table."""
        tr = self.tr
        log_e = TruncSeries({n: c for n, c in enumerate(self.log_coeffs)}, EXACT, tr)
        inner = log_e.scale_by(2)
        total = TruncSeries({}, EXACT, tr)
        power = TruncSeries({0: Polynomial.const(1)}, EXACT, tr)
        for n in range(1, self.top + 1):
            power = power.mul(inner)
            if self.exp_coeffs[n]:
                total = total + power.scale_by(self.exp_coeffs[n])
        return total


def fgl(tr: Truncation) -> FormalGroupLaw:
    # the law only depends on N
    return _fgl(tr.N)


@lru_cache(maxsize=None)
def _fgl(n: int) -> FormalGroupLaw:
    return FormalGroupLaw(Truncation(n))


def exp_log_series(tr: Truncation) -> tuple[TruncSeries, TruncSeries]:
    law = fgl(tr)
    return law.log(), law.exp()


def fgl_coeff(i: int, j: int, tr: Truncation) -> Polynomial:
    """Coefficient of ``x^i y^j`` in the universal formal group law."""
    if i < 0 or j < 0 or i + j > tr.N + 1:
        raise TruncationRangeError(f"a({i},{j}) needs i + j <= N + 1 = {tr.N + 1}")
    return fgl(tr).a(i, j)


def two_series(tr: Truncation) -> TruncSeries:
    return fgl(tr).two_series()


# --- integrality ------------------------------------------------------------

AMono = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class IntegralityCertificate:
    """``target == sum(coeff * prod(a_ij))`` with integer coefficients."""

    target: Polynomial
    degree: int
    combination: dict = field(default_factory=dict)

    def expand(self, tr: Truncation) -> Polynomial:
        law = fgl(tr)
        total = Polynomial.const(0)
        for amono, c in self.combination.items():
            term = Polynomial.const(c)
            for i, j in amono:
                term = term.mul(law.a(i, j), tr)
            total = total + term
        return total

    def __str__(self):
        if not self.combination:
            return "0"
        out = ""
        for amono, c in sorted(self.combination.items()):
            body = "*".join(f"a({i},{j})" for i, j in amono) or "1"
            if not out:
                out = f"{c}*{body}"
            else:
                out += f" {'-' if c < 0 else '+'} {abs(c)}*{body}"
        return out


@dataclass(frozen=True)
class NotCertified:
    target: Polynomial
    degree: int
    reason: str

    def __bool__(self):
        return False

    def __str__(self):
        return f"not certified: {self.reason}"


def _a_monomials(weight: int, top_pair_weight: int) -> list[AMono]:
    """Multisets of a_ij (1 <= i <= j) with total weight sum(i + j - 1) == weight."""
    pairs = [(i, n + 1 - i) for n in range(1, top_pair_weight + 1)
             for i in range(1, (n + 1) // 2 + 1)]
    pairs.sort(key=lambda p: (p[0] + p[1], p))
    out: list[AMono] = []

    def rec(start: int, left: int, acc: list):
        if left == 0:
            out.append(tuple(acc))
            return
        for idx in range(start, len(pairs)):
            i, j = pairs[idx]
            w = i + j - 1
            if w > left:
                break
            acc.append((i, j))
            rec(idx, left - w, acc)
            acc.pop()

    rec(0, weight, [])
    return out


def _weight_lattice(tr: Truncation, weight: int):
    return _weight_lattice_n(tr.N, weight)


@lru_cache(maxsize=None)
def _weight_lattice_n(n: int, weight: int):
    tr = Truncation(n)
    law = fgl(tr)
    amonos = _a_monomials(weight, min(weight, tr.N))
    expansions = []
    for amono in amonos:
        term = Polynomial.const(1)
        for i, j in amono:
            term = term.mul(law.a(i, j), tr)
        expansions.append(term)
    columns = sorted({mono for p in expansions for mono, _ in p.items()})
    denom = 1
    for p in expansions:
        for _, c in p.items():
            denom = lcm(denom, c.denominator)
    index = {m: k for k, m in enumerate(columns)}
    vectors = []
    for p in expansions:
        v = [0] * len(columns)
        for mono, c in p.items():
            v[index[mono]] = int(c * denom)
        vectors.append(v)
    return amonos, columns, index, denom, IntegerLattice(len(columns), vectors)


def certify_integral(p: Polynomial, degree: int, tr: Truncation):
    """Express ``p`` as an integer combination of a_ij-monomials of its degree.

    Returns an :class:`IntegralityCertificate`, or :class:`NotCertified`.
    Within the truncation (weight <= N) the search is exhaustive, so a
    NotCertified answer there means ``p`` is not in the image of L.
    """
    if any(v.family != Family.M for v in p.variables()):
        raise ValueError("certify_integral expects a polynomial in the m-variables only")
    if not p:
        return IntegralityCertificate(p, degree, {})
    got = homogeneous_degree(p)
    if got != degree:
        raise ValueError(f"{p} has degree {got}, not {degree}")
    weight = -degree // 2
    if weight > tr.N:
        return NotCertified(p, degree, f"weight {weight} exceeds truncation N={tr.N}")
    amonos, columns, index, denom, lattice = _weight_lattice(tr, weight)
    # the lattice is spanned by denom * (a-monomial expansions)
    target = [0] * len(columns)
    for mono, c in p.items():
        k = index.get(mono)
        if k is None:
            return NotCertified(p, degree, f"monomial {format_mono(mono)} is not reached "
                                "by any a-monomial")
        scaled = c * denom
        if scaled.denominator != 1:
            return NotCertified(p, degree, f"coefficient {c} of {format_mono(mono) or 1} has a "
                                "denominator no integer combination produces")
        target[k] = int(scaled)
    sol = lattice.solve(target)
    if sol is None:
        return NotCertified(p, degree, "no integer combination of a-monomials")
    combo = {amonos[k]: c for k, c in enumerate(sol) if c}
    return IntegralityCertificate(p, degree, combo)


def integrality_witness(p: Polynomial, tr: Truncation) -> str | None:
    """None if every L-coefficient of ``p`` is certified integral, else a witness.

    ``p`` may involve other variables (e, t_k, s_ij, b_k); its coefficients in
    the m-variables are split by weight and certified one by one.
    """
    groups = p.split(lambda v: v.family == Family.M)
    for outer, coeff in sorted(groups.items()):
        by_weight: dict[int, dict] = {}
        for mono, c in coeff.items():
            by_weight.setdefault(mono_weight(mono), {})[mono] = c
        for w, terms in sorted(by_weight.items()):
            part = Polynomial(terms)
            cert = certify_integral(part, -2 * w, tr)
            if not cert:
                where = format_mono(outer) or "1"
                return f"coefficient of {where} is {part}: {cert.reason}"
    return None
