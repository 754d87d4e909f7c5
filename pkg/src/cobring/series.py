"""Truncated Laurent/power series in ``e`` with polynomial coefficients.

A :class:`TruncSeries` stores coefficients of ``e**n`` for ``n < prec``
(``prec`` is the absolute precision).  Exponents may be negative.  All
arithmetic tracks precision, so statements about a series only concern
the exponents that are actually known.
"""

from __future__ import annotations

from fractions import Fraction

from . import _backend
from .exactpoly import (E, E_KEY, WEIGHTS, Polynomial, Truncation, Var, _coerce,
                        format_poly)


# precision of series known exactly (constants, monomials); anything above
# EXACT // 2 is still exact after shifts
EXACT = 1 << 40


def _is_exact(prec: int) -> bool:
    return prec >= EXACT // 2


class NotDivisible(ArithmeticError):
    """Raised by :func:`series_divide`; ``exponent``/``coefficient`` locate the obstruction."""

    def __init__(self, message, exponent=None, coefficient=None):
        super().__init__(message)
        self.exponent = exponent
        self.coefficient = coefficient


class TruncSeries:
    __slots__ = ("coeffs", "prec", "tr", "var")

    def __init__(self, coeffs: dict[int, Polynomial], prec: int, tr: Truncation, var: Var = E):
        self.coeffs = {n: c for n, c in coeffs.items() if c and n < prec}
        self.prec = prec
        self.tr = tr
        self.var = var

    # --- construction -----------------------------------------------------
    @classmethod
    def from_poly(cls, p: Polynomial, tr: Truncation, prec: int | None = None,
                  var: Var = E) -> "TruncSeries":
        if prec is None:
            prec = tr.order + 1
        p = p.truncate(tr)
        return cls(p.collect(var), prec, tr, var)

    @classmethod
    def const(cls, c, tr: Truncation, prec: int | None = None) -> "TruncSeries":
        if not isinstance(c, Polynomial):
            c = Polynomial.const(c)
        return cls({0: c}, EXACT if prec is None else prec, tr)

    @classmethod
    def monomial(cls, n: int, tr: Truncation, coeff=1, prec: int | None = None) -> "TruncSeries":
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.const(coeff)
        return cls({n: coeff}, EXACT if prec is None else prec, tr)

    def to_poly(self) -> Polynomial:
        out = Polynomial.const(0)
        for n, c in self.coeffs.items():
            out = out + c * Polynomial.var(self.var, n) if n else out + c
        return out

    # --- inspection -------------------------------------------------------
    def coeff(self, n: int) -> Polynomial:
        if n >= self.prec:
            raise ValueError(f"coefficient of e^{n} is beyond precision {self.prec}")
        return self.coeffs.get(n, Polynomial.const(0))

    def valuation(self) -> int:
        """Lowest exponent with nonzero known coefficient (``prec`` if none)."""
        return min(self.coeffs) if self.coeffs else self.prec

    def is_zero(self) -> bool:
        return not self.coeffs

    def exponents(self) -> list[int]:
        return sorted(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = TruncSeries.const(other, self.tr)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0" if _is_exact(self.prec) else f"O(e^{self.prec})"
        parts = []
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if n:
                c = c * Polynomial.var(self.var, n)
            s = format_poly(c)
            if parts and s.startswith("-"):
                parts.append("- " + s[1:])
            elif parts:
                parts.append("+ " + s)
            else:
                parts.append(s)
        body = " ".join(parts)
        return body if _is_exact(self.prec) else body + f" + O(e^{self.prec})"

    __repr__ = __str__

    # --- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return TruncSeries.const(other, self.tr)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out[n] + c if n in out else c
        return TruncSeries(out, prec, self.tr, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries({n: -c for n, c in self.coeffs.items()}, self.prec, self.tr, self.var)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale_by(self, c) -> "TruncSeries":
        """Multiply every coefficient by an e-free polynomial or number."""
        if isinstance(c, (int, Fraction)):
            c = _coerce(c)
            return TruncSeries({n: v.scale(c) for n, v in self.coeffs.items()}, self.prec,
                               self.tr, self.var)
        return TruncSeries({n: v.mul(c, self.tr) for n, v in self.coeffs.items()}, self.prec,
                           self.tr, self.var)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``e**k``."""
        return TruncSeries({n + k: c for n, c in self.coeffs.items()}, self.prec + k,
                           self.tr, self.var)

    def mul(self, other, tr: Truncation | None = None) -> "TruncSeries":
        if isinstance(other, Polynomial) and self.var.key not in {
                other_key for mono in other._terms for other_key in mono[::2]}:
            return self.scale_by(other)
        other = self._lift(other)
        tr = tr or self.tr
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        a = self._as_terms()
        b = other._as_terms()
        prod = _backend.poly_mul(a, b, WEIGHTS, tr.N, self.var.key, prec - 1)
        return TruncSeries(Polynomial._raw(prod).collect(self.var), prec, tr, self.var)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale_by(other)
        if isinstance(other, (Polynomial, TruncSeries)):
            return self.mul(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.mul(other)
        return NotImplemented

    def pow(self, n: int) -> "TruncSeries":
        out = TruncSeries({0: Polynomial.const(1)}, EXACT, self.tr, self.var)
        for _ in range(n):
            out = out.mul(self)
        return out

    def _as_terms(self) -> dict:
        key = self.var.key
        out = {}
        for n, c in self.coeffs.items():
            if n == 0:
                out.update(c._terms)
                continue
            for mono, v in c._terms.items():
                # insert (key, n) keeping the monomial sorted
                pos = 0
                while pos < len(mono) and mono[pos] < key:
                    pos += 2
                out[mono[:pos] + (key, n) + mono[pos:]] = v
        return out

    def truncated(self, prec: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, min(prec, self.prec), self.tr, self.var)


def series_divide(f: TruncSeries, g: TruncSeries, order: int | None = None, *,
                  laurent: bool = False) -> TruncSeries:
    """Quotient ``q`` with ``f = q*g`` through the known precision.

    ``g`` must be ``e**v * u`` where ``u`` has a nonzero rational constant
    term.  In power-series mode a nonzero coefficient of ``f`` below ``e**v``
    raises :class:`NotDivisible`; with ``laurent=True`` the quotient may have
    negative exponents.  ``order`` (absolute) bounds the exponents computed;
    it defaults to the truncation's e-order plus one.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by a series with no known nonzero coefficient")
    v = g.valuation()
    lead = g.coeffs[v]
    if not lead.is_constant():
        raise ValueError(f"leading coefficient {lead} of divisor is not a rational constant")
    u0 = lead.constant_term()
    fval = f.valuation()
    if not laurent:
        low = [n for n in f.coeffs if n < v]
        if low:
            n = min(low)
            raise NotDivisible(f"coefficient of e^{n} is {f.coeffs[n]}, below divisor order e^{v}",
                               exponent=n, coefficient=f.coeffs[n])
    start = fval - v
    if not laurent:
        start = max(start, 0)
    qprec = min(f.prec - v, g.prec - v + start)
    tr = f.tr
    qprec = min(qprec, tr.order + 1 if order is None else order)
    q: dict[int, Polynomial] = {}
    inv = Fraction(1) / u0
    for n in range(start, qprec):
        acc = f.coeffs.get(n + v, Polynomial.const(0))
        for i, qi in q.items():
            gi = g.coeffs.get(n + v - i)
            if gi is not None:
                acc = acc - qi.mul(gi, tr)
        if acc:
            q[n] = acc.scale(inv)
    return TruncSeries(q, qprec, tr, f.var)
