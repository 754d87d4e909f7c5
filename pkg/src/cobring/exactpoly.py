"""Exact sparse multivariate polynomials over Q in graded variables.

Variables are interned :class:`Var` objects with an integer ``key`` whose
ordering is lexicographic on ``(family, i, j)``.  A monomial is a flat
tuple ``(key, exp, key, exp, ...)`` sorted by key, and a
:class:`Polynomial` is an immutable map monomial -> nonzero ``Fraction``.

Only ``b0`` and ``e`` may carry negative exponents (Laurent variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from . import _backend
from ._backend import NO_CAP

Number = Union[int, Fraction]


class Family(IntEnum):
    M = 0
    B = 1
    S = 2
    T = 3
    E = 4
    BINV = 5
    X = 6


_ISHIFT = 12
_FSHIFT = 24


class Var:
    """A graded variable.  Use the constructors below, never ``Var(...)``."""

    __slots__ = ("family", "i", "j", "name", "degree", "weight", "key")

    def __init__(self, family, i, j, name, degree, weight, key):
        self.family = family
        self.i = i
        self.j = j
        self.name = name
        self.degree = degree
        self.weight = weight
        self.key = key

    def __repr__(self):
        return self.name

    def __lt__(self, other):
        return self.key < other.key

    @property
    def laurent(self) -> bool:
        return self.key in _LAURENT


_REGISTRY: dict[int, Var] = {}
_BY_NAME: dict[str, Var] = {}
# var key -> weight, shared with the kernels (only m_i have nonzero weight)
WEIGHTS: dict[int, int] = {}


def _intern(family: Family, i: int, j: int, name: str, degree: int, weight: int = 0) -> Var:
    if family == Family.X:
        existing = _BY_NAME.get(name)
        if existing is not None:
            if existing.degree != degree:
                raise ValueError(f"variable {name} already declared with degree {existing.degree}")
            return existing
        key = (int(family) << _FSHIFT) | len([v for v in _REGISTRY.values() if v.family == Family.X])
    else:
        if i < 0 or j < 0 or i >= (1 << _ISHIFT) or j >= (1 << _ISHIFT):
            raise ValueError(f"index out of range for {family.name}({i},{j})")
        key = (int(family) << _FSHIFT) | (i << _ISHIFT) | j
        existing = _REGISTRY.get(key)
        if existing is not None:
            return existing
    v = Var(family, i, j, name, degree, weight, key)
    _REGISTRY[key] = v
    _BY_NAME[name] = v
    if weight:
        WEIGHTS[key] = weight
    return v


def m_var(i: int) -> Var:
    if i < 1:
        raise ValueError("log coefficients are m_1, m_2, ...")
    return _intern(Family.M, i, 0, f"m{i}", -2 * i, weight=i)


def b_var(k: int) -> Var:
    return _intern(Family.B, k, 0, f"b{k}", 2 * (1 - k))


def s_var(i: int, j: int) -> Var:
    return _intern(Family.S, i, j, f"s({i},{j})", 2 * (1 - i - j))


def t_var(k: int) -> Var:
    return _intern(Family.T, k, 0, f"t{k}", 2 * (1 - k))


def x_var(name: str, degree: int | None = None) -> Var:
    """Auxiliary variable; without ``degree`` an existing one of any degree is reused."""
    if degree is None:
        existing = _BY_NAME.get(name)
        if existing is not None and existing.family == Family.X:
            return existing
        degree = 0
    return _intern(Family.X, 0, 0, name, degree)


E = _intern(Family.E, 0, 0, "e", 2)
BINV = _intern(Family.BINV, 0, 0, "b0^-1", -2)
B0 = b_var(0)
_LAURENT = frozenset({E.key, B0.key})
E_KEY = E.key


def var_of(key: int) -> Var:
    return _REGISTRY[key]


def inverse_var(v: Var) -> Var:
    """The variable whose assignment supplies the image of ``v**-1``."""
    if v is B0:
        return BINV
    raise KeyError(f"no inverse variable registered for {v.name}")


@dataclass(frozen=True)
class Truncation:
    """Desk-scale truncation.

    ``N`` caps the weight of L-coefficients (``weight(m_i) = i``), which also
    removes every ``m_i`` with ``i > N``; ``order`` caps nonnegative powers
    of ``e`` (default ``2N``).  Both are quotients by ideals, so truncating
    commutes with ring operations.
    """

    N: int
    order: int | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation bound N must be positive")
        if self.order is None:
            object.__setattr__(self, "order", 2 * self.N)

    @property
    def max_index(self) -> int:
        # largest generator index sum that maps accept
        return 2 * self.N + 2

    def with_order(self, order: int) -> "Truncation":
        return Truncation(self.N, order)


class NonHomogeneous(ValueError):
    def __init__(self, first, second):
        super().__init__(f"non-homogeneous: {first} (degree {first.degree()}) vs {second} "
                         f"(degree {second.degree()})")
        self.monomials = (first, second)


class UnassignedVariable(KeyError):
    def __init__(self, var):
        super().__init__(f"no assignment for variable {var.name}")
        self.var = var


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


def _check_mono(mono: tuple) -> None:
    for idx in range(0, len(mono), 2):
        if mono[idx + 1] < 0 and mono[idx] not in _LAURENT:
            raise ValueError(f"negative exponent on non-Laurent variable {var_of(mono[idx]).name}")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Number] | None = None):
        t = {}
        if terms:
            for mono, c in terms.items():
                c = _coerce(c)
                if c:
                    t[mono] = c
        self._terms = t
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Number) -> "Polynomial":
        c = _coerce(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "Polynomial":
        if v is BINV:
            v, exp = B0, -exp
        if exp == 0:
            return cls.const(1)
        mono = (v.key, exp)
        _check_mono(mono)
        return cls._raw({mono: Fraction(1)})

    @classmethod
    def monomial(cls, powers: Iterable[tuple[Var, int]], coeff: Number = 1) -> "Polynomial":
        p = cls.const(coeff)
        for v, k in powers:
            p = p * cls.var(v, k)
        return p

    # --- inspection -----------------------------------------------------
    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def coefficient(self, mono: tuple) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def variables(self) -> set[Var]:
        out = set()
        for mono in self._terms:
            for idx in range(0, len(mono), 2):
                out.add(var_of(mono[idx]))
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # --- arithmetic -----------------------------------------------------
    @staticmethod
    def _lift(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(self._terms) < len(other._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        res = dict(a)
        for m, c in b.items():
            v = res.get(m)
            if v is None:
                res[m] = c
            else:
                v = v + c
                if v:
                    res[m] = v
                else:
                    del res[m]
        return Polynomial._raw(res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

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

    def scale(self, c: Number) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({m: c * v for m, v in self._terms.items()})

    def mul(self, other: "Polynomial", tr: Truncation | None = None) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other).truncate(tr) if tr else self.scale(other)
        if tr is None:
            wcap = ecap = NO_CAP
        else:
            wcap, ecap = tr.N, tr.order
        return Polynomial._raw(_backend.poly_mul(self._terms, other._terms, WEIGHTS, wcap, E_KEY, ecap))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def pow(self, n: int, tr: Truncation | None = None) -> "Polynomial":
        if n < 0:
            if len(self._terms) == 1:
                (mono, c), = self._terms.items()
                inv = tuple(x if k % 2 == 0 else -x for k, x in enumerate(mono))
                _check_mono(inv)
                return Polynomial._raw({inv: 1 / c}).pow(-n, tr)
            raise ValueError("only monomials can be raised to negative powers")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, tr)
            n >>= 1
            if n:
                base = base.mul(base, tr)
        return result

    def __pow__(self, n: int):
        return self.pow(n)

    def truncate(self, tr: Truncation | None) -> "Polynomial":
        if tr is None:
            return self
        keep = {}
        for m, c in self._terms.items():
            w, ee = _profile(m)
            if w <= tr.N and ee <= tr.order:
                keep[m] = c
        if len(keep) == len(self._terms):
            return self
        return Polynomial._raw(keep)

    # --- structure ------------------------------------------------------
    def collect(self, v: Var) -> dict[int, "Polynomial"]:
        """Split by the exponent of ``v``: ``{k: coefficient of v**k}``."""
        out: dict[int, dict] = {}
        key = v.key
        for mono, c in self._terms.items():
            k = 0
            rest = mono
            for idx in range(0, len(mono), 2):
                if mono[idx] == key:
                    k = mono[idx + 1]
                    rest = mono[:idx] + mono[idx + 2:]
                    break
            out.setdefault(k, {})[rest] = c
        return {k: Polynomial._raw(t) for k, t in out.items()}

    def split(self, keep: Callable[[Var], bool]) -> dict[tuple, "Polynomial"]:
        """Group by the sub-monomial of variables *not* satisfying ``keep``.

        Returns ``{outer monomial: polynomial in the kept variables}``.
        """
        out: dict[tuple, dict] = {}
        for mono, c in self._terms.items():
            inner = []
            outer = []
            for idx in range(0, len(mono), 2):
                target = inner if keep(var_of(mono[idx])) else outer
                target.append(mono[idx])
                target.append(mono[idx + 1])
            out.setdefault(tuple(outer), {})[tuple(inner)] = c
        return {k: Polynomial._raw(t) for k, t in out.items()}

    def degree(self):
        return homogeneous_degree(self)

    def max_exponent(self, v: Var) -> int | None:
        exps = list(self.collect(v))
        return max(exps) if exps and self else None

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def _profile(mono: tuple) -> tuple[int, int]:
    w = 0
    ee = 0
    for idx in range(0, len(mono), 2):
        k = mono[idx]
        if k == E_KEY:
            ee = mono[idx + 1]
        else:
            w += WEIGHTS.get(k, 0) * mono[idx + 1]
    return w, ee


def mono_degree(mono: tuple) -> int:
    return sum(var_of(mono[idx]).degree * mono[idx + 1] for idx in range(0, len(mono), 2))


def mono_weight(mono: tuple) -> int:
    return _profile(mono)[0]


def format_mono(mono: tuple) -> str:
    parts = []
    for idx in range(0, len(mono), 2):
        v = var_of(mono[idx])
        k = mono[idx + 1]
        parts.append(v.name if k == 1 else f"{v.name}^{k}")
    return "*".join(parts)


def _mono_sort_key(mono: tuple):
    return (len(mono) > 0, mono)


def format_poly(p: Polynomial) -> str:
    if not p:
        return "0"
    out = []
    for mono in sorted(p._terms, key=_mono_sort_key):
        c = p._terms[mono]
        body = format_mono(mono)
        neg = c < 0
        a = -c if neg else c
        if not body:
            s = str(a)
        elif a == 1:
            s = body
        else:
            s = f"{a}*{body}"
        if not out:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f"- {s}" if neg else f"+ {s}")
    return " ".join(out)


# --- named operations ---------------------------------------------------

def poly_arith(op: str, f: Polynomial, g, tr: Truncation | None = None) -> Polynomial:
    """Exact ring arithmetic followed by truncation (``op`` in add/sub/mul/scale)."""
    if op == "add":
        return (f + g).truncate(tr)
    if op == "sub":
        return (f - g).truncate(tr)
    if op == "mul":
        return f.truncate(tr).mul(Polynomial._lift(g).truncate(tr), tr)
    if op == "scale":
        return f.scale(g).truncate(tr)
    raise ValueError(f"unknown operation {op!r}")


def homogeneous_degree(f: Polynomial) -> int | None:
    """Common total degree of all monomials; ``None`` for the zero polynomial.

    Raises :class:`NonHomogeneous` carrying two monomials of different degree.
    """
    first = None
    d0 = None
    for mono in f._terms:
        d = mono_degree(mono)
        if d0 is None:
            d0, first = d, mono
        elif d != d0:
            raise NonHomogeneous(Polynomial._raw({first: f._terms[first]}),
                                 Polynomial._raw({mono: f._terms[mono]}))
    return d0


def has_degree(f: Polynomial, d: int) -> bool:
    """True if ``f`` is homogeneous of degree ``d`` (zero matches any degree)."""
    try:
        got = homogeneous_degree(f)
    except NonHomogeneous:
        return False
    return got is None or got == d


def substitute_hom(assignment, f: Polynomial, tr: Truncation | None = None, *,
                   fixed: Iterable[Family] = (Family.M,), one=None):
    """Apply the ring map defined on generators by ``assignment``.

    ``assignment`` is a mapping or callable ``Var -> value``; values may be
    :class:`Polynomial` or any type with ``mul(other, tr)``, ``+`` and
    ``scale_by(poly)`` (see :class:`cobring.series.TruncSeries`).  Variables
    whose family is in ``fixed`` are coefficients and map to themselves.  A
    negative power of ``b0`` uses the image assigned to ``BINV``.
    """
    fixed = frozenset(fixed)
    if callable(assignment) and not isinstance(assignment, Mapping):
        lookup = assignment
    else:
        def lookup(v):
            try:
                return assignment[v]
            except KeyError:
                raise UnassignedVariable(v) from None

    powers: dict[tuple[int, int], object] = {}

    def power(v: Var, k: int):
        got = powers.get((v.key, k))
        if got is not None:
            return got
        base = lookup(inverse_var(v)) if k < 0 else lookup(v)
        if base is None:
            raise UnassignedVariable(v)
        if isinstance(base, (int, Fraction)):
            base = Polynomial.const(base)
        if abs(k) == 1:
            val = base
        else:
            val = power(v, k - 1 if k > 0 else k + 1).mul(base, tr)
        powers[(v.key, k)] = val
        return val

    total = None
    for mono, c in f._terms.items():
        coeff_mono = []
        img = None
        for idx in range(0, len(mono), 2):
            v = var_of(mono[idx])
            k = mono[idx + 1]
            if v.family in fixed:
                coeff_mono.append(v.key)
                coeff_mono.append(k)
                continue
            p = power(v, k)
            img = p if img is None else img.mul(p, tr)
        coeff = Polynomial._raw({tuple(coeff_mono): c})
        if img is None:
            term = coeff.truncate(tr)
            if one is not None:
                term = one.scale_by(term)
        elif isinstance(img, Polynomial):
            term = img.mul(coeff, tr)
        else:
            term = img.scale_by(coeff)
        total = term if total is None else total + term
    if total is None:
        return one.scale_by(Polynomial.const(0)) if one is not None else Polynomial.const(0)
    return total

