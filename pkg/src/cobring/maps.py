"""Ring maps defined on generators and extended multiplicatively.

    epsilon : R -> L            phi   : R  -> Rhat
    theta   : R -> R'           xi    : R' -> Rhat[1/e]
    zeta    : Rhat -> Rhat[1/e] sigma : R' -> R[1/e]  (pairs)
    pi_k    : B_k -> A_k[e]     epsilon' : Rhat -> L  (e -> 0)

Every map is a :class:`GeneratorAssignment`; mutation hooks (``perturbed``)
add a constant to one generator's image so that checks can be shown to fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .exactpoly import (B0, BINV, E, Family, Polynomial, Truncation, Var, b_var,
                        homogeneous_degree, substitute_hom)
from .lazard import TruncationRangeError, fgl
from .report import CheckReport, Status
from .rings import (Inconclusive, RLocElement, bk_s, gen_b, gen_e, gen_s, gen_t, rhat_equal,
                    rhatloc_equal)
from .series import EXACT, TruncSeries

# target ring tags
L_RING = "L"
RHAT = "Rhat"
RPRIME = "R'"
RHATLOC = "Rhat[1/e]"
RLOC = "R[1/e]"
AKE = "A_k[e]"

# polynomial work in A_k[e] must not cap powers of e
_UNCAPPED = 1 << 30


def poly_truncation(tr: Truncation) -> Truncation:
    return Truncation(tr.N, _UNCAPPED)


def _exact(p: Polynomial, tr: Truncation) -> TruncSeries:
    return TruncSeries(p.collect(E), EXACT, tr)


def _e(n: int) -> Polynomial:
    return Polynomial.var(E, n) if n else Polynomial.const(1)


def _delta(a: int, b: int) -> Polynomial:
    return Polynomial.const(1 if a == b else 0)


def _check_index(v: Var, tr: Truncation) -> None:
    if v.i + v.j > tr.max_index:
        raise TruncationRangeError(f"{v.name} is outside the truncation (index sum > {tr.max_index})")


@dataclass
class GeneratorAssignment:
    """A ring map given by its values on generators."""

    name: str
    target: str
    rule: Callable[[Var], object]
    tr: Truncation
    overrides: dict = field(default_factory=dict)
    series: bool = False

    def image(self, v: Var):
        _check_index(v, self.tr)
        img = self.rule(v)
        delta = self.overrides.get(v.key)
        if delta:
            img = img + delta
        return img

    __call__ = image

    def apply(self, word: Polynomial):
        if self.series:
            return substitute_hom(self.image, word, self.tr, one=TruncSeries.const(1, self.tr))
        return substitute_hom(self.image, word, poly_truncation(self.tr))

    def perturbed(self, gen, delta=1) -> "GeneratorAssignment":
        """Copy with ``delta`` added to the image of one generator."""
        if isinstance(gen, Polynomial):
            (gen,) = gen.variables()
        over = dict(self.overrides)
        over[gen.key] = over.get(gen.key, 0) + delta
        return GeneratorAssignment(self.name, self.target, self.rule, self.tr, over, self.series)


# --- generator rules ------------------------------------------------------

def epsilon_rule(tr: Truncation):
    law = fgl(tr)

    def rule(v: Var) -> Polynomial:
        if v is E or v is B0:
            return Polynomial.const(0)
        if v.family == Family.S:
            return law.a(v.i, v.j)
        if v.family in (Family.B, Family.T):
            return _delta(v.i, 1)
        raise TruncationRangeError(f"epsilon is not defined on {v.name}")
    return rule


def phi_rule(tr: Truncation):
    law = fgl(tr)
    top = tr.N + 1

    def s_image(i, j):
        return sum((law.a(i + k, j) * _e(k) for k in range(0, top + 1)), Polynomial.const(0))

    def rule(v: Var) -> TruncSeries:
        if v is E or v is B0:
            p = _e(1)
        elif v.family == Family.B:
            p = s_image(0, v.i)
        elif v.family == Family.S:
            p = s_image(v.i, v.j)
        elif v.family == Family.T:
            p = Polynomial.const(0)
            for i in range(top + 1):
                for j in range(top + 1 - i):
                    p = p + law.a(i + v.i, j) * _e(i + j)
        else:
            raise TruncationRangeError(f"phi is not defined on {v.name}")
        return _exact(p, tr)
    return rule


def theta_rule(tr: Truncation):
    law = fgl(tr)

    def binv(n):
        return Polynomial.var(B0, -n)

    def rule(v: Var) -> Polynomial:
        if v is E or v is B0:
            return Polynomial.var(B0)
        if v.family == Family.B:
            return Polynomial.var(v)
        if v.family == Family.S:
            i, j = v.i, v.j
            p = Polynomial.var(b_var(j)) * binv(i)
            for l in range(1, i + 1):
                p = p - law.a(i - l, j) * binv(l)
            return p
        if v.family == Family.T:
            k = v.i
            p = Polynomial.const(0)
            for l in range(1, k + 1):
                p = p - Polynomial.var(b_var(k - l)) * binv(l)
            return p
        raise TruncationRangeError(f"theta is not defined on {v.name}")
    return rule


def xi_rule(tr: Truncation):
    law = fgl(tr)

    def rule(v: Var) -> TruncSeries:
        if v is BINV:
            return TruncSeries.monomial(-1, tr)
        if v is B0 or v is E:
            return TruncSeries.monomial(1, tr)
        if v.family == Family.B:
            p = sum((law.a(m, v.i) * _e(m) for m in range(tr.N + 2)), Polynomial.const(0))
            return _exact(p, tr)
        raise TruncationRangeError(f"xi is defined on R' generators, not {v.name}")
    return rule


def sigma_rule(tr: Truncation):
    phi = phi_rule(tr)

    def rule(v: Var) -> RLocElement:
        if v is BINV:
            return RLocElement(Polynomial.var(BINV), TruncSeries.monomial(-1, tr), tr)
        if v is B0 or v is E:
            return RLocElement(Polynomial.var(B0), TruncSeries.monomial(1, tr), tr)
        if v.family == Family.B:
            return RLocElement(Polynomial.var(v), phi(v), tr)
        raise TruncationRangeError(f"sigma is defined on R' generators, not {v.name}")
    return rule


def pi_rule(k: int, tr: Truncation):
    if k < 2:
        raise ValueError("pi_k needs k > 1")
    law = fgl(tr)

    def skj(j):
        return bk_s(k, j, k)

    def s_image(i, j):
        if i > k:
            raise TruncationRangeError(f"s({i},{j}) is not a generator of B_{k}")
        p = skj(j) * _e(k - i)
        for l in range(0, k - i):
            p = p + law.a(i + l, j) * _e(l)
        return p

    def t_image(i):
        if i > k:
            raise TruncationRangeError(f"t{i} is not a generator of B_{k}")
        p = gen_t(k) * _e(k - i)
        for l in range(0, k - i):
            for m in range(0, k):
                p = p + law.a(m, i + l) * _e(m + l)
            p = p + skj(i + l) * _e(k + l)
        return p

    def rule(v: Var) -> Polynomial:
        if v is E or v is B0:
            return s_image(0, 0)
        if v.family == Family.B:
            return s_image(0, v.i)
        if v.family == Family.S:
            return s_image(v.i, v.j)
        if v.family == Family.T:
            return t_image(v.i)
        raise TruncationRangeError(f"pi_{k} is not defined on {v.name}")
    return rule


# --- the suite --------------------------------------------------------------

class MapSuite:
    """All maps at one truncation, with optional single-generator mutations."""

    MAPS = ("epsilon", "phi", "theta", "xi", "sigma")

    def __init__(self, tr: Truncation, mutations: tuple = ()):
        self.tr = tr
        self.mutations = tuple(mutations)
        self._maps = {
            "epsilon": GeneratorAssignment("epsilon", L_RING, epsilon_rule(tr), tr),
            "phi": GeneratorAssignment("phi", RHAT, phi_rule(tr), tr, series=True),
            "theta": GeneratorAssignment("theta", RPRIME, theta_rule(tr), tr),
            "xi": GeneratorAssignment("xi", RHATLOC, xi_rule(tr), tr, series=True),
            "sigma": GeneratorAssignment("sigma", RLOC, sigma_rule(tr), tr),
        }
        self._pi: dict[int, GeneratorAssignment] = {}
        for name, var, delta in self.mutations:
            if name.startswith("pi"):
                continue
            self._maps[name] = self._maps[name].perturbed(var, delta)

    def __getattr__(self, name):
        maps = self.__dict__.get("_maps", {})
        if name in maps:
            return maps[name]
        raise AttributeError(name)

    def pi(self, k: int) -> GeneratorAssignment:
        got = self._pi.get(k)
        if got is None:
            got = GeneratorAssignment(f"pi_{k}", AKE, pi_rule(k, self.tr), self.tr)
            for name, var, delta in self.mutations:
                if name == "pi" or name == f"pi_{k}":
                    got = got.perturbed(var, delta)
            self._pi[k] = got
        return got

    def mutated(self, name: str, gen, delta=1) -> "MapSuite":
        if isinstance(gen, Polynomial):
            (gen,) = gen.variables()
        if name not in self.MAPS and not name.startswith("pi"):
            raise KeyError(f"unknown map {name!r}")
        return MapSuite(self.tr, self.mutations + ((name, gen, delta),))

    # maps that are not given on generators
    @staticmethod
    def epsilon_prime(f: TruncSeries) -> Polynomial:
        return f.coeff(0)

    @staticmethod
    def zeta(f: TruncSeries) -> TruncSeries:
        return f

    def sigma_apply(self, p: Polynomial) -> RLocElement:
        return substitute_hom(self.sigma.image, p, poly_truncation(self.tr),
                              one=RLocElement.one(self.tr))


@lru_cache(maxsize=None)
def map_suite(tr: Truncation) -> MapSuite:
    return MapSuite(tr)


# convenience wrappers on a single generator
def epsilon_image(g, tr: Truncation) -> Polynomial:
    return map_suite(tr).epsilon.apply(_word(g))


def phi_image(g, tr: Truncation) -> TruncSeries:
    return map_suite(tr).phi.apply(_word(g))


def theta_image(g, tr: Truncation) -> Polynomial:
    return map_suite(tr).theta.apply(_word(g))


def xi_image(p: Polynomial, tr: Truncation) -> TruncSeries:
    return map_suite(tr).xi.apply(p)


def zeta_image(f: TruncSeries) -> TruncSeries:
    return MapSuite.zeta(f)


def sigma_image(p: Polynomial, tr: Truncation) -> RLocElement:
    return map_suite(tr).sigma_apply(p)


def pi_image(g, k: int, tr: Truncation) -> Polynomial:
    return map_suite(tr).pi(k).apply(_word(g))


def _word(g) -> Polynomial:
    if isinstance(g, Var):
        return Polynomial.var(g)
    if isinstance(g, str):
        from .rings import parse_generator
        return parse_generator(g)
    return g


# --- relations and checks -------------------------------------------------

def relation_families(tr: Truncation, n: int | None = None) -> list[tuple[str, str, Polynomial]]:
    """The five defining relations of R for indices <= n (default N)."""
    n = tr.N if n is None else n
    law = fgl(tr)
    e = gen_e()
    out = [("t0", "t0", gen_t(0)), ("s10", "s(1,0) - 1", gen_s(1, 0) - 1)]
    out += [("s_i0", f"s({i},0)", gen_s(i, 0)) for i in range(2, n + 1)]
    out += [("t-chain", f"t{k} - b{k} - e*t{k + 1}", gen_t(k) - gen_b(k) - e * gen_t(k + 1))
            for k in range(n + 1)]
    out += [("s-chain", f"s({j},{k}) - a({j},{k}) - e*s({j + 1},{k})",
             gen_s(j, k) - law.a(j, k) - e * gen_s(j + 1, k))
            for j in range(n + 1) for k in range(n + 1)]
    return out


def is_zero_in_target(assignment: GeneratorAssignment, value):
    """(status, witness, cofactor) for ``value == 0`` in the map's target ring."""
    tr = assignment.tr
    try:
        if assignment.target == RHAT:
            got = rhat_equal(value, TruncSeries({}, EXACT, tr))
        elif assignment.target == RHATLOC:
            got = rhatloc_equal(value, TruncSeries({}, EXACT, tr))
        elif assignment.target == RLOC:
            got = value.compare(RLocElement(Polynomial.const(0), TruncSeries({}, EXACT, tr), tr))
        else:
            if value:
                return Status.FAIL, f"image is {value}", None
            return Status.PASS, None, None
    except Inconclusive as exc:
        return Status.INCONCLUSIVE, str(exc), None
    if got:
        return Status.PASS, None, got.cofactor
    return Status.FAIL, got.witness, got.cofactor


def check_relation(assignment: GeneratorAssignment, relation: Polynomial,
                   label: str | None = None) -> CheckReport:
    """Apply the map to a relation (LHS - RHS) and test for zero in the target."""
    label = label or str(relation)
    try:
        value = assignment.apply(relation)
    except Inconclusive as exc:
        return CheckReport(f"{assignment.name}: {label}", "", Status.INCONCLUSIVE, assignment.tr.N,
                           witness=str(exc))
    status, witness, cofactor = is_zero_in_target(assignment, value)
    if witness:
        witness = f"{assignment.name}({label}): {witness}"
    rep = CheckReport(f"{assignment.name}: {label}", "", status, assignment.tr.N, witness=witness)
    if cofactor is not None:
        rep.details.append(cofactor)
    return rep


def generators(tr: Truncation, n: int | None = None) -> list[Polynomial]:
    """Canonical generators of R with indices <= n (default N): e, b_k, s_ij (i>0), t_k."""
    n = tr.N if n is None else n
    out = [gen_e()]
    out += [gen_b(k) for k in range(1, n + 1)]
    out += [gen_s(i, j) for i in range(1, n + 1) for j in range(n + 1) if i + j <= n]
    out += [gen_t(k) for k in range(n + 1)]
    return out


def image_degree(value) -> int | None:
    if isinstance(value, TruncSeries):
        value = value.to_poly()
    elif isinstance(value, RLocElement):
        d1 = homogeneous_degree(value.rprime)
        d2 = homogeneous_degree(value.rhatloc.to_poly())
        if d1 is not None and d2 is not None and d1 != d2:
            raise ValueError(f"components of {value} have degrees {d1} and {d2}")
        return d1 if d1 is not None else d2
    return homogeneous_degree(value)


def degree_mismatches(assignment: GeneratorAssignment, gens) -> list[str]:
    bad = []
    for g in gens:
        v = g if isinstance(g, Var) else next(iter(g.variables()))
        img = assignment.image(v)
        try:
            d = image_degree(img)
        except ValueError as exc:
            bad.append(f"{assignment.name}({v.name}) is not homogeneous: {exc}")
            continue
        if d is not None and d != v.degree:
            bad.append(f"{assignment.name}({v.name}) has degree {d}, expected {v.degree}")
    return bad


__all__ = [
    "GeneratorAssignment", "MapSuite", "map_suite", "epsilon_image", "phi_image", "theta_image",
    "xi_image", "zeta_image", "sigma_image", "pi_image", "relation_families", "check_relation",
    "is_zero_in_target", "generators", "degree_mismatches", "poly_truncation",
]
