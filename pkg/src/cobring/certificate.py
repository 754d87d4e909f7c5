"""Registry of named checks and the runner that produces reports.

Every check is a pure function of the configuration and the map suite.  A
mutation (map name, generator, delta) swaps in a perturbed suite, which is
how the negative controls show that a check can fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import (BINV, E, Family, Polynomial, Truncation, b_var, homogeneous_degree,
                        m_var, substitute_hom, x_var)
from .fracture import (
    desk_suite, kernel_probe, rhat_torsion_instance, round_trip, torsion_exponent,
)
from .lazard import X, Y, Z, certify_integral, fgl, integrality_witness, two_series
from .maps import (MapSuite, degree_mismatches, generators, is_zero_in_target, poly_truncation,
                   relation_families)
from .report import CheckReport, Status
from .rings import (Inconclusive, PullbackError, RLocElement, build_relement, divide_in_poly_ring,
                    gen_b, gen_e, gen_s, gen_t, rbar_model, rhat_equal, rhatloc_equal)
from .series import EXACT, TruncSeries, series_divide


class UnknownCheck(KeyError):
    pass


@dataclass(frozen=True)
class CertificateConfig:
    N: int = 5
    k_max: int = 5
    checks: tuple = ()
    deg_cap: int = 4
    coeff_cap: int = 4

    def __post_init__(self):
        if self.N < 3:
            raise ValueError(f"truncation N must be at least 3, got {self.N}")
        if not 2 <= self.k_max:
            raise ValueError(f"k_max must be at least 2, got {self.k_max}")
        unknown = [c for c in self.checks if c not in REGISTRY]
        if unknown:
            raise UnknownCheck(", ".join(unknown))

    @property
    def k_range(self) -> range:
        return range(2, min(self.k_max, self.N) + 1)

    def selected(self) -> list[str]:
        return [c for c in REGISTRY if not self.checks or c in self.checks]


class _Outcome:
    """Collects sub-results of one check; the first failure is the witness."""

    def __init__(self):
        self.failures: list[str] = []
        self.pending: list[str] = []
        self.notes: list[str] = []

    def require(self, ok, witness) -> bool:
        if not ok:
            self.failures.append(witness() if callable(witness) else witness)
        return bool(ok)

    def compare(self, comp, label: str) -> bool:
        return self.require(comp, lambda: f"{label}: {comp.witness}")

    def note(self, text: str) -> None:
        self.notes.append(text)

    def status(self) -> tuple[Status, str | None]:
        if self.failures:
            return Status.FAIL, self.failures[0]
        if self.pending:
            return Status.INCONCLUSIVE, self.pending[0]
        return Status.PASS, "; ".join(self.notes) or None


@dataclass
class Context:
    config: CertificateConfig
    suite: MapSuite
    tr: Truncation = field(init=False)

    def __post_init__(self):
        self.tr = self.suite.tr

    def zero(self) -> TruncSeries:
        return TruncSeries({}, EXACT, self.tr)


# --- checks -----------------------------------------------------------------

def check_lazard_axioms(ctx: Context, out: _Outcome) -> None:
    tr = ctx.tr
    law = fgl(tr)
    top = tr.N + 1
    for i in range(top + 1):
        for j in range(top + 1 - i):
            out.require(law.a(i, j) == law.a(j, i), f"a({i},{j}) != a({j},{i})")
        out.require(law.a(0, i) == Polynomial.const(1 if i == 1 else 0),
                    f"a(0,{i}) = {law.a(0, i)}")
    x, y, z = (Polynomial.var(v) for v in (X, Y, Z))
    left = law.formal_sum(law.formal_sum(x, y), z)
    right = law.formal_sum(x, law.formal_sum(y, z))
    out.require(left == right, lambda: f"F(F(x,y),z) - F(x,F(y,z)) = {left - right}")
    # multiplicative law x + y + m x y
    m = Polynomial.var(x_var("m", -2))

    def mult(v):
        if v.family == Family.M:
            return m.pow(v.i).scale(Fraction((-1) ** v.i, v.i + 1))
        return Polynomial.var(v)

    for i in range(top + 1):
        for j in range(top + 1 - i):
            got = substitute_hom(mult, law.a(i, j), fixed=())
            want = m if (i, j) == (1, 1) else Polynomial.const(1 if i + j == 1 else 0)
            out.require(got == want, f"multiplicative specialisation of a({i},{j}) is {got}")
    additive = substitute_hom(lambda v: Polynomial.const(0) if v.family == Family.M else
                              Polynomial.var(v), two_series(tr).to_poly(), fixed=())
    out.require(additive == 2 * Polynomial.var(E), f"additive [2](e) = {additive}")
    a, b = law.two_series(), law.two_series_via_log()
    out.require(a == b, lambda: f"[2](e) paths differ by {a - b}")
    out.note(f"a(i,j) checked for i+j <= {top}")


def check_derived_identities(ctx: Context, out: _Outcome) -> None:
    tr, suite = ctx.tr, ctx.suite
    e, t1 = gen_e(), gen_t(1)
    words = [
        ("(1+t1)e", (1 + t1) * e),
        ("t1 - 1 - e(s(1,1)+t2)", t1 - 1 - e * (gen_s(1, 1) + gen_t(2))),
        ("t1^2 - 1", t1 * t1 - 1),
    ]
    for label, w in words:
        x = build_relement(w, tr, suite)
        comp = x.is_zero()
        out.compare(comp, label)
        if label == "(1+t1)e" and comp:
            one = comp.cofactor == 1
            out.require(one, f"cofactor of (1+t1)e is {comp.cofactor}, expected 1")
            exact = x.rhat == two_series(tr)
            out.require(exact, "phi((1+t1)e) differs from [2](e)")
            out.note("phi((1+t1)e) = 1*[2](e)")


def _relations_killed(ctx: Context, out: _Outcome, name: str) -> None:
    assignment = getattr(ctx.suite, name)
    count = 0
    for fam, label, w in relation_families(ctx.tr):
        value = assignment.apply(w)
        status, witness, _ = is_zero_in_target(assignment, value)
        if status is Status.INCONCLUSIVE:
            out.pending.append(f"{name}({label}): {witness}")
        else:
            out.require(status is Status.PASS, f"{name}({label}): {witness}")
        count += 1
    out.note(f"{count} relations")


def check_epsilon_welldef(ctx: Context, out: _Outcome) -> None:
    _relations_killed(ctx, out, "epsilon")
    eps = ctx.suite.epsilon
    law = fgl(ctx.tr)
    out.require(not eps.apply(gen_e()), "epsilon(e) != 0")
    for i in range(ctx.tr.N + 2):
        for j in range(ctx.tr.N + 2 - i):
            got = eps.apply(gen_s(i, j))
            out.require(got == law.a(i, j), f"epsilon(s({i},{j})) = {got}, not a({i},{j})")


def check_phi_relations(ctx: Context, out: _Outcome) -> None:
    _relations_killed(ctx, out, "phi")


def check_theta_relations(ctx: Context, out: _Outcome) -> None:
    _relations_killed(ctx, out, "theta")


def check_eps_prime_phi(ctx: Context, out: _Outcome) -> None:
    suite = ctx.suite
    gens = generators(ctx.tr)
    for g in gens:
        lhs = suite.epsilon_prime(suite.phi.apply(g))
        rhs = suite.epsilon.apply(g)
        out.require(lhs == rhs, lambda: f"epsilon'(phi({g})) = {lhs} but epsilon({g}) = {rhs}")
    out.note(f"{len(gens)} generators")


def check_telescope(ctx: Context, out: _Outcome) -> None:
    tr, suite = ctx.tr, ctx.suite
    law = fgl(tr)
    N = tr.N
    e = gen_e()
    words = []
    for m in range(N + 1):
        em = e ** m if m else Polynomial.const(1)
        for i in range(N + 1):
            for j in range(N + 1 - i):
                w = gen_s(i, j) - gen_s(i + m, j) * em
                for l in range(m):
                    w = w - law.a(i + l, j) * (e ** l if l else Polynomial.const(1))
                words.append((f"s({i},{j}), m={m}", w))
        for k in range(N + 1):
            w = gen_t(k) - gen_t(k + m) * em
            for l in range(m):
                w = w - gen_b(k + l) * (e ** l if l else Polynomial.const(1))
            words.append((f"t{k}, m={m}", w))
    for label, w in words:
        th = suite.theta.apply(w)
        out.require(not th, lambda: f"theta telescope {label}: {th}")
        out.compare(rhat_equal(suite.phi.apply(w), ctx.zero()), f"phi telescope {label}")
    out.note(f"{len(words)} identities")


def check_quotient_composite(ctx: Context, out: _Outcome) -> None:
    tr, phi = ctx.tr, ctx.suite.phi
    law = fgl(tr)
    for n in range(0, tr.order + 1):
        w = gen_e() ** n if n else Polynomial.const(1)
        got = phi.apply(w)
        out.require(got == TruncSeries.monomial(n, tr), f"phi(e^{n}) = {got}")
    for i in range(1, tr.N + 1):
        c = law.a(i, 1)
        got = phi.apply(c)
        out.require(got == TruncSeries.const(c, tr), f"phi fixes L: phi({c}) = {got}")
    mi = Polynomial.var(m_var(1))
    out.require(phi.apply(mi) == TruncSeries.const(mi, tr), "phi moves m1")


def check_theta_sigma(ctx: Context, out: _Outcome) -> None:
    tr, suite = ctx.tr, ctx.suite
    N = tr.N
    for i in range(N + 1):
        b = Polynomial.var(b_var(i))
        img = suite.sigma_apply(b)
        out.require(img.rprime == b, f"theta(sigma(b{i})) = {img.rprime}")
    inv = suite.sigma_apply(Polynomial.var(BINV))
    out.require(inv.rprime == Polynomial.var(BINV), f"theta(sigma(b0^-1)) = {inv.rprime}")
    e_loc = RLocElement.from_relement(build_relement(gen_e(), tr, suite))
    prod = inv.mul(e_loc)
    out.compare(prod.compare(RLocElement.one(tr)), "sigma(b0^-1) * e")
    law = fgl(tr)
    for j in range(N):
        for k in range(N - j):
            s_next = build_relement(gen_s(j + 1, k), tr, suite)
            via_sigma = suite.sigma_apply(suite.theta.apply(gen_s(j + 1, k)))
            out.compare(via_sigma.compare(RLocElement.from_relement(s_next)),
                        f"sigma(theta(s({j + 1},{k})))")
            s_jk = build_relement(gen_s(j, k), tr, suite)
            lhs = RLocElement.from_relement(s_next).mul(e_loc)
            rhs = RLocElement.from_relement(s_jk) - RLocElement(
                law.a(j, k), TruncSeries.const(law.a(j, k), tr), tr)
            out.compare(lhs.compare(rhs), f"e*s({j + 1},{k}) = s({j},{k}) - a({j},{k})")


def square_cofactors(ctx: Context, out: _Outcome | None = None) -> dict:
    """Cofactors of xi(theta(g)) - zeta(phi(g)) over [2](e), keyed by generator name."""
    tr, suite = ctx.tr, ctx.suite
    two = two_series(tr)
    found = {}
    N = tr.N
    for i in range(N + 1):
        for j in range(N + 1 - i):
            g = gen_s(i, j)
            diff = suite.xi.apply(suite.theta.apply(g)) - suite.zeta(suite.phi.apply(g))
            if out is not None:
                out.require(diff.is_zero(), lambda: f"xi(theta(s({i},{j}))) - phi(s({i},{j})) = {diff}")
            found[f"s({i},{j})"] = (diff, None)
    for k in range(N + 1):
        g = gen_t(k)
        f = suite.xi.apply(suite.theta.apply(g))
        h = suite.zeta(suite.phi.apply(g))
        comp = rhatloc_equal(f, h)
        found[f"t{k}"] = (f - h, comp)
        if out is None:
            continue
        if out.compare(comp, f"xi(theta(t{k})) vs phi(t{k})"):
            expected = -two.shift(-k)
            out.require(comp.power == k and comp.cofactor == -1 and (f - h) == expected,
                        lambda: f"t{k}: discrepancy {f - h}, cofactor {comp.cofactor}, "
                                f"power {comp.power}")
    return found


def check_square_commutes(ctx: Context, out: _Outcome) -> None:
    square_cofactors(ctx, out)
    out.note(f"t_k discrepancy is -e^-k [2](e) for k <= {ctx.tr.N}")


def check_gk_constant(ctx: Context, out: _Outcome) -> None:
    for k in ctx.config.k_range:
        g = rbar_model(k, ctx.tr).g
        c0 = g.collect(E).get(0, Polynomial.const(0))
        out.require(c0 == Polynomial.const(2), f"g_{k}(0) = {c0}")
    out.note(f"k = {ctx.config.k_range.start}..{ctx.config.k_range.stop - 1}")


def check_pi_consistency(ctx: Context, out: _Outcome) -> None:
    tr = ctx.tr
    e = gen_e()
    for k in ctx.config.k_range:
        model = rbar_model(k, tr)
        pi = ctx.suite.pi(k)
        checks = [(f"pi_{k}(t{k})", pi.apply(gen_t(k)), gen_t(k)),
                  (f"pi_{k}(s(0,0))", pi.apply(gen_s(0, 0)), e),
                  (f"pi_{k}(1+t1)", pi.apply(1 + gen_t(1)), model.g),
                  (f"pi_{k}(t0)", pi.apply(gen_t(0)), e.mul(model.g, poly_truncation(tr)))]
        checks += [(f"pi_{k}(s({k},{j}))", pi.apply(gen_s(k, j)), gen_s(k, j))
                   for j in range(1, tr.N + 1)]
        for label, got, want in checks:
            out.require(got == want, lambda: f"{label} = {got}, expected {want}")


def pi_ideal_cofactors(ctx: Context, k: int, out: _Outcome | None = None) -> list:
    tr = ctx.tr
    model = rbar_model(k, tr)
    pi = ctx.suite.pi(k)
    found = []
    for fam, label, p in model.ideal_generators():
        comp = divide_in_poly_ring(pi.apply(p), model.g, tr)
        found.append((label, comp))
        if out is not None:
            out.compare(comp, f"pi_{k}({label}) in (g_{k})")
    return found


def check_pi_kills_ik(ctx: Context, out: _Outcome) -> None:
    for k in ctx.config.k_range:
        found = pi_ideal_cofactors(ctx, k, out)
        if k == ctx.config.k_range.start:
            shown = [f"{lab}: {c.cofactor}" for lab, c in found if c and c.cofactor]
            out.note(f"k={k} nonzero cofactors " + ", ".join(shown))


def check_e_regular_rbar(ctx: Context, out: _Outcome) -> None:
    tr = ctx.tr
    ptr = poly_truncation(tr)
    e = gen_e()
    tested = 0
    for k in ctx.config.k_range:
        g = rbar_model(k, tr).g
        pool = [Polynomial.const(0), Polynomial.const(1), Polynomial.const(-1), gen_t(k),
                gen_s(k, 1)]
        for c0 in pool:
            for c1 in pool:
                for c2 in pool:
                    q = c0 + c1 * e + c2 * e * e
                    P = q.mul(g, ptr)
                    if P.collect(E).get(0):
                        continue
                    # e * w = P lies in (g); regularity says w does too
                    w = P.collect(E)
                    w = sum((c * (e ** (n - 1) if n > 1 else Polynomial.const(1))
                             for n, c in w.items()), Polynomial.const(0))
                    comp = divide_in_poly_ring(w, g, tr)
                    out.compare(comp, f"k={k}: ({q})*g_{k}/e in (g_{k})")
                    tested += 1
        for w in pool[1:]:
            comp = divide_in_poly_ring(e * w, g, tr)
            out.require(not comp, f"k={k}: e*{w} unexpectedly in (g_{k})")
    out.note(f"{tested} multiples divisible by e")


def check_torsion_witness(ctx: Context, out: _Outcome) -> None:
    tr, suite = ctx.tr, ctx.suite
    x = build_relement(1 + gen_t(1), tr, suite)
    u = series_divide(two_series(tr), TruncSeries.monomial(1, tr))
    out.require(not x.rprime, f"theta(1+t1) = {x.rprime}")
    out.require(x.rhat == u, lambda: f"phi(1+t1) = {x.rhat}, expected [2](e)/e")
    ex = x * build_relement(gen_e(), tr, suite)
    out.compare(ex.is_zero(), "e*(1+t1)")
    nz = rhat_equal(x.rhat, ctx.zero())
    out.require(not nz, "phi(1+t1) vanishes in Rhat at this truncation")
    out.require(x.rhat.coeff(0) == Polynomial.const(2),
                f"leading coefficient of phi(1+t1) is {x.rhat.coeff(0)}")
    out.note(f"1+t1 -> (0, [2](e)/e), nonzero in Rhat ({nz.witness})")


def check_hasse_deskrings(ctx: Context, out: _Outcome) -> None:
    cfg = ctx.config
    P = 8
    for S, d, expected in desk_suite(cfg.deg_cap, cfg.coeff_cap):
        elements = S.elements()
        N = torsion_exponent(S, d, elements=elements)
        label = f"{S.name}, d={d}"
        if not isinstance(N, int):
            out.pending.append(f"{label}: torsion {N}")
            continue
        out.require(N == expected, f"{label}: torsion exponent {N}, expected {expected}")
        for s in elements:
            problems = round_trip(S, d, N, s, P)
            out.require(not problems, lambda: f"{label}: {problems[0]}")
        probe = kernel_probe(S, d, P, 6, elements)
        out.require(not probe, lambda: f"{label}: {probe[0]} dies in both S[1/d] and S/d^{P}")
        out.note(f"{label}: N={N}, {len(elements)} elements")
    agree, j = rhat_torsion_instance(ctx.tr)
    out.require(agree, "u = 0 and v = [2](e)/e do not agree in Rhat[1/e]")
    out.note(f"Rhat instance agrees with j={j}")


def check_grading(ctx: Context, out: _Outcome) -> None:
    tr, suite = ctx.tr, ctx.suite
    gens = generators(tr)
    for name in ("epsilon", "phi", "theta"):
        for bad in degree_mismatches(getattr(suite, name), gens):
            out.require(False, bad)
    rp = [BINV] + [b_var(k) for k in range(tr.N + 1)]
    for name in ("xi", "sigma"):
        for bad in degree_mismatches(getattr(suite, name), rp):
            out.require(False, bad)
    for k in ctx.config.k_range:
        model = rbar_model(k, tr)
        bk = [Polynomial.var(v) for v in model.b_gens]
        for bad in degree_mismatches(suite.pi(k), bk):
            out.require(False, bad)
        out.require(homogeneous_degree(model.g) == 0, f"g_{k} is not homogeneous of degree 0")
    for fam, label, w in relation_families(tr):
        try:
            homogeneous_degree(w)
        except ValueError as exc:
            out.require(False, f"relation {label} is not homogeneous: {exc}")


def check_integrality_spotchecks(ctx: Context, out: _Outcome) -> None:
    tr = ctx.tr
    shown = []

    def certify_series(label, q):
        if isinstance(q, TruncSeries):
            q = q.to_poly()
        for n, c in sorted(q.collect(E).items()):
            for outer, inner in c.split(lambda v: v.family == Family.M).items():
                cert = certify_integral(inner, homogeneous_degree(inner) or 0, tr)
                out.require(cert, f"{label} e^{n} coefficient {inner}: {cert}")
                if cert and len(shown) < 3 and inner.variables():
                    shown.append(f"{inner} = {cert}")

    found = square_cofactors(ctx)
    for name, (diff, comp) in found.items():
        if comp is not None and comp:
            certify_series(f"square cofactor for {name}", comp.cofactor)
    x = build_relement((1 + gen_t(1)) * gen_e(), tr, ctx.suite).is_zero()
    if out.compare(x, "(1+t1)e"):
        certify_series("torsion cofactor", x.cofactor)
    sq = build_relement(gen_t(1) * gen_t(1) - 1, tr, ctx.suite).is_zero()
    if out.compare(sq, "t1^2 - 1"):
        certify_series("t1^2-1 cofactor", sq.cofactor)
    for k in ctx.config.k_range:
        for label, comp in pi_ideal_cofactors(ctx, k):
            if comp:
                out.require(integrality_witness(comp.cofactor, tr) is None,
                            f"pi_{k}({label}) cofactor not integral")
    if shown:
        out.note("; ".join(shown))


# --- registry ---------------------------------------------------------------

@dataclass(frozen=True)
class CheckSpec:
    id: str
    anchor: str
    run: object


REGISTRY: dict[str, CheckSpec] = {}


def _register(id_, anchor, fn):
    REGISTRY[id_] = CheckSpec(id_, anchor, fn)


_register("lazard-axioms", "a_ij = a_ji, a_0i = delta_1i, F(F(x,y),z) = F(x,F(y,z)), "
          "[2](e) two ways", check_lazard_axioms)
_register("derived-identities", "(1+t_1)e = 0, t_1 = 1 + e(s_11 + t_2), t_1^2 = 1 in R",
          check_derived_identities)
_register("epsilon-welldef", "epsilon: R/e -> L, epsilon(s_ij) = a_ij, epsilon(e) = 0",
          check_epsilon_welldef)
_register("phi-relations", "phi: R -> L[[e]]/[2](e) respects the defining relations",
          check_phi_relations)
_register("eps-prime-phi", "epsilon' phi = epsilon", check_eps_prime_phi)
_register("telescope", "s_ij - sum_{l<m} a_{i+l,j} e^l = s_{i+m,j} e^m, same for t_k",
          check_telescope)
_register("quotient-composite", "L[e] -> R -> Rhat is the quotient map", check_quotient_composite)
_register("theta-relations", "theta: R -> L[b][1/b_0] respects the defining relations",
          check_theta_relations)
_register("theta-sigma", "theta sigma = 1, s_{j+1,k} = (s_jk - a_jk)/e in R[1/e]",
          check_theta_sigma)
_register("square-commutes", "xi theta = zeta phi; xi theta(t_k) - phi(t_k) = -e^-k [2](e)",
          check_square_commutes)
_register("gk-constant", "g_k(0) = 2", check_gk_constant)
_register("pi-consistency", "pi(t_k) = t_k, pi(s_kj) = s_kj, pi(s_00) = e, pi(1+t_1) = g_k(e)",
          check_pi_consistency)
_register("pi-kills-Ik", "pi(I_k) in (g_k(e)), so B_k/I_k -> A_k[e]/g_k(e)", check_pi_kills_ik)
_register("e-regular-rbar", "e is regular in A_k[e]/g_k(e)", check_e_regular_rbar)
_register("torsion-witness", "1+t_1 -> (0, [2](e)/e), killed by e, nonzero",
          check_torsion_witness)
_register("hasse-deskrings", "bounded d-torsion gives S = S[1/d] x_{S^[1/d]} S^_d",
          check_hasse_deskrings)
_register("grading", "|s_ij| = 2(1-i-j), |t_k| = 2(1-k); every map preserves degree",
          check_grading)
_register("integrality-spotchecks", "cofactors from the square and torsion checks lie in L",
          check_integrality_spotchecks)

EXPECTED_IDS = tuple(REGISTRY)


def run_check(check_id: str, ctx: Context) -> CheckReport:
    spec = REGISTRY[check_id]
    out = _Outcome()
    start = time.perf_counter()
    try:
        spec.run(ctx, out)
        status, witness = out.status()
    except Inconclusive as exc:
        status, witness = Status.INCONCLUSIVE, f"budget exhausted: {exc}"
    except PullbackError as exc:
        status, witness = Status.FAIL, str(exc)
    except Exception as exc:  # noqa: BLE001 - errors are reported, never raised
        status, witness = Status.INCONCLUSIVE, f"{type(exc).__name__}: {exc}"
    elapsed = (time.perf_counter() - start) * 1000.0
    return CheckReport(check_id, spec.anchor, status, ctx.tr.N, round(elapsed, 3), witness)


def run_certificate(config: CertificateConfig | None = None, mutation: tuple | None = None,
                    progress=None) -> list[CheckReport]:
    """Run the selected checks in registry order.

    ``mutation`` is ``(map name, generator word, delta)``; the corresponding
    generator image is shifted by ``delta`` before any check runs.
    """
    config = config or CertificateConfig()
    suite = MapSuite(Truncation(config.N))
    if mutation is not None:
        suite = suite.mutated(*mutation)
    ctx = Context(config, suite)
    reports = []
    for cid in config.selected():
        rep = run_check(cid, ctx)
        reports.append(rep)
        if progress is not None:
            progress(rep)
    return reports


def overall(reports) -> Status:
    if any(r.status is Status.FAIL for r in reports):
        return Status.FAIL
    if any(r.status is Status.INCONCLUSIVE for r in reports):
        return Status.INCONCLUSIVE
    return Status.PASS
