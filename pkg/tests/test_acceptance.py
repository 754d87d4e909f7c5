"""Acceptance criteria 1-11 at desk scale (N = 5, k <= 5).

Each test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Run directly with ``python tests/test_acceptance.py``
for the lines alone.
"""

import functools
import json
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from cobring.certificate import EXPECTED_IDS, CertificateConfig, run_certificate
from cobring.cli import dumps
from cobring.exactpoly import E, Family, Polynomial, Truncation, substitute_hom, x_var
from cobring.fracture import desk_suite, kernel_probe, round_trip, torsion_exponent
from cobring.lazard import fgl, two_series
from cobring.maps import MapSuite, check_relation, generators, relation_families
from cobring.report import Status
from cobring.rings import (
    build_relement, gen_e, gen_s, gen_t, rbar_model, rhat_equal, rhatloc_equal,
)
from cobring.series import TruncSeries, series_divide

TR = Truncation(5)
LINES: list[str] = []


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                line = f"FAIL criterion {number:2d}: {title} ({type(exc).__name__}: {exc})"
                LINES.append(line.splitlines()[0])
                print(LINES[-1])
                raise
            LINES.append(f"PASS criterion {number:2d}: {title}")
            print(LINES[-1])
        return run
    return wrap


@pytest.fixture(scope="module")
def suite():
    return MapSuite(TR)


@criterion(1, "Lazard axioms and specialisations through total order 6")
def test_lazard_axioms():
    start = time.perf_counter()
    law = fgl(TR)
    for i in range(7):
        for j in range(7 - i):
            assert law.a(i, j) == law.a(j, i)
        assert law.a(0, i) == Polynomial.const(1 if i == 1 else 0)
    x, y, z = (Polynomial.var(x_var(n, 0)) for n in ("acc_x", "acc_y", "acc_z"))
    assert law.formal_sum(law.formal_sum(x, y), z) == law.formal_sum(x, law.formal_sum(y, z))
    m = Polynomial.var(x_var("acc_m", -2))

    def multiplicative(v):
        if v.family == Family.M:
            return m.pow(v.i).scale(Fraction((-1) ** v.i, v.i + 1))
        return Polynomial.var(v)

    assert substitute_hom(multiplicative, law.a(1, 1), fixed=()) == m
    for i in range(7):
        for j in range(7 - i):
            if 3 <= i + j <= 6:
                assert substitute_hom(multiplicative, law.a(i, j), fixed=()).is_zero(), (i, j)
    additive = substitute_hom(lambda v: 0 if v.family == Family.M else Polynomial.var(v),
                              two_series(TR).to_poly(), fixed=())
    assert additive == 2 * Polynomial.var(E)
    assert time.perf_counter() - start < 10


@criterion(2, "[2](e) by coefficient summation equals exp(2 log e) through e^6")
def test_two_series_two_ways():
    law = fgl(TR)
    a, b = law.two_series(), law.two_series_via_log()
    for n in range(7):
        assert a.coeff(n) == b.coeff(n), n
    assert a.coeff(6)


@criterion(3, "phi, theta and epsilon annihilate all five relation families")
def test_relation_preservation(suite):
    rels = relation_families(TR, 5)
    assert {f for f, _, _ in rels} == {"t0", "s10", "s_i0", "t-chain", "s-chain"}
    for name in ("phi", "theta", "epsilon"):
        for _, label, w in rels:
            rep = check_relation(getattr(suite, name), w, label)
            assert rep.status is Status.PASS, rep.witness


@criterion(4, "(1+t1)e = 0, t1 = 1 + e(s11+t2), t1^2 = 1 in the pair representation")
def test_derived_identities(suite):
    e, t1 = gen_e(), gen_t(1)
    x = build_relement((1 + t1) * e, TR, suite)
    comp = x.is_zero()
    assert comp and comp.cofactor == TruncSeries.const(1, TR)
    assert x.rhat == two_series(TR)
    assert build_relement(t1 - 1 - e * (gen_s(1, 1) + gen_t(2)), TR, suite).is_zero()
    assert build_relement(t1 * t1 - 1, TR, suite).is_zero()


@criterion(5, "xi theta = zeta phi; t_k discrepancy is exactly -e^-k [2](e)")
def test_square(suite):
    for i in range(6):
        for j in range(6 - i):
            w = gen_s(i, j)
            assert (suite.xi.apply(suite.theta.apply(w)) - suite.phi.apply(w)).is_zero()
    two = two_series(TR)
    for k in range(1, 6):
        diff = suite.xi.apply(suite.theta.apply(gen_t(k))) - suite.phi.apply(gen_t(k))
        assert diff == two.shift(-k).scale_by(Polynomial.const(-1))
        got = rhatloc_equal(diff, two - two)
        assert got and got.power == k and got.cofactor == TruncSeries.const(-1, TR)


@criterion(6, "epsilon' phi = epsilon, telescoping, L[e] -> Rhat is the quotient map")
def test_phi_extras(suite):
    for g in generators(TR):
        assert suite.epsilon_prime(suite.phi.apply(g)) == suite.epsilon.apply(g)
    reports = run_certificate(CertificateConfig(
        N=5, checks=("eps-prime-phi", "telescope", "quotient-composite")))
    assert all(r.passed for r in reports), [(r.id, r.witness) for r in reports]


@criterion(7, "g_k(0) = 2, pi(1+t1) = g_k, pi(t0) = e g_k, pi(I_k) in (g_k), k = 2..5")
def test_rbar_suite(suite):
    e = Polynomial.var(E)
    for k in range(2, 6):
        model = rbar_model(k, TR)
        pi = suite.pi(k)
        assert model.g.collect(E)[0] == Polynomial.const(2)
        assert pi.apply(1 + gen_t(1)) == model.g
        assert pi.apply(gen_t(0)) == e * model.g
        assert pi.apply(gen_t(k)) == gen_t(k)
        assert pi.apply(gen_e()) == e
        for j in range(1, 6):
            assert pi.apply(gen_s(k, j)) == gen_s(k, j)
    reports = run_certificate(CertificateConfig(N=5, k_max=5, checks=("pi-kills-Ik",)))
    assert reports[0].passed, reports[0].witness


@criterion(8, "fracture round trip on Z, Z[x]/(2x), Z[x]/(x^2) with d in {2, x}")
def test_fracture_round_trip():
    start = time.perf_counter()
    seen = {}
    for S, d, expected in desk_suite(4, 4):
        elements = S.elements()
        N = torsion_exponent(S, d, elements=elements)
        assert N == expected, (S, d, N)
        seen[(S.name, str(d))] = N
        for s in elements:
            assert round_trip(S, d, N, s, 8) == [], s
        assert kernel_probe(S, d, 8, 6, elements) == []
    assert seen[("Z", "2")] == 0 and seen[("Z[x]/(2x)", "x")] == 1
    assert time.perf_counter() - start < 30


@criterion(9, "1+t1 has pair (0, [2](e)/e), killed by e, nonzero in Rhat")
def test_torsion_witness(suite):
    x = build_relement(1 + gen_t(1), TR, suite)
    e = TruncSeries.monomial(1, TR)
    two = two_series(TR)
    assert x.rprime.is_zero()
    v = series_divide(two, e)
    assert x.rhat.truncated(TR.order) == v.truncated(TR.order)
    assert (x * build_relement(gen_e(), TR, suite)).is_zero()
    assert x.rhat.coeff(0) == Polynomial.const(2)
    assert not rhat_equal(x.rhat, two - two)


@criterion(10, "perturbing one generator image by +1 makes checks 3-5 fail")
def test_negative_controls():
    cases = [
        (("phi", gen_t(1), 1), "phi-relations"),
        (("theta", gen_t(1), 1), "theta-relations"),
        (("epsilon", gen_t(1), 1), "epsilon-welldef"),
        (("phi", gen_t(1), 1), "derived-identities"),
        (("theta", gen_t(1), 1), "square-commutes"),
        (("phi", gen_s(1, 1), 1), "square-commutes"),
    ]
    for mutation, check in cases:
        (rep,) = run_certificate(CertificateConfig(N=5, checks=(check,)), mutation=mutation)
        assert rep.status is Status.FAIL and rep.witness, (mutation[0], check, rep)


@criterion(11, "verify --trunc 5 exits 0 in under 60 s; canonical JSON round-trips")
def test_full_verify(tmp_path):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "cobring", "verify", "--trunc", "5",
                           "--format", "json", "--canonical", "--out", str(out)],
                          capture_output=True, text=True, timeout=120)
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    assert elapsed < 60
    text = out.read_bytes()
    doc = json.loads(text)
    assert [c["id"] for c in doc["checks"]] == list(EXPECTED_IDS)
    assert all(c["status"] == "pass" for c in doc["checks"])
    assert dumps(doc).encode("utf-8") == text


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
