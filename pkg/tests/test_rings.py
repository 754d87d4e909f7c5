from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobring.exactpoly import B0, E, Polynomial, Truncation, b_var, m_var, s_var, t_var
from cobring.lazard import fgl, two_series
from cobring.rings import (
    Inconclusive, RLocElement, build_relement, divide_in_poly_ring, gen_b, gen_e, gen_s, gen_t,
    parse_generator, rbar_model, rhat_equal, rhatloc_equal,
)
from cobring.series import TruncSeries

TR = Truncation(4)
small_series = st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(
    lambda cs: TruncSeries({n: Polynomial.const(c) for n, c in enumerate(cs)}, 1 << 40, TR))


def mono(n, tr, c=1):
    return TruncSeries.monomial(n, tr, c)


def test_rhat_examples(tr5):
    two = two_series(tr5)
    zero = two - two
    got = rhat_equal(two, zero)
    assert got and got.cofactor == TruncSeries.const(1, tr5)
    assert not rhat_equal(mono(1, tr5), zero)
    assert not rhat_equal(TruncSeries.const(1, tr5), zero)
    with pytest.raises(ValueError):
        rhat_equal(mono(-1, tr5), zero)


def test_rhatloc_examples(tr5):
    two = two_series(tr5)
    zero = two - two
    for k in range(1, 5):
        got = rhatloc_equal(two.shift(-k), zero)
        assert got and got.power == k
        assert got.cofactor == TruncSeries.const(1, tr5)
    over_e = two.shift(-1)
    assert rhatloc_equal(over_e, zero)
    assert not rhatloc_equal(TruncSeries.const(1, tr5), zero)


def test_rhatloc_budget(tr5):
    two = two_series(tr5)
    with pytest.raises(Inconclusive):
        rhatloc_equal(two.shift(-4), two - two, budget=2)


def test_half_of_two_series_is_not_zero(tr5):
    two = two_series(tr5)
    half = TruncSeries({n: c.scale(Fraction(1, 2)) for n, c in two.coeffs.items()},
                       two.prec, tr5)
    got = rhat_equal(half, two - two)
    assert not got and got.witness


@given(small_series, small_series)
def test_equality_is_symmetric(f, g):
    assert bool(rhat_equal(f, g)) == bool(rhat_equal(g, f))
    assert rhat_equal(f, f)


@given(small_series, st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_adding_integral_multiples_of_two_series(f, cs):
    c = TruncSeries({n: Polynomial.const(k) for n, k in enumerate(cs)}, 1 << 40, TR)
    assert rhat_equal(f + c * two_series(TR), f)
    assert rhatloc_equal((f + c * two_series(TR)).shift(-1), f.shift(-1))


def test_synonyms_resolve():
    assert gen_s(0, 0) == gen_e()
    assert gen_s(0, 3) == gen_b(3) == Polynomial.var(b_var(3))
    assert parse_generator("s(1,2)") == parse_generator("s12") == Polynomial.var(s_var(1, 2))
    assert parse_generator("t2") == Polynomial.var(t_var(2))
    assert parse_generator("s(0,0)") == gen_e()
    with pytest.raises(ValueError):
        parse_generator("q7")


def test_build_relement_examples(tr5):
    x = build_relement(gen_e(), tr5)
    assert x.rprime == Polynomial.var(B0)
    assert x.rhat == mono(1, tr5)
    y = build_relement(gen_t(1), tr5)
    assert y.rprime == Polynomial.const(-1)
    law = fgl(tr5)
    for n in range(tr5.order + 1):
        want = Polynomial.const(0)
        for i in range(n + 1):
            want = want + law.a(i + 1, n - i)
        assert y.rhat.coeff(n) == want.truncate(tr5)
    z = build_relement((1 + gen_t(1)) * gen_e(), tr5)
    assert z.rprime.is_zero()
    assert z.rhat == two_series(tr5)
    assert z.is_zero()


@pytest.mark.parametrize("w", ["t1*t1 - 1", "(1+t1)*e", "t1 - 1 - e*(s11 + t2)"])
def test_derived_identities_vanish(tr5, w):
    e, t1, t2, s11 = gen_e(), gen_t(1), gen_t(2), gen_s(1, 1)
    word = eval(w, {"e": e, "t1": t1, "t2": t2, "s11": s11})
    assert build_relement(word, tr5).is_zero()


def test_pair_arithmetic_is_compatible(tr5):
    a = build_relement(gen_s(1, 1), tr5)
    b = build_relement(gen_t(2), tr5)
    c = build_relement(gen_s(1, 1) * gen_t(2) - gen_t(2), tr5)
    assert (a * b - b).compare(c)


def test_rbar_g2(tr5):
    model = rbar_model(2, tr5)
    a11 = fgl(tr5).a(1, 1)
    e = Polynomial.var(E)
    want = 2 + (a11 + gen_t(2)) * e + gen_s(2, 1) * e * e
    assert model.g == want
    assert model.g.collect(E)[0] == Polynomial.const(2)
    labels = [p for _, _, p in model.ideal_generators()]
    for p in (gen_t(0), gen_t(1) + 1, gen_s(1, 0) - 1):
        assert p in labels


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_gk_constant_term(tr5, k):
    assert rbar_model(k, tr5).g.collect(E)[0] == Polynomial.const(2)


def test_rbar_range(tr5):
    with pytest.raises(ValueError):
        rbar_model(1, tr5)
    with pytest.raises(ValueError):
        rbar_model(6, tr5)


def test_divide_in_poly_ring(tr5):
    g = rbar_model(2, tr5).g
    q = fgl(tr5).a(1, 1) * Polynomial.var(E) + 3
    got = divide_in_poly_ring(q * g, g, tr5)
    assert got and got.cofactor == q
    assert not divide_in_poly_ring(Polynomial.var(E), g, tr5)
    assert not divide_in_poly_ring(g + 1, g, tr5)
    # m1 is not in L, so m1*g is not in the ideal of L[e]
    rational = divide_in_poly_ring(Polynomial.var(m_var(1)) * g, g, tr5)
    assert not rational and "m1" in rational.witness


def test_rloc_one(tr5):
    one = RLocElement.one(tr5)
    x = RLocElement.from_relement(build_relement(gen_s(2, 1), tr5))
    assert (one * x).compare(x)
