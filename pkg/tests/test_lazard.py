from fractions import Fraction
from functools import lru_cache

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cobring.exactpoly import Polynomial, Truncation, m_var
from cobring.lazard import (
    IntegralityCertificate, NotCertified, TruncationRangeError, certify_integral,
    exp_log_series, fgl, fgl_coeff, integrality_witness, two_series,
)


@lru_cache(maxsize=None)
def oracle_table(n):
    """a_ij by sympy: invert log by fixed-point iteration and expand exp(log x + log y)."""
    x, y, t = sympy.symbols("x y t")
    ms = sympy.symbols(f"m1:{n + 1}")
    top = n + 1

    def log(u):
        return u + sum(m * u ** (i + 2) for i, m in enumerate(ms))

    def cut(expr, var, deg):
        expr = sympy.expand(expr)
        return sum(expr.coeff(var, k) * var ** k for k in range(deg + 1))

    inv = t
    for _ in range(top):
        inv = cut(t - (log(inv) - inv), t, top)
    s = sympy.expand(inv.subs(t, log(x) + log(y)))
    poly = sympy.Poly(s, x, y)
    table = {}
    for (i, j), c in poly.terms():
        if i + j <= top:
            table[(i, j)] = sympy.expand(c)
    return table


def to_sympy(p: Polynomial):
    return sympy.expand(sympy.sympify(str(p).replace("^", "**")))


def test_frozen_values(tr5):
    m1, m2 = (Polynomial.var(m_var(i)) for i in (1, 2))
    assert fgl_coeff(1, 1, tr5) == -2 * m1
    assert fgl_coeff(1, 2, tr5) == 4 * m1 * m1 - 3 * m2
    assert fgl_coeff(0, 1, tr5) == Polynomial.const(1)
    with pytest.raises(TruncationRangeError):
        fgl_coeff(4, 3, tr5)


@pytest.mark.parametrize("n", [3, 4])
def test_table_matches_sympy_oracle(n):
    law = fgl(Truncation(n))
    table = oracle_table(n)
    for i in range(n + 2):
        for j in range(n + 2 - i):
            want = table.get((i, j), 0)
            assert sympy.expand(to_sympy(law.a(i, j)) - want) == 0, (i, j)


def test_exp_and_log(tr5):
    log, exp = exp_log_series(tr5)
    m1, m2 = (Polynomial.var(m_var(i)) for i in (1, 2))
    assert log.coeff(1) == Polynomial.const(1) and log.coeff(2) == m1
    assert exp.coeff(2) == -m1
    assert exp.coeff(3) == 2 * m1 * m1 - m2


def test_two_series_low_terms(tr5):
    two = two_series(tr5)
    assert not two.coeff(0)
    assert two.coeff(1) == Polynomial.const(2)
    assert two.coeff(2) == fgl(tr5).a(1, 1)


def test_two_series_two_paths(tr5):
    law = fgl(tr5)
    assert law.two_series() == law.two_series_via_log()


def test_certify_examples(tr5):
    a11 = fgl(tr5).a(1, 1)
    m1 = Polynomial.var(m_var(1))
    cert = certify_integral(a11, -2, tr5)
    assert isinstance(cert, IntegralityCertificate) and cert.combination == {((1, 1),): 1}
    cert = certify_integral(2 * m1, -2, tr5)
    assert cert.combination == {((1, 1),): -1}
    assert isinstance(certify_integral(m1, -2, tr5), NotCertified)
    assert not certify_integral(m1, -2, tr5)


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 2),
                          st.integers(-4, 4)), min_size=1, max_size=4))
def test_integer_combinations_certify(terms):
    tr = Truncation(5)
    law = fgl(tr)
    p = Polynomial.const(0)
    for i, j, power, c in terms:
        p = p + c * law.a(i, j).pow(power, tr)
    assert integrality_witness(p, tr) is None


def test_certificate_expands_to_target(tr5):
    law = fgl(tr5)
    p = 3 * law.a(2, 2) - law.a(1, 1).mul(law.a(1, 2), tr5)
    cert = certify_integral(p, -6, tr5)
    assert cert.expand(tr5) == p


def test_half_is_not_integral(tr5):
    p = fgl(tr5).a(1, 2).scale(Fraction(1, 2))
    assert integrality_witness(p, tr5) is not None
