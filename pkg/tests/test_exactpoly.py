from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobring.exactpoly import (
    B0, BINV, E, Family, NonHomogeneous, Polynomial, Truncation, b_var, homogeneous_degree,
    m_var, poly_arith, s_var, substitute_hom, t_var, x_var,
)

X, Y, Z = (x_var(n, 0) for n in ("px", "py", "pz"))
VARS = [X, Y, Z, E, m_var(1), m_var(2)]


@st.composite
def polys(draw, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple(sorted({v: draw(st.integers(0, 3)) for v in draw(
            st.lists(st.sampled_from(VARS), max_size=3))}.items(), key=lambda kv: kv[0].key))
        p = Polynomial.monomial(mono, draw(st.fractions(max_denominator=6).filter(bool)))
        key = str(p)
        terms[key] = p
    out = Polynomial.const(0)
    for p in terms.values():
        out = out + p
    return out


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(polys())
def test_inverse_and_identity(f):
    assert poly_arith("add", f, -f).is_zero()
    assert poly_arith("mul", f, Polynomial.const(1)) == f
    assert f - f == Polynomial.const(0)


@given(polys())
def test_no_zero_coefficients_stored(f):
    assert all(c != 0 for _, c in f.items())
    assert all(isinstance(c, Fraction) for _, c in f.items())


def test_binomial_identity():
    x, y = Polynomial.var(X), Polynomial.var(Y)
    assert (x + y) * (x - y) == x * x - y * y


def test_fractions_stay_reduced():
    p = Polynomial.const(Fraction(6, 4))
    assert p.constant_term() == Fraction(3, 2)
    assert p.constant_term().denominator == 2


def test_degrees_follow_the_family_table():
    assert homogeneous_degree(Polynomial.var(E)) == 2
    assert homogeneous_degree(Polynomial.var(m_var(1)) * Polynomial.var(E, 2)) == 2
    assert homogeneous_degree(Polynomial.var(m_var(3))) == -6
    assert homogeneous_degree(Polynomial.var(s_var(1, 2))) == 2 * (1 - 3)
    assert homogeneous_degree(Polynomial.var(t_var(4))) == 2 * (1 - 4)
    assert homogeneous_degree(Polynomial.var(b_var(2))) == -2
    assert homogeneous_degree(Polynomial.var(B0, -1)) == -2
    with pytest.raises(NonHomogeneous):
        homogeneous_degree(Polynomial.var(E) + 1)


def test_substitution_examples():
    x, y, z = (Polynomial.var(v) for v in (X, Y, Z))
    assert substitute_hom({X: Polynomial.const(0)}, x * x + 1, fixed=()) == Polynomial.const(1)
    assert substitute_hom({X: y + z}, x * x, fixed=()) == y * y + 2 * y * z + z * z
    f = x * y + 3 * z
    assert substitute_hom(lambda v: Polynomial.var(v), f, fixed=()) == f


def test_negative_power_of_b0_uses_inverse_image():
    f = Polynomial.var(B0, -2)
    img = substitute_hom({B0: Polynomial.var(E), BINV: Polynomial.var(E, -1)}, f, fixed=())
    assert img == Polynomial.var(E, -2)


def test_truncation_drops_heavy_terms():
    tr = Truncation(2)
    assert tr.order == 4
    assert Polynomial.var(m_var(3)).truncate(tr).is_zero()
    assert Polynomial.var(m_var(1), 3).truncate(tr).is_zero()
    assert Polynomial.var(E, 5).truncate(tr).is_zero()
    assert Polynomial.var(E, 4).truncate(tr) == Polynomial.var(E, 4)


@given(polys(), polys())
def test_truncation_commutes_with_multiplication(f, g):
    tr = Truncation(2)
    assert f.mul(g, tr) == (f.truncate(tr) * g.truncate(tr)).truncate(tr)


def test_families_are_distinct():
    assert len({Family.M, Family.B, Family.S, Family.T, Family.E}) == 5
    assert b_var(1) is b_var(1)
