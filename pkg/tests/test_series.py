import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobring.exactpoly import Polynomial, Truncation
from cobring.lazard import two_series
from cobring.series import NotDivisible, TruncSeries, series_divide

TR = Truncation(4)


def ser(*cs):
    return TruncSeries({n: Polynomial.const(c) for n, c in enumerate(cs)}, len(cs) + 6, TR)


def test_divide_examples():
    q = series_divide(ser(0, 2, 1), ser(0, 1))
    assert q.coeff(0) == Polynomial.const(2)
    assert q.coeff(1) == Polynomial.const(1)
    assert all(not q.coeff(n) for n in range(2, q.prec))
    with pytest.raises(NotDivisible):
        series_divide(ser(0, 1), ser(0, 0, 1))


def test_divide_round_trip_through_two_series():
    two = two_series(TR)
    f = two * (1 + TruncSeries.monomial(1, TR))
    q = series_divide(f, two)
    assert q.truncated(TR.order - 1) == (1 + TruncSeries.monomial(1, TR)).truncated(TR.order - 1)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5),
       st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_multiply_then_divide(fc, gc):
    g = ser(1, *gc)
    f = ser(*fc)
    q = series_divide(f * g, g)
    prec = min(q.prec, len(fc))
    assert q.truncated(prec) == f.truncated(prec)


def test_laurent_division():
    q = series_divide(ser(1), ser(0, 0, 1), laurent=True)
    assert q.valuation() == -2
    assert q.coeff(-2) == Polynomial.const(1)
