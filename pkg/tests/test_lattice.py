from hypothesis import given
from hypothesis import strategies as st

from cobring.lattice import IntegerLattice, xgcd

vectors = st.lists(st.integers(-6, 6), min_size=3, max_size=3)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_xgcd(a, b):
    x, y, g = xgcd(a, b)
    assert a * x + b * y == g
    assert g >= 0


@given(st.lists(vectors, min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=4,
                                                           max_size=4))
def test_combinations_are_members(gens, coeffs):
    lat = IntegerLattice(3, gens)
    target = [sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(3)]
    assert target in lat
    sol = lat.solve(target)
    assert [sum(c * g[k] for c, g in zip(sol, gens)) for k in range(3)] == target


@given(st.lists(vectors, min_size=1, max_size=4), vectors)
def test_residue_is_canonical(gens, v):
    lat = IntegerLattice(3, gens)
    residue, coeffs = lat.reduce(v)
    back = [residue[k] + sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(3)]
    assert back == v
    shifted = [v[k] + 2 * gens[0][k] for k in range(3)]
    assert lat.reduce(shifted)[0] == residue


def test_non_member():
    lat = IntegerLattice(2, [[2, 0], [0, 3]])
    assert [1, 0] not in lat
    assert [4, -3] in lat
    assert lat.solve([1, 1]) is None
