from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superaffine.exact import (
    EchelonBasis,
    RationalMatrix,
    SparseVec,
    SubspaceNotContained,
    format_scalar,
    nullspace_basis,
    quotient_dimension,
    rank,
    rref,
    scalar,
    solve_in_span,
)

F = Fraction

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=100)


@st.composite
def matrices(draw, max_dim=12):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    # mostly zeros so rank deficiency actually shows up
    entry = st.one_of(st.just(F(0)), st.just(F(0)), rationals)
    dense = [[draw(entry) for _ in range(cols)] for _ in range(rows)]
    return dense


def dense_rank(dense):
    """Plain textbook elimination, kept separate from the library code."""
    m = [list(r) for r in dense]
    r = 0
    for c in range(len(m[0]) if m else 0):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_scalar_parsing():
    assert scalar("1/2") == F(1, 2)
    assert scalar("4/2") == 2 and isinstance(scalar("4/2"), int)
    assert scalar(F(6, 3)) == 2
    assert format_scalar(F(-3, 6)) == "-1/2"
    with pytest.raises(ValueError):
        scalar("0.5")
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(TypeError):
        scalar(True)


def test_rref_rank_one():
    r, piv = rref(RationalMatrix.from_dense([[1, 2], [2, 4]]))
    assert r.to_dense() == [[1, 2], [0, 0]]
    assert piv == [0]


def test_rref_identity():
    r, piv = rref(RationalMatrix.identity(3))
    assert r == RationalMatrix.identity(3)
    assert piv == [0, 1, 2]


def test_rref_fractions():
    r, piv = rref(RationalMatrix.from_dense([[F(1, 2), F(1, 3)], [F(1, 4), F(1, 6)]]))
    assert r.to_dense() == [[1, F(2, 3)], [0, 0]]
    assert piv == [0]


def test_nullspace_examples():
    assert nullspace_basis(RationalMatrix.identity(2)) == []
    assert len(nullspace_basis(RationalMatrix(2, 3))) == 3
    (v,) = nullspace_basis(RationalMatrix.from_dense([[1, 1, 0], [0, 0, 1]]))
    # spans (1,-1,0)
    assert {k: v[k] for k in v} in ({0: 1, 1: -1}, {0: -1, 1: 1})


def test_quotient_dimension_examples():
    e1, e2 = {0: 1}, {1: 1}
    assert quotient_dimension([e1, e2], [e1]) == 1
    assert quotient_dimension([e1], [e1]) == 0
    assert quotient_dimension([e1, {0: 1, 1: 1}, e2], [{0: 1, 1: -1}]) == 1
    with pytest.raises(SubspaceNotContained):
        quotient_dimension([e1], [e2])


def test_sparsevec_drops_zeros():
    v = SparseVec({"a": 1, "b": 0})
    assert dict(v.items()) == {"a": 1}
    assert not (v - v)
    assert len(v.scale(0)) == 0


def test_echelon_express():
    b = EchelonBasis(track=True)
    b.add({0: 1, 1: 1})
    b.add({1: 1})
    assert b.express({0: 2, 1: 5}) == {0: 2, 1: 3}
    assert b.express({2: 1}) is None
    assert solve_in_span({0: 1}, [{0: 2}]) == [F(1, 2)]


@given(matrices())
def test_rref_idempotent(dense):
    m = RationalMatrix.from_dense(dense)
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv


@given(matrices())
def test_rank_nullity_and_kernel(dense):
    m = RationalMatrix.from_dense(dense)
    ns = nullspace_basis(m)
    assert rank(m) + len(ns) == m.cols
    assert rank(m) == dense_rank(dense)
    for v in ns:
        assert not m.apply(v)


@given(matrices())
def test_entries_lowest_terms(dense):
    r, _ = rref(RationalMatrix.from_dense(dense))
    for row in r.to_dense():
        for c in row:
            if isinstance(c, Fraction):
                assert c.denominator > 1
                assert Fraction(c.numerator, c.denominator) == c


vecs = st.dictionaries(st.integers(0, 5), rationals, max_size=6).map(SparseVec)


@given(vecs, vecs, vecs, rationals)
def test_sparsevec_axioms(a, b, c, s):
    assert (a + b) + c == a + (b + c)
    assert (a + b).scale(s) == a.scale(s) + b.scale(s)
    for v in ((a + b), a.scale(s), a - b):
        assert all(x != 0 for _, x in v.items())


@given(rationals, rationals, rationals)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert scalar(format_scalar(x)) == x
