from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superaffine import modules as md
from superaffine import operators as op
from superaffine.algebra import CEN, D, EV, Family, make_variant
from superaffine.exact import SparseVec
from superaffine.filtration import WindowTooSmall
from superaffine.modules import AAtom, MBasis, TensorModule, mvec


@pytest.fixture(scope="module")
def triv(sl2):
    return TensorModule("1/2", md.trivial_vspec(sl2))


@pytest.fixture(scope="module")
def adj(sl2):
    return TensorModule(0, md.adjoint_vspec(sl2))


def oracle_minimal_m(lam, k_range, s_range, j_range, limit=6):
    """Witt action on trivial V: d_i t^j = (lam + j) t^{i+j}, evaluated by hand."""
    for m in range(limit + 1):
        ok = True
        for k in k_range:
            for s in s_range:
                for j in j_range:
                    total = sum((-1) ** i * comb(m, i) * (lam + j) * (lam + j + s + i) for i in range(m + 1))
                    if total:
                        ok = False
        if ok:
            return m
    return None


def test_differentiator_examples():
    assert op.differentiator(3, 1, 0) == op.UEAWord([(1, (D(3), D(1)))])
    assert op.differentiator(3, 1, 1) == op.UEAWord([(1, (D(3), D(1))), (-1, (D(2), D(2)))])
    assert op.differentiator(3, 1, 2) == op.UEAWord([(1, (D(3), D(1))), (-2, (D(2), D(2))), (1, (D(1), D(3)))])
    with pytest.raises(ValueError):
        op.differentiator(0, 0, -1)


def test_minimal_m_matches_oracle(triv):
    ks = ss = range(-2, 3)
    m, witness = op.minimal_annihilating_m(triv, ks, ss, 13)
    assert m == 2 == oracle_minimal_m(Fraction(1, 2), ks, ss, range(-3, 4))
    assert witness["m"] == 1


def test_search_needs_room(triv):
    with pytest.raises(WindowTooSmall):
        op.minimal_annihilating_m(triv, range(-2, 3), range(-2, 3), 5)


def test_zero_module(sl2):
    zero = TensorModule(0, md.A0ModuleSpec("zero", [], {}, sl2))
    assert op.minimal_annihilating_m(zero, range(-1, 2), range(-1, 2), 10)[0] == 0


def test_word_applies_right_factor_first(triv):
    w = op.UEAWord([(1, (D(2), D(-1)))])
    # d_{-1} first: (lam + 0) t^-1, then d_2: (lam - 1) t^1
    assert w.apply(triv, mvec(MBasis(0, 0, 0))) == mvec((Fraction(1, 2) * Fraction(-1, 2), MBasis(1, 0, 0)))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 4), st.integers(-3, 3), st.integers(0, 1))
def test_omega_degree_shift(k, s, m, n, r):
    mod = _trivial()
    word = op.differentiator(k, s, m)
    assert word.degree_shift() == k + s
    for b in word.apply(mod, mvec(MBasis(n, r, 0))):
        assert b.n == n + k + s


_MOD = {}


def _trivial():
    if not _MOD:
        from superaffine.gspec import builtin_gspec

        _MOD["m"] = TensorModule("1/2", md.trivial_vspec(builtin_gspec("sl2")))
    return _MOD["m"]


def test_current_annihilators(triv, adj):
    assert op.verify_lemma52(triv, 4, 12).ok
    assert op.verify_lemma52(adj, 4, 12).ok
    assert not op.verify_lemma52(adj, 0, 12).ok


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("family", [Family.EV, Family.OD])
def test_symbolic_current_closure(sl2, m, family):
    r = op.verify_current_closure(make_variant("l", sl2), m, family=family)
    assert r.ok, r.witnesses


def test_k_membership(adj):
    e = mvec(MBasis(0, 0, 0))
    for j in range(-1, 2):
        for p in range(-1, 2):
            c = op.cover_element(adj, 1, j, p, 4, e)
            assert op.k_membership(c, adj, 8)
            for a in (AAtom(1, 0), AAtom(-2, 1)):
                assert op.k_membership(c.scale_by(a), adj, 8)
    h = adj.v.g.index("h")
    single = op.CoverElement(((1, EV(h, 0), e),))
    assert not op.k_membership(single, adj, 4)
    assert op.k_membership(op.CoverElement(((1, EV(h, 0), SparseVec()),)), adj, 4)
    with pytest.raises(WindowTooSmall):
        op.k_membership(op.cover_element(adj, 1, 0, 5, 4, e), adj, 3)


def test_a_times_current():
    assert op.a_times_current(AAtom(2, 1), EV(0, 1)) == (Family.OD, 3, 0)
    assert op.a_times_current(AAtom(2, 1), EV(0, 1)).family == Family.OD
    assert op.a_times_current(AAtom(1, 1), EV(0, 0)._replace(family=Family.OD)) is None
    with pytest.raises(ValueError):
        op.a_times_current(AAtom(0, 0), D(1))


def test_dbar_examples():
    r = op.dbar_bracket_check(1, -1)
    assert r.ok
    lhat = make_variant("l-hat")
    br = lhat.bracket(op.dbar(1), op.dbar(-1))
    assert SparseVec({a: c for a, c in br.items() if a != CEN}) == op.dbar(0).scale(-2)
    assert not make_variant("l-hat").bracket(op.dbar(3), op.dbar(3))
    cubic = op.dbar_central_cubic(6)
    coeffs = cubic.details["coefficients"]
    assert op.dbar_bracket_check(2, -2).details["central"] == sum(c * (-2) ** e for e, c in enumerate(coeffs))


def test_dbar_central_cubic_value():
    # hand expansion: [d_-j + (-j/2) h_-j, d_j + (j/2) h_j] has central part -j^3/2
    r = op.dbar_central_cubic(6)
    assert r.ok and r.details["odd"]
    assert r.details["coefficients"] == [0, 0, 0, Fraction(-1, 2)]
    assert "notice" in r.details


def test_dbar_closure():
    for i in range(-6, 7):
        for j in range(-6, 7):
            assert op.dbar_bracket_check(i, j).ok
