from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superaffine import filtration as fl
from superaffine.algebra import D, EV, G, H, OD, Q, AlgebraVariant, Family, elem, make_variant
from superaffine.exact import SparseVec, add_into
from superaffine.filtration import TBasisElement as T


@pytest.fixture(scope="module")
def l_sl2(sl2):
    return make_variant("l", sl2)


def falling(i, m):
    out = 1
    for r in range(m):
        out *= i - r
    return out


def member_oracle(e, k):
    """f in (t-1)^p C[t^±] iff f and its first p-1 derivatives vanish at t = 1."""
    comps = {}
    for a, c in e.items():
        comps.setdefault((a.family, a.g_index), {})[a.degree] = c
    for (fam, _), vec in comps.items():
        p = fl.level_power(fam, k)
        if p is None:
            return False
        for m in range(p):
            if sum(c * falling(i, m) for i, c in vec.items()):
                return False
    return True


def test_expand_examples():
    assert fl.expand(T(Family.D, 1, 1)) == elem(D(2), (-1, D(1)))
    assert fl.expand(T(Family.D, 2, 3)) == elem(D(5), (-2, D(4)), D(3))
    assert fl.expand(T(Family.OD, 1, 0, 0)) == elem(OD(0, 1), (-1, OD(0, 0)))


def test_membership_examples():
    assert fl.membership(elem(D(1), (-1, D(0))), 0)
    assert not fl.membership(elem(D(1)), 0)
    assert fl.membership(elem(H(0)), 0)
    assert not fl.membership(elem(H(0)), 1)


def test_membership_of_h_g_bracket(l_sl2):
    assert fl.membership(l_sl2.bracket(elem(H(1)), elem(G(2))), 0)


def test_membership_window_guard():
    with pytest.raises(fl.WindowTooSmall):
        fl.membership(elem(D(5)), 0, window=3)


families = st.sampled_from([Family.D, Family.H, Family.Q, Family.G])


@given(st.lists(st.tuples(families, st.integers(-4, 4), st.integers(-3, 3)), min_size=1, max_size=6), st.integers(0, 3))
def test_membership_matches_derivative_oracle(terms, k):
    acc = {}
    for fam, i, c in terms:
        add_into(acc, D(i)._replace(family=fam), c)
    e = SparseVec(acc)
    assert fl.membership(e, k) == member_oracle(e, k)


@given(families, st.integers(0, 3), st.integers(-4, 4))
def test_expand_round_trip(fam, k, i):
    from superaffine.exact import solve_in_span

    e = T(fam, k, i)
    # recover the binomial coefficients on the plain t-power basis
    basis = [T(fam, 0, ii) for ii in range(-4, 8)]
    coeffs = solve_in_span(dict(fl.expand(e).items()), [dict(fl.expand(b).items()) for b in basis])
    assert coeffs is not None
    assert sum(1 for c in coeffs if c) == k + 1
    assert all(coeffs[basis.index(T(fam, 0, i + m))] == comb(k, m) * (-1) ** (k - m) for m in range(k + 1))


def test_relation_examples(l_sl2):
    assert fl.check_lemma22(l_sl2, 1, 1, 1, 2, "d-d").ok
    lhs = l_sl2.bracket(fl.expand(T(Family.D, 1, 1)), fl.expand(T(Family.D, 1, 2)))
    assert lhs == elem(D(5), (-2, D(4)), D(3))
    for i in range(-2, 3):
        assert fl.check_lemma22(l_sl2, 0, 0, i, -i, "Q-Q").ok
    lhs = l_sl2.bracket(fl.expand(T(Family.Q, 1, 0)), fl.expand(T(Family.G, 1, 0)))
    rhs = fl.expand_sum([(1, T(Family.D, 2, 0)), (1, T(Family.H, 2, 0)), (1, T(Family.H, 1, 0))])
    assert lhs == rhs


def test_relation_sweeps(sl2, osp12):
    for g in (sl2, osp12):
        r = fl.relation_sweep(make_variant("l", g))
        assert r.ok, r.witnesses
        assert len(r.details["relations"]) == len(fl.RELATION_IDS)


def test_literal_relation_list_fails(sl2):
    r = fl.relation_sweep(make_variant("l", sl2), relations=fl.LITERAL_RELATIONS)
    assert not r.ok
    assert r.witnesses[0]["relation"] == "d-xtxi"


def test_filtration_laws_window_6(sl2):
    r = fl.verify_filtration_laws(make_variant("l", sl2), 3, 6)
    assert r.ok, r.witnesses


class _LeakyVariant(AlgebraVariant):
    """[h_i, G_j] picks up a stray d_0, which does not lie in a_0."""

    def _ordered(self, a, b):
        out = super()._ordered(a, b)
        if a.family == Family.H and b.family == Family.G:
            out = dict(out)
            add_into(out, D(0), 1)
        return out


def test_corrupted_bracket_is_caught(sl2):
    r = fl.verify_filtration_laws(_LeakyVariant("l", sl2), 1, 2)
    assert not r.ok
    assert r.witnesses[0]["law"] == "ideal"


def test_delta_quotient(l_sl2):
    t = fl.quotient_bracket_table(l_sl2, include_g=False)
    assert t.names == fl.DELTA_COSETS and t.parities == (0, 0, 1, 1)
    assert fl.table_invariants(t) == fl.table_invariants(fl.gl11_matrix_table())
    # [G0, tQ0] lands in span of td0, h0
    g0, tq0 = t.names.index("G0"), t.names.index("tQ0")
    assert set(t.brackets[(g0, tq0)]) <= {t.names.index("td0"), t.names.index("h0")}


def test_a0_a1_quotient(sl2, osp12):
    assert len(fl.quotient_bracket_table(make_variant("l", sl2)).names) == 7
    for g in (sl2, osp12):
        r = fl.verify_quotients(make_variant("l", g))
        assert r.ok, r.witnesses


def test_quotient_coordinates_rejects_outside_a0(l_sl2):
    with pytest.raises(ValueError):
        fl.quotient_coordinates(elem(D(0)), l_sl2)
    assert fl.quotient_coordinates(elem(OD(0, 3)), l_sl2) == {}
    assert fl.quotient_coordinates(elem(EV(1, 2)), l_sl2) == {"g:h": 1}
