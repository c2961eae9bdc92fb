from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superaffine import cohomology as co
from superaffine.algebra import Family, make_variant
from superaffine.exact import span_rank


@pytest.fixture(scope="module")
def sol_l(sl2):
    return co.solve_h2(make_variant("l", sl2), 4)


@pytest.fixture(scope="module")
def sol_frak_l(sl2):
    return co.solve_h2(make_variant("frak-l", sl2), 4)


def test_virasoro(sl2):
    sol = co.solve_h2(make_variant("frak-w"), 4)
    assert sol.h2_dimension == 1
    assert sol.stability == {4: 1, 5: 1}
    (rep,) = sol.representatives
    # proportional to i^3 - i on (d_i, d_-i)
    ratios = {Fraction(c) / (a.degree ** 3 - a.degree) for (a, b), c in rep.items()}
    assert len(ratios) == 1
    assert {a.degree for a, _ in rep} == {-4, -3, -2}
    assert co.verify_cocycle(lambda a, b: (a.degree ** 3 - a.degree) if a.degree + b.degree == 0 else 0,
                             make_variant("frak-w"), 6).ok


def test_l_representative_matches_table(sol_l):
    assert sol_l.h2_dimension == 1
    fn = sol_l.rep_function(0)
    for a in sol_l.variant.basis(4, include_center=False):
        for b in sol_l.variant.basis(4, include_center=False):
            assert fn(a, b) == co.central_cocycle(a, b), (a, b)


def test_w_super(sl2):
    sol = co.solve_h2(make_variant("w-super"), 4)
    assert sol.h2_dimension == 1
    fn = sol.rep_function(0)
    for a in sol.variant.basis(4, include_center=False):
        for b in sol.variant.basis(4, include_center=False):
            assert fn(a, b) == co.central_cocycle(a, b)


def test_frak_l_two_classes(sol_frak_l, osp12):
    assert sol_frak_l.h2_dimension == 2
    supports = [{(a.family, b.family) for a, b in rep} for rep in sol_frak_l.representatives]
    assert {(Family.D, Family.D)} in supports
    assert any(s and all(f in (Family.EV, Family.OD) for pair in s for f in pair) for s in supports)
    assert co.solve_h2(make_variant("frak-l", osp12), 4).h2_dimension == 2


def test_l_osp(osp12):
    assert co.solve_h2(make_variant("l", osp12), 4).h2_dimension == 1


@pytest.mark.parametrize("tag", ["frak-w", "w-super", "l", "frak-l"])
@pytest.mark.parametrize("N", [3, 4])
def test_window_stability(tag, N, sl2):
    g = None if tag in ("frak-w", "w-super") else sl2
    sol = co.solve_h2(make_variant(tag, g), N)
    assert sol.stability[N] == sol.stability[N + 1]


def test_center_rejected(sl2):
    with pytest.raises(co.IllegalVariant):
        co.solve_h2(make_variant("l-hat", sl2), 4)


def test_verify_cocycle_examples(sl2):
    v = make_variant("l", sl2)
    assert co.verify_cocycle(co.central_cocycle, v, 5).ok
    assert co.verify_cocycle(co.zero_cocycle, v, 5).ok
    bad = co.verify_cocycle(co.literal_central_cocycle, v, 5)
    assert not bad.ok
    assert len(bad.witnesses[0]["triple"]) == 3


def test_representatives_extend(sol_l, sol_frak_l):
    # a window-N representative is the restriction of the window-(N+2) one
    for sol in (sol_l, sol_frak_l):
        N = sol.certified_window
        big = co.solve_h2(sol.variant, N + 2, check_stability=False)
        for n in range(sol.h2_dimension):
            assert co.verify_cocycle(sol.rep_function(n), sol.variant, N).ok
            assert co.verify_cocycle(big.rep_function(n), sol.variant, N + 2).ok
        rows = []
        for n in range(sol.h2_dimension):
            restricted = {(a, b): c for (a, b), c in big.representatives[n].items()
                          if max(abs(a.degree), abs(b.degree)) <= N}
            rows.append(co.canonical_form(sol, restricted))
        # same classes: the change of basis is invertible
        assert span_rank([{i: c for i, c in enumerate(r) if c} for r in rows]) == sol.h2_dimension
        if sol is sol_l:
            assert rows == [[1]]


def test_literal_table_not_a_cocycle_in_solver(sol_l):
    with pytest.raises(ValueError):
        co.canonical_form(sol_l, co.literal_central_cocycle)
    assert co.canonical_form(sol_l, co.central_cocycle) == [1]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=12), st.integers(-3, 3).filter(bool))
def test_coboundaries_do_not_change_class(sol_l, coefs, scale):
    unk = sol_l.unknowns
    vec = {}
    for c, (_, cob) in zip(coefs, co.coboundaries(unk)):
        for idx, v in cob.items():
            vec[idx] = vec.get(idx, 0) + c * v
    table = {}
    for idx, (a, b) in enumerate(unk.pairs):
        total = scale * co.central_cocycle(a, b) + vec.get(idx, 0)
        if total:
            table[(a, b)] = total
    assert co.canonical_form(sol_l, table) == [scale]


def test_off_degree_zero_table_raises(sl2):
    with pytest.raises(ValueError):
        co.verify_cocycle(lambda a, b: 1, make_variant("frak-w"), 2)
