import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmrdcodes.bounds import (
    LOWER_BOUND_RECORDS,
    SEEDED_UPPER,
    AqResolver,
    Params,
    Region,
    Rule,
    classify_region,
    lemma8_violations,
    lemma9_check,
    lemma10_violations,
    lemma11_violations,
    lmrd_size,
    optimal_cy,
    partial_spread,
    prop0_bound,
    prop0_display,
    prop1_bound,
    prop2_bound,
    resolve_aq_upper,
    singleton,
    st_cap,
    standard_grid,
)
from lmrdcodes.errors import NotApplicable, PreconditionViolated
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import Subspace, grassmannian_array, intersection_dim

GRID = list(standard_grid((2, 3), 14))


def _gauss(v, k, q):
    """Independent Gaussian binomial as a product of Fractions."""
    if not 0 <= k <= v:
        return 0
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(q ** (v - i) - 1, q ** (i + 1) - 1)
    assert out.denominator == 1
    return int(out)


def test_headline_values():
    assert prop1_bound((2, 10, 6, 5)).value == 32923
    r = prop1_bound((2, 11, 6, 4))
    assert r.value == 2**14 + 381
    assert r.sub_resolutions[0].rule is Rule.SEEDED
    assert resolve_aq_upper(2, 7, 6, 3).value == 17
    assert resolve_aq_upper(2, 7, 6, 3).rule is Rule.PARTIAL_SPREAD
    assert [st_cap((2, 10, 6, 5), t).value for t in (3, 4, 5)] == [155, 1, 1]


def test_prop0_dispatch():
    assert prop0_bound((2, 10, 6, 5)).rule is Rule.PROP0_CASE1
    assert prop0_bound((2, 10, 6, 5)).value == 32923
    r = prop0_bound((2, 8, 8, 4))
    assert r.rule is Rule.PROP0_CASE2 and r.value == 2**4 + 1
    r3 = prop0_bound((2, 10, 4, 5))
    assert r3.rule is Rule.PROP0_CASE3
    assert r3.details["display_agrees"]
    assert prop0_bound((2, 12, 4, 6)).rule is Rule.NO_LMRD_BOUND


def test_prop2_by_hand():
    # (2,10,4,5), c = 2, y = 2
    q, v, d, k, c, y = 2, 10, 4, 5, 2, 2
    second = Fraction(_gauss(5, 2, 2) * _gauss(5, 2, 2), _gauss(3, 2, 2) * _gauss(2, 2, 2)) * 2 ** (2 * 3)
    third = resolve_aq_upper(q, v - k, d - 2 * (c - 1), k - c + 1).value
    expected = int(2 ** (5 * 4) + second + third)
    assert prop2_bound((q, v, d, k), c, y).value == expected == 1268264


@pytest.mark.parametrize("c,y,msg", [(9, 2, "1 <= c"), (1, 0, "1 <= y"), (1, 1, "k-d/2+1 <= c+y")])
def test_prop2_preconditions(c, y, msg):
    with pytest.raises(PreconditionViolated, match=msg.replace("+", r"\+")):
        prop2_bound((2, 12, 6, 6), c, y)


def test_standard_preconditions():
    with pytest.raises(PreconditionViolated):
        prop1_bound((2, 10, 5, 5))
    with pytest.raises(PreconditionViolated):
        prop1_bound((2, 10, 4, 5))  # k >= d
    with pytest.raises(PreconditionViolated):
        prop0_bound((2, 7, 4, 4))  # k > v/2


@pytest.mark.parametrize(
    "q,v,k,value", [(2, 4, 2, 5), (2, 5, 2, 9), (2, 6, 2, 21), (2, 7, 3, 17), (3, 5, 2, 28), (2, 6, 3, 9), (2, 8, 4, 17)]
)
def test_partial_spread_values(q, v, k, value):
    assert partial_spread((q, v, 2 * k, k)) == value


def test_partial_spread_not_applicable():
    assert partial_spread((2, 10, 6, 3)) == 2**7 + 2**4 + 1  # [1]_2 = 1 < 3
    with pytest.raises(NotApplicable):
        partial_spread((2, 8, 6, 3))  # [2]_2 = 3 is not below k
    with pytest.raises(NotApplicable):
        partial_spread((2, 8, 4, 3))


def _max_partial_spread(q, v, k):
    """Largest set of pairwise trivially-intersecting k-subspaces (exhaustive clique search)."""
    f = field_new(q)
    words = [Subspace(f, v, b) for b in grassmannian_array(f, v, k)]
    n = len(words)
    adj = [{j for j in range(n) if j != i and intersection_dim(words[i], words[j]) == 0} for i in range(n)]
    best = 0

    def grow(size, cand):
        nonlocal best
        if size + len(cand) <= best:
            return
        if not cand:
            best = size
            return
        for i in sorted(cand):
            if size + len(cand) <= best:
                return
            grow(size + 1, cand & adj[i])
            cand = cand - {i}

    grow(1, adj[0])  # transitivity: some optimum contains word 0
    return best


def test_partial_spread_brute_force_v4():
    assert _max_partial_spread(2, 4, 2) == partial_spread((2, 4, 4, 2)) == 5


def test_singleton_and_resolver():
    assert singleton((2, 10, 6, 5)) == 97155
    assert resolve_aq_upper(2, 5, 2, 4).value == 31
    assert resolve_aq_upper(2, 5, 3, 2).notes[0].startswith("odd d")
    assert resolve_aq_upper(2, 5, 8, 2).value == 1
    assert resolve_aq_upper(2, 7, 4, 4).rule is Rule.SEEDED  # symmetric to k = 3
    assert resolve_aq_upper(2, 4, 2, 6).value == 0
    plain = AqResolver(seeded={})
    assert resolve_aq_upper(2, 7, 4, 3, plain).rule is Rule.SINGLETON
    assert set(SEEDED_UPPER) == {(2, 7, 4, 3), (2, 8, 4, 3), (2, 9, 4, 3)}


@pytest.mark.parametrize("q,v,d,k", [(2, 6, 4, 3), (2, 5, 4, 2), (3, 4, 4, 2), (2, 4, 2, 2)])
def test_singleton_is_a_bound(q, v, d, k):
    """Singleton dominates the brute-force partial-spread value where d = 2k."""
    if d == 2 * k:
        assert singleton((q, v, d, k)) >= partial_spread((q, v, d, k))
    assert singleton((q, v, d, k)) >= 1


def test_lower_bound_records():
    rows = {(r.q, r.v, r.d, r.k): r for r in LOWER_BOUND_RECORDS}
    assert len(rows) == 6
    r = rows[(2, 10, 6, 5)]
    assert r.lmrd_size == lmrd_size((2, 10, 6, 5)) and r.best == 2**15 + 155
    for key, rec in rows.items():
        assert rec.lmrd_size == lmrd_size(key)
        assert rec.best_extra <= rec.lmrd_bound_extra


def test_st_cap_range():
    with pytest.raises(PreconditionViolated):
        st_cap((2, 10, 6, 5), 2)


def test_optimal_cy():
    assert optimal_cy((2, 10, 4, 5)) == (2, 2)
    assert optimal_cy((2, 12, 6, 6)) == (1, 3)
    with pytest.raises(NotApplicable):
        optimal_cy((2, 12, 4, 6))


def test_report_serialisation():
    r = prop0_bound((2, 10, 4, 5))
    d = r.to_dict()
    assert d["rule"] == "Prop0Case3" and d["params"] == {"q": 2, "v": 10, "d": 4, "k": 5}
    assert isinstance(d["details"]["second_summand"], str)
    assert "Prop0Case3" in r.trace()


def test_grid_shape():
    assert len(GRID) == 182
    assert all(p.d % 2 == 0 and 2 <= p.d // 2 <= p.k <= p.v / 2 for p in GRID)


def test_lemma8_grid():
    assert [v for p in GRID for v in lemma8_violations(p)] == []


def test_lemma10_grid():
    assert [v for p in GRID for v in lemma10_violations(p)] == []


def test_lemma11_grid():
    checked = [p for p in GRID if 2 <= p.d // 2 < p.k < p.d and 3 * p.d <= 2 * p.v]
    assert checked
    assert [v for p in GRID for v in lemma11_violations(p)] == []


def test_lemma9_on_exact_pairs():
    for p in GRID:
        holds, exact = lemma9_check(p)
        if exact:
            assert holds, p


def test_prop0_never_worse_than_components():
    for p in GRID:
        r = prop0_bound(p)
        if r.value is None:
            continue
        if p.k < p.d:
            assert r.value <= prop1_bound(p).value
        if p.d <= p.k and 2 * p.k < 3 * p.d:
            h = p.d // 2
            for c in range(1, min(p.k - h, h) + 1):
                for y in range(max(1, p.k - h + 1 - c), h + 1):
                    assert r.value <= prop2_bound(p, c, y).value, (p, c, y)
            shown, _, _ = prop0_display(p)
            assert shown == r.value


def test_regions():
    assert classify_region((2, 10, 6, 5)) is Region.PROP1_BEST
    assert classify_region((2, 8, 8, 4)) is Region.TRIVIAL_BOUND
    assert classify_region((2, 10, 4, 5)) is Region.PROP2_BEST
    assert classify_region((2, 12, 4, 6)) is Region.NO_LMRD_BOUND


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(GRID))
def test_prop1_at_least_lmrd(p):
    if p.k < p.d:
        r = prop1_bound(p)
        assert r.value > lmrd_size(p)
        assert r.value == lmrd_size(p) + resolve_aq_upper(p.q, p.v - p.k, 2 * (p.d - p.k), p.d // 2).value
