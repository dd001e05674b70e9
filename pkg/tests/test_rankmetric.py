import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmrdcodes.errors import CardinalityMismatch, InvalidDistance, ShapeMismatch, TooLarge
from lmrdcodes.gf import field_new, is_irreducible
from lmrdcodes.rankmetric import (
    ExtensionField,
    RankCode,
    block_compose,
    default_extension_modulus,
    gabidulin,
    mrd_cardinality,
    place_in_frame,
    verify_min_rank_distance,
    zero_code,
)

MRD_CAP = 1 << 16
MRD_CASES = [
    (q, m, n, d)
    for q in (2, 3, 4, 5, 7, 8, 9)
    for m in range(1, 9)
    for n in range(1, 9)
    for d in range(1, min(m, n) + 1)
    if mrd_cardinality(q, m, n, d) <= MRD_CAP
]


def test_mrd_sweep_size():
    assert len(MRD_CASES) == 395


@pytest.mark.parametrize("q,m,n,d", MRD_CASES, ids=lambda x: str(x))
def test_gabidulin_is_mrd(q, m, n, d):
    code = gabidulin(field_new(q), m, n, d)
    words = code.materialize()
    assert len(code) == mrd_cardinality(q, m, n, d) == words.shape[0]
    assert len({w.tobytes() for w in words}) == words.shape[0]
    assert verify_min_rank_distance(code) == d


@pytest.mark.parametrize("q,m,n,d", [(2, 2, 3, 2), (2, 3, 3, 2), (3, 2, 2, 1), (2, 2, 4, 1), (4, 2, 2, 2)])
def test_linear_and_exhaustive_agree(q, m, n, d):
    code = gabidulin(field_new(q), m, n, d)
    assert verify_min_rank_distance(code, "linear") == verify_min_rank_distance(code, "exhaustive") == d


def test_extension_field_is_a_field():
    base = field_new(2)
    ext = ExtensionField(base, 4)
    elems = [tuple(int(b) for b in format(i, "04b")[::-1]) for i in range(16)]
    one = ext.from_poly([1])
    for a in elems[1:]:
        assert ext.power(a, 15) == one
        assert ext.frobenius(a, 4) == a
    for a, b in itertools.product(elems, repeat=2):
        assert ext.mul(a, b) == ext.mul(b, a)


@pytest.mark.parametrize("q,deg", [(2, 3), (2, 5), (3, 2), (3, 4), (4, 3)])
def test_default_extension_modulus(q, deg):
    f = field_new(q)
    mod = default_extension_modulus(f, deg)
    assert len(mod) == deg + 1 and mod[-1] == 1
    assert is_irreducible(f, mod)


def test_message_order_is_most_significant_first():
    code = gabidulin(field_new(3), 2, 2, 2)
    assert code.message(1) == [0, 1]
    assert code.message(3) == [1, 0]
    words = code.materialize()
    for i in (0, 1, 5, 8):
        assert np.array_equal(words[i], code.codeword_array(i))


def test_transposed_shapes():
    f = field_new(2)
    wide, tall = gabidulin(f, 2, 4, 2), gabidulin(f, 4, 2, 2)
    assert wide.materialize().shape[1:] == (2, 4)
    assert tall.materialize().shape[1:] == (4, 2)
    assert verify_min_rank_distance(tall) == 2


def test_invalid_distance():
    with pytest.raises(InvalidDistance):
        gabidulin(field_new(2), 3, 4, 4)
    with pytest.raises(InvalidDistance):
        gabidulin(field_new(2), 3, 4, 0)


def test_materialize_cap():
    code = gabidulin(field_new(2), 5, 5, 1)
    with pytest.raises(TooLarge):
        code.materialize(cap=1 << 10)
    with pytest.raises(TooLarge):
        verify_min_rank_distance(gabidulin(field_new(2), 4, 4, 1), "exhaustive")


def test_single_codeword_distance_is_infinite():
    assert verify_min_rank_distance(zero_code(field_new(2), 2, 2)) == float("inf")


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([2, 3]),
    st.integers(1, 3),
    st.integers(1, 3),
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
def test_block_compose_adds_distances(q, m1, n1, m2, n2, data):
    f = field_new(q)
    d1 = data.draw(st.integers(1, min(m1, n1)))
    d2 = data.draw(st.integers(1, min(m2, n2)))
    a, b = gabidulin(f, m1, n1, d1), gabidulin(f, m2, n2, d2)
    if len(a) != len(b):
        with pytest.raises(CardinalityMismatch):
            block_compose(a, b)
        return
    c = block_compose(a, b)
    words = c.materialize()
    assert words.shape == (len(a), m1 + m2, n1 + n2)
    assert verify_min_rank_distance(c, "exhaustive" if len(c) <= 256 else "linear") == d1 + d2


def test_block_compose_explicit_codes():
    f = field_new(2)
    a = RankCode(f, 1, 2, codewords=np.array([[[0, 0]], [[1, 0]], [[0, 1]]]), min_distance=1)
    b = RankCode(f, 2, 1, codewords=np.array([[[0], [0]], [[1], [1]], [[0], [1]]]), min_distance=1)
    c = block_compose(a, b)
    assert not c.linear
    assert verify_min_rank_distance(c, "exhaustive") == 2


def test_place_in_frame():
    f = field_new(2)
    code = gabidulin(f, 2, 2, 2)
    framed = place_in_frame(code, 3, 4, 1, 2)
    words = framed.materialize()
    assert not words[:, 0].any() and not words[:, :, :2].any()
    assert verify_min_rank_distance(framed) == 2
    with pytest.raises(ShapeMismatch):
        place_in_frame(code, 2, 2, 1, 0)
