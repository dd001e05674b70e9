import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmrdcodes.errors import DivisionByZero, FieldMismatch, NotAPrimePower
from lmrdcodes.gf import DEFAULT_MODULI, FieldElement, field_new, is_irreducible, prime_power

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32]


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    f = field_new(q)
    r = np.arange(q)
    add, mul = f.add_table.astype(int), f.mul_table.astype(int)
    assert (add[0] == r).all() and (mul[1] == r).all()
    assert (add == add.T).all() and (mul == mul.T).all()
    # associativity and distributivity over all triples
    assert (add[add[:, :, None], r[None, None, :]] == add[r[:, None, None], add[None, :, :]]).all()
    assert (mul[mul[:, :, None], r[None, None, :]] == mul[r[:, None, None], mul[None, :, :]]).all()
    lhs = mul[r[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    assert (lhs == rhs).all()
    for a in range(1, q):
        assert mul[a, f.inv_table[a]] == 1
    assert (add[r, f.neg_table] == 0).all()
    assert (f.sub_table == add[:, f.neg_table]).all()


@pytest.mark.parametrize("q", SMALL_Q)
def test_generator_is_primitive(q):
    f = field_new(q)
    assert f.multiplicative_order(f.generator) == q - 1


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_conway_moduli(q):
    assert field_new(q).modulus == DEFAULT_MODULI[q]


def test_char_p_frobenius_is_additive():
    f = field_new(27)
    for a, b in itertools.product(range(27), repeat=2):
        s = f.add_scalar(a, b)
        cube = lambda x: f.mul_scalar(x, f.mul_scalar(x, x))
        assert cube(s) == f.add_scalar(cube(a), cube(b))


@pytest.mark.parametrize("q", [1, 6, 10, 12, 257, 512])
def test_rejects_non_prime_powers_and_large_q(q):
    with pytest.raises(NotAPrimePower):
        field_new(q)


def test_prime_power():
    assert prime_power(243) == (3, 5)
    assert prime_power(2) == (2, 1)


def test_inverse_of_zero_raises():
    f = field_new(5)
    with pytest.raises(DivisionByZero):
        f.inv_scalar(0)
    with pytest.raises(ZeroDivisionError):
        FieldElement(f, 3) / FieldElement(f, 0)


def test_mixed_fields_raise():
    with pytest.raises(FieldMismatch):
        FieldElement(field_new(2), 1) + FieldElement(field_new(3), 1)


def test_is_irreducible_small():
    f2 = field_new(2)
    assert is_irreducible(f2, [1, 1, 1])
    assert not is_irreducible(f2, [1, 0, 1])  # (x+1)^2


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL_Q), st.data())
def test_element_ops_match_tables(q, data):
    f = field_new(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(1, q - 1))
    x, y = FieldElement(f, a), FieldElement(f, b)
    assert (x / y) * y == x
    assert (x - y) + y == x
    assert -(-x) == x
