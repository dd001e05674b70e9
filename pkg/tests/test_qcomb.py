from fractions import Fraction
from itertools import product

import pytest

from lmrdcodes.errors import NegativeArgument
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import grassmannian_array
from lmrdcodes.qcomb import count_avoiding, mu, q_binomial, q_factorial, q_int

GRID = [(v, k, q) for q in (2, 3, 4, 5) for v in range(13) for k in range(v + 1)]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pascal_identity(q):
    for v in range(1, 13):
        for k in range(v + 1):
            assert q_binomial(v, k, q) == q_binomial(v - 1, k, q) * q**k + q_binomial(v - 1, k - 1, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_sandwich_bounds(q):
    upper = mu(q).upper
    for v in range(13):
        for k in range(v + 1):
            low = q ** (k * (v - k))
            assert low <= q_binomial(v, k, q) <= upper * low


def test_factorial_form_agrees():
    for v, k, q in GRID:
        assert q_binomial(v, k, q) * q_factorial(k, q) * q_factorial(v - k, q) == q_factorial(v, q)


def test_known_values():
    assert q_binomial(5, 2, 2) == 155
    assert q_binomial(4, 2, 2) == 35
    assert q_binomial(6, 3, 2) == 1395
    assert q_int(5, 2) == 31
    assert q_binomial(3, 5, 2) == 0 and q_binomial(3, -1, 2) == 0


def test_negative_arguments():
    with pytest.raises(NegativeArgument):
        q_int(-1, 2)
    with pytest.raises(NegativeArgument):
        q_factorial(-2, 3)


@pytest.mark.parametrize("q,lo,hi", [(2, "3.4627", "3.4628"), (3, "1.7853", "1.7854"), (4, "1.4523", "1.4524"), (5, "1.3152", "1.3153")])
def test_mu_enclosure_matches_table(q, lo, hi):
    m = mu(q)
    assert m.lower <= m.upper
    assert m.width < Fraction(1, 10**12)
    assert Fraction(lo) < m.lower and m.upper < Fraction(hi)


def test_mu_is_monotone_in_precision():
    a, b = mu(2, 10), mu(2, 20)
    assert a.lower <= b.lower <= b.upper <= a.upper


def _avoiding_brute(f, w, u, c):
    """Count c-subspaces of F^w meeting span(e_{w-u}, ..., e_{w-1}) trivially."""
    from lmrdcodes.linalg import rank_array

    n = 0
    for b in grassmannian_array(f, w, c):
        if rank_array(f, b[:, : w - u]) == c:
            n += 1
    return n


@pytest.mark.parametrize("q,w,u,c", [(2, 5, 2, 2), (2, 6, 3, 3), (3, 4, 2, 2), (2, 6, 2, 3), (4, 4, 1, 2)])
def test_count_avoiding_brute_force(q, w, u, c):
    f = field_new(q)
    assert count_avoiding(w, u, c, q) == _avoiding_brute(f, w, u, c)


def test_count_avoiding_out_of_range():
    assert count_avoiding(5, 3, 3, 2) == 0


@pytest.mark.parametrize("q,v,k", [(2, 6, 3), (3, 4, 2), (4, 4, 2), (2, 7, 2)])
def test_grassmannian_size(q, v, k):
    assert grassmannian_array(field_new(q), v, k).shape[0] == q_binomial(v, k, q)
