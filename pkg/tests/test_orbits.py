import numpy as np
import pytest

from lmrdcodes.errors import NotFound, NotInvertible
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import (
    FqMatrix,
    Subspace,
    apply_matrix,
    gamma_intersection_dim,
    grassmannian_array,
    intersection_dim,
)
from lmrdcodes.orbits import (
    RECORD_GENERATOR_BLOCK,
    extension_counts,
    filter_conflicting_orbits,
    gamma_universe,
    orbit_compatibility_clique,
    orbit_of,
    orbit_partition,
    orbits_compatible,
    record_generator,
    record_representatives,
)

# companion matrix of x^4 + x + 1 acting on row vectors
SINGER4 = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]], dtype=np.uint8)


def _order(g: FqMatrix) -> int:
    cur, n = g, 1
    eye = FqMatrix.identity(g.field, g.rows)
    while cur != eye:
        cur, n = cur @ g, n + 1
    return n


def test_singer_orbits_on_lines(f2):
    g = FqMatrix(f2, SINGER4)
    assert _order(g) == 15
    part = orbit_partition(g, grassmannian_array(f2, 4, 2))
    assert part.lengths() == {15: 2, 5: 1}
    # every orbit is closed and consistent with the single-orbit walk
    for o in part.orbits:
        walk = orbit_of(g, o.representative)
        assert [u.key for u in walk] == [Subspace(f2, 4, m).key for m in o.members]
    clean, dirty = filter_conflicting_orbits(part.orbits, 0)
    assert [o.length for o in clean] == [5] and len(dirty) == 2
    spread = clean[0].subspaces()
    assert all(intersection_dim(a, b) == 0 for i, a in enumerate(spread) for b in spread[i + 1 :])


def test_dirty_flag_matches_brute_force(f2):
    g = FqMatrix(f2, SINGER4)
    part = orbit_partition(g, grassmannian_array(f2, 4, 2))
    for limit in (0, 1):
        clean, dirty = filter_conflicting_orbits(part.orbits, limit)
        for o in part.orbits:
            words = o.subspaces()
            brute = any(intersection_dim(a, b) > limit for i, a in enumerate(words) for b in words[i + 1 :])
            assert brute == (o in dirty)


def test_orbit_partition_rejects_open_universe(f2):
    g = FqMatrix(f2, SINGER4)
    with pytest.raises(ValueError, match="not closed"):
        orbit_partition(g, grassmannian_array(f2, 4, 2)[:10])
    with pytest.raises(NotInvertible):
        orbit_partition(FqMatrix.zeros(f2, 4, 4), grassmannian_array(f2, 4, 2))


def test_orbit_partition_over_gf3(f3):
    g = FqMatrix(f3, [[0, 1, 0], [0, 0, 1], [1, 2, 0]])
    part = orbit_partition(g, grassmannian_array(f3, 3, 1))
    assert sum(o.length for o in part.orbits) == 13
    assert len(np.unique(part.labels)) == len(part)


@pytest.mark.parametrize("q,v,k,t", [(2, 6, 3, 2), (2, 6, 3, 1), (3, 5, 2, 1), (2, 7, 3, 2)])
def test_gamma_universe_brute_force(q, v, k, t):
    f = field_new(q)
    uni = gamma_universe(f, v, k, t)
    brute = [b for b in grassmannian_array(f, v, k) if gamma_intersection_dim(Subspace(f, v, b), k) == t]
    got = sorted(tuple(m.ravel()) for m in uni)
    assert got == sorted(tuple(m.ravel()) for m in brute)


def test_record_generator_block_has_order_31(f2):
    b = FqMatrix(f2, RECORD_GENERATOR_BLOCK)
    assert _order(b) == 31
    g = record_generator()
    assert _order(g) == 31
    gamma_rows = np.zeros((5, 10), dtype=np.uint8)
    gamma_rows[:, 5:] = np.eye(5, dtype=np.uint8)
    gam = Subspace(f2, 10, gamma_rows)
    assert apply_matrix(gam, g) == gam


def test_printed_representatives_shape(f2):
    reps = record_representatives()
    g = record_generator()
    for r in reps:
        assert r.dim == 5
        assert gamma_intersection_dim(r, 5) == 3
        assert len(orbit_of(g, r)) == 31


def test_extension_counts():
    assert extension_counts() == (2667, 2480)


def test_greedy_clique_small(f2):
    g = FqMatrix(f2, SINGER4)
    part = orbit_partition(g, grassmannian_array(f2, 4, 2))
    clean, _ = filter_conflicting_orbits(part.orbits, 0)
    assert len(orbit_compatibility_clique(clean, 1, 0)) == 1
    with pytest.raises(NotFound):
        orbit_compatibility_clique(clean, 2, 0)
    with pytest.raises(NotFound):
        orbit_compatibility_clique([], 1, 0)


def test_greedy_clique_is_a_clique(f2):
    g = FqMatrix(f2, SINGER4)
    part = orbit_partition(g, grassmannian_array(f2, 4, 2))
    clique = orbit_compatibility_clique(part.orbits[:2], 2, 1)
    assert len(clique) == 2
    assert orbits_compatible(clique[0], clique[1], 1)
