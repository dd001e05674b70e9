import numpy as np
import pytest

from lmrdcodes.cdc import Cdc, gamma_dims, pairwise_min_distance, verify_cdc
from lmrdcodes.errors import AmbientMismatch, InvalidSubcode, PreconditionViolated, VerificationFailed
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import Subspace, grassmannian_array, subspace_from_rows
from lmrdcodes.search import (
    SearchConfig,
    check_extension,
    embed_in_gamma,
    extend_lmrd,
    gamma_subcode,
    size_cap,
    verify_union,
)


def _keys(result):
    return [u.key for u in result.extension.codewords()]


def test_singleton_subcode_gives_one_codeword(f2):
    # k < d and v < 3d/2: exactly one extra codeword is possible
    e = Cdc(f2, 4, 3, 2, [subspace_from_rows(f2, 4, np.eye(4, dtype=np.uint8)[1:])])
    res = extend_lmrd(SearchConfig(e, n_max=2, r_max=10, seed=3), (2, 8, 6, 4))
    assert len(res) == 1
    union = verify_union(res.extension, (2, 8, 6, 4))
    assert len(union) == 2**8 + 1 and union.verified


def test_record_parameters_small_budget(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    assert len(e) == 155
    res = extend_lmrd(SearchConfig(e, n_max=2, r_max=20, seed=11), (2, 10, 6, 5))
    assert 0 < len(res) <= size_cap((2, 10, 6, 5)) == 155
    assert (gamma_dims(res.extension) >= 3).all()
    assert res.extension.verified
    union = verify_union(res.extension, (2, 10, 6, 5))
    assert len(union) == 2**15 + len(res)
    assert res.restart_sizes[res.best_restart] == max(res.restart_sizes)


def test_k_less_than_d_uses_each_subspace_once(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    res = extend_lmrd(SearchConfig(e, n_max=1, r_max=30, seed=5), (2, 10, 6, 5))
    from lmrdcodes.cdc import gamma_part

    parts = [gamma_part(u, 5).key for u in res.extension]
    # each accepted W contains exactly one U from E inside Γ
    assert len(parts) == len(set(parts))


@pytest.mark.parametrize("seed", [1, 2])
def test_thread_count_does_not_change_result(f2, seed):
    e = gamma_subcode(f2, 10, 6, 5)
    one = extend_lmrd(SearchConfig(e, n_max=4, r_max=15, seed=seed, workers=1), (2, 10, 6, 5))
    many = extend_lmrd(SearchConfig(e, n_max=4, r_max=15, seed=seed, workers=4), (2, 10, 6, 5))
    assert one.restart_sizes == many.restart_sizes
    assert _keys(one) == _keys(many)


def test_different_seeds_differ(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    a = extend_lmrd(SearchConfig(e, r_max=10, seed=1), (2, 10, 6, 5))
    b = extend_lmrd(SearchConfig(e, r_max=10, seed=2), (2, 10, 6, 5))
    assert _keys(a) != _keys(b)


def test_k_at_least_d(f2):
    # (2,8,4,4): several acceptances per U are allowed
    e = gamma_subcode(f2, 8, 4, 4)
    res = extend_lmrd(SearchConfig(e, n_max=1, r_max=4, seed=0), (2, 8, 4, 4))
    assert len(res) > len(e) // 2
    assert pairwise_min_distance(res.extension.codewords()) >= 4
    assert verify_union(res.extension, (2, 8, 4, 4)).verified


def test_gf3_small(f3):
    e = gamma_subcode(f3, 6, 4, 3)
    res = extend_lmrd(SearchConfig(e, n_max=1, r_max=3, seed=9), (3, 6, 4, 3))
    assert len(res) >= 1
    assert verify_union(res.extension, (3, 6, 4, 3)).verified


def test_invalid_subcode(f2):
    # two 3-subspaces at distance 2, below 2(d - k) = 4 for (2,10,6,4)
    arr = grassmannian_array(f2, 6, 3)
    words = [Subspace(f2, 6, arr[0]), Subspace(f2, 6, arr[1])]
    e = Cdc(f2, 6, 3, 2, words)
    with pytest.raises(InvalidSubcode):
        extend_lmrd(SearchConfig(e), (2, 10, 6, 4))
    with pytest.raises(InvalidSubcode):
        extend_lmrd(SearchConfig(gamma_subcode(f2, 10, 4, 5)), (2, 10, 6, 5))


def test_precondition_and_config_errors(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    with pytest.raises(PreconditionViolated):
        extend_lmrd(SearchConfig(e), (2, 10, 5, 5))
    with pytest.raises(PreconditionViolated):
        SearchConfig(e, n_max=0)
    with pytest.raises(PreconditionViolated):
        SearchConfig(e, r_max=-1)
    with pytest.raises(AmbientMismatch):
        extend_lmrd(SearchConfig(gamma_subcode(field_new(3), 10, 6, 5)), (2, 10, 6, 5))


def test_r_max_zero_is_one(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    res = extend_lmrd(SearchConfig(e, r_max=0, seed=4), (2, 10, 6, 5))
    assert res.notes == ["r_max = 0 treated as 1"]
    assert res.candidates_tried == 155


def test_embed_in_gamma(f2):
    e = gamma_subcode(f2, 8, 4, 4)
    words = embed_in_gamma(e, 8, 4)
    assert all(not u.basis[:, :4].any() for u in words)
    with pytest.raises(AmbientMismatch):
        embed_in_gamma(e, 9, 4)


def test_check_extension_rejects_bad_codes(f2):
    bad = Cdc(f2, 10, 5, 6, [subspace_from_rows(f2, 10, np.eye(10, dtype=np.uint8)[:5])])
    with pytest.raises(VerificationFailed):
        check_extension(bad, (2, 10, 6, 5))


def test_progress_callback(f2):
    e = gamma_subcode(f2, 10, 6, 5)
    calls = []
    extend_lmrd(SearchConfig(e, r_max=2, seed=1), (2, 10, 6, 5), progress=lambda r, n, t: calls.append((r, n, t)))
    assert len(calls) == 155
    assert calls[-1][2] >= 155
