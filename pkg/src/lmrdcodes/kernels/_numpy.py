"""Pure-numpy batch kernels, vectorised over the batch axis."""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def gf2_rank_rows(rows, ncols):
    rows = np.array(rows, dtype=np.uint64, copy=True)
    n, r = rows.shape
    rank = np.zeros(n, dtype=np.int64)
    if n == 0 or r == 0:
        return rank
    used = np.zeros((n, r), dtype=bool)
    idx = np.arange(n)
    for b in range(ncols - 1, -1, -1):
        bits = ((rows >> np.uint64(b)) & _ONE).astype(bool)
        cand = bits & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = rows[idx, piv]
        elim = bits.copy()
        elim[idx, piv] = False
        elim &= has[:, None]
        rows ^= np.where(elim, prow[:, None], np.uint64(0))
        used[idx[has], piv[has]] = True
        rank += has
    return rank


def gf2_rref_rows(rows, ncols):
    rows = np.array(rows, dtype=np.uint64, copy=True)
    n, r = rows.shape
    if n == 0 or r == 0:
        return rows
    used = np.zeros((n, r), dtype=bool)
    idx = np.arange(n)
    for b in range(ncols - 1, -1, -1):
        bits = ((rows >> np.uint64(b)) & _ONE).astype(bool)
        cand = bits & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = rows[idx, piv]
        elim = bits.copy()
        elim[idx, piv] = False
        elim &= has[:, None]
        rows ^= np.where(elim, prow[:, None], np.uint64(0))
        used[idx[has], piv[has]] = True
    # fully reduced rows have distinct leading bits; descending order is RREF order
    return np.sort(rows, axis=1)[:, ::-1].copy()


def gf2_cross_min_rank(a, b, ncols, same):
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    best, bi, bj = 1 << 30, -1, -1
    swap = not same and a.shape[0] > b.shape[0]
    outer, inner = (b, a) if swap else (a, b)
    for i in range(outer.shape[0]):
        rest = inner[i + 1 :] if same else inner
        if rest.shape[0] == 0:
            continue
        stacked = np.concatenate([np.broadcast_to(outer[i], (rest.shape[0], outer.shape[1])), rest], axis=1)
        ranks = gf2_rank_rows(stacked, ncols)
        j = int(ranks.argmin())
        jj = j + i + 1 if same else j
        cand = (int(ranks[j]),) + ((jj, i) if swap else (i, jj))
        # ties go to the lexicographically first pair, as in the compiled kernel
        if cand < (best, bi, bj) or bi < 0:
            best, bi, bj = cand
    return best, bi, bj


def _eliminate(m, sub, mul, inv, return_rank):
    m = np.array(m, dtype=np.uint8, copy=True)
    n, r, c = m.shape
    rank = np.zeros(n, dtype=np.int64)
    if n == 0:
        return m, rank
    idx = np.arange(n)
    for col in range(c):
        nz = m[:, :, col] != 0
        cand = nz & (np.arange(r)[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        sel = idx[has]
        tgt = rank[has]
        ok = tgt < r
        sel, tgt, pv = sel[ok], tgt[ok], piv[has][ok]
        # swap pivot row into place
        tmp = m[sel, tgt].copy()
        m[sel, tgt] = m[sel, pv]
        m[sel, pv] = tmp
        scale = inv[m[sel, tgt, col]]
        m[sel, tgt] = mul[scale[:, None], m[sel, tgt]]
        prow = m[sel, tgt]
        factors = m[sel, :, col].copy()
        factors[np.arange(sel.size), tgt] = 0
        m[sel] = sub[m[sel], mul[factors[:, :, None], prow[:, None, :]]]
        rank[sel] += 1
    return m, rank


def rank_batch(mats, add, sub, mul, inv):
    return _eliminate(mats, sub, mul, inv, True)[1]


def rref_batch(mats, add, sub, mul, inv):
    return _eliminate(mats, sub, mul, inv, False)[0]


def cross_min_rank(a, b, add, sub, mul, inv, same):
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    best, bi, bj = 1 << 30, -1, -1
    swap = not same and a.shape[0] > b.shape[0]
    outer, inner = (b, a) if swap else (a, b)
    for i in range(outer.shape[0]):
        rest = inner[i + 1 :] if same else inner
        if rest.shape[0] == 0:
            continue
        stacked = np.concatenate([np.broadcast_to(outer[i], (rest.shape[0],) + outer.shape[1:]), rest], axis=1)
        ranks = rank_batch(stacked, add, sub, mul, inv)
        j = int(ranks.argmin())
        jj = j + i + 1 if same else j
        cand = (int(ranks[j]),) + ((jj, i) if swap else (i, jj))
        # ties go to the lexicographically first pair, as in the compiled kernel
        if cand < (best, bi, bj) or bi < 0:
            best, bi, bj = cand
    return best, bi, bj


def orbit_labels(perm):
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.shape[0]
    labels = np.arange(n)
    # pointer doubling: label = min over the cycle
    cur = perm.copy()
    steps = 1
    while steps < n:
        labels = np.minimum(labels, labels[cur])
        cur = cur[cur]
        steps *= 2
    labels = np.minimum(labels, labels[cur])
    return labels
