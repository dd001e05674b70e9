"""numba-compiled batch kernels.  Same signatures as ``_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _gf2_insert(basis, x, ncols):
    # basis[b] holds the reduced vector with leading bit b, or 0
    for b in range(ncols - 1, -1, -1):
        if (x >> np.uint64(b)) & np.uint64(1):
            if basis[b] == 0:
                basis[b] = x
                return 1
            x ^= basis[b]
    return 0


@njit(cache=True)
def gf2_rank_rows(rows, ncols):
    n, r = rows.shape
    out = np.zeros(n, dtype=np.int64)
    basis = np.zeros(64, dtype=np.uint64)
    for i in range(n):
        basis[:] = 0
        rk = 0
        for j in range(r):
            rk += _gf2_insert(basis, rows[i, j], ncols)
        out[i] = rk
    return out


@njit(cache=True)
def gf2_rref_rows(rows, ncols):
    n, r = rows.shape
    out = np.zeros((n, r), dtype=np.uint64)
    basis = np.zeros(64, dtype=np.uint64)
    for i in range(n):
        basis[:] = 0
        for j in range(r):
            _gf2_insert(basis, rows[i, j], ncols)
        # back substitution: clear each pivot bit from every other basis vector
        for b in range(ncols):
            if basis[b] != 0:
                for c in range(b + 1, ncols):
                    if basis[c] != 0 and (basis[c] >> np.uint64(b)) & np.uint64(1):
                        basis[c] ^= basis[b]
        k = 0
        for b in range(ncols - 1, -1, -1):
            if basis[b] != 0:
                out[i, k] = basis[b]
                k += 1
    return out


@njit(cache=True)
def gf2_cross_min_rank(a, b, ncols, same):
    """Min over pairs of rank(a_i stacked on b_j); pairs i < j when ``same``."""
    na, ka = a.shape
    nb, kb = b.shape
    best = 1 << 30
    bi = -1
    bj = -1
    base = np.zeros(64, dtype=np.uint64)
    work = np.zeros(64, dtype=np.uint64)
    for i in range(na):
        base[:] = 0
        rk0 = 0
        for t in range(ka):
            rk0 += _gf2_insert(base, a[i, t], ncols)
        start = i + 1 if same else 0
        for j in range(start, nb):
            work[:] = base
            rk = rk0
            for t in range(kb):
                rk += _gf2_insert(work, b[j, t], ncols)
            if rk < best:
                best = rk
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True)
def _rank_one(m, add, sub, mul, inv):
    r, c = m.shape
    row = 0
    for col in range(c):
        if row == r:
            break
        piv = -1
        for i in range(row, r):
            if m[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for t in range(c):
                tmp = m[row, t]
                m[row, t] = m[piv, t]
                m[piv, t] = tmp
        s = inv[m[row, col]]
        for t in range(c):
            m[row, t] = mul[s, m[row, t]]
        for i in range(r):
            if i != row and m[i, col] != 0:
                f = m[i, col]
                for t in range(c):
                    m[i, t] = sub[m[i, t], mul[f, m[row, t]]]
        row += 1
    return row


@njit(cache=True)
def rank_batch(mats, add, sub, mul, inv):
    n = mats.shape[0]
    out = np.zeros(n, dtype=np.int64)
    work = np.empty(mats.shape[1:], dtype=np.uint8)
    for i in range(n):
        work[:, :] = mats[i]
        out[i] = _rank_one(work, add, sub, mul, inv)
    return out


@njit(cache=True)
def rref_batch(mats, add, sub, mul, inv):
    out = mats.copy()
    for i in range(out.shape[0]):
        _rank_one(out[i], add, sub, mul, inv)
    return out


@njit(cache=True)
def cross_min_rank(a, b, add, sub, mul, inv, same):
    na, ka, v = a.shape
    nb, kb, _ = b.shape
    work = np.empty((ka + kb, v), dtype=np.uint8)
    best = 1 << 30
    bi = -1
    bj = -1
    for i in range(na):
        start = i + 1 if same else 0
        for j in range(start, nb):
            work[:ka, :] = a[i]
            work[ka:, :] = b[j]
            rk = _rank_one(work, add, sub, mul, inv)
            if rk < best:
                best = rk
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True)
def orbit_labels(perm):
    n = perm.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        if labels[i] >= 0:
            continue
        j = i
        while labels[j] < 0:
            labels[j] = i
            j = perm[j]
    return labels
