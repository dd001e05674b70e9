"""Batch linear-algebra kernels with a numba path and a pure-numpy fallback.

The numba implementation is used when numba imports cleanly and the
environment variable ``LMRDCODES_NO_NUMBA`` is unset (or ``0``).  Both
backends expose the same functions and return identical results:

``gf2_rank_rows(rows, ncols)``
    ranks of a batch of GF(2) matrices stored as packed ``uint64`` rows,
    column 0 in the most significant of the ``ncols`` low bits.
``gf2_rref_rows(rows, ncols)``
    canonical RREF of each packed matrix, nonzero rows first.
``gf2_cross_min_rank(a, b, ncols, same)``
    ``(min rank, i, j)`` over stacked pairs ``a[i] ; b[j]``.
``rank_batch / rref_batch(mats, add, sub, mul, inv)``
    generic GF(q) versions on ``uint8`` arrays of shape ``(n, rows, cols)``.
``cross_min_rank(a, b, add, sub, mul, inv, same)``
    generic GF(q) pair scan.
``orbit_labels(perm)``
    smallest index on the cycle of ``perm`` through each position.
"""

from __future__ import annotations

import os

from . import _numpy as numpy_backend

numba_backend = None
if os.environ.get("LMRDCODES_NO_NUMBA", "0") in ("", "0"):
    try:
        from . import _numba as numba_backend  # noqa: F811
    except ImportError:  # pragma: no cover - numba missing
        numba_backend = None

backend = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if backend is numba_backend else "numpy"

gf2_rank_rows = backend.gf2_rank_rows
gf2_rref_rows = backend.gf2_rref_rows
gf2_cross_min_rank = backend.gf2_cross_min_rank
rank_batch = backend.rank_batch
rref_batch = backend.rref_batch
cross_min_rank = backend.cross_min_rank
orbit_labels = backend.orbit_labels

__all__ = [
    "BACKEND",
    "backend",
    "numba_backend",
    "numpy_backend",
    "gf2_rank_rows",
    "gf2_rref_rows",
    "gf2_cross_min_rank",
    "rank_batch",
    "rref_batch",
    "cross_min_rank",
    "orbit_labels",
]
