"""Randomised extension of a lifted MRD code.

Every candidate has the form ``W = U + rowspan(T_r M)`` where ``U`` is a
``d/2``-subspace of Γ taken from the subcode ``E``, ``M`` spans a complement
of ``U`` and ``T_r`` runs over canonical bases of ``(k-d/2)``-subspaces of
``F_q^{v-d/2}``.  Since ``dim(W ∩ Γ) >= d/2``, no ``W`` can share a
``(k-d/2+1)``-subspace with a codeword of the LMRD, so only conflicts among
the accepted candidates need checking.

The orbit/clique machinery lives in :mod:`lmrdcodes.orbits` and is
re-exported here.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .bounds import Params
from .cdc import Cdc, lift, verify_cdc
from .errors import AmbientMismatch, InvalidSubcode, PreconditionViolated
from .gf import Field
from .linalg import (
    PACKED_MAX_COLS,
    Subspace,
    complement_through,
    grassmannian_array,
    matmul,
    pack_rows,
    subspace_from_rows,
)
from .orbits import (  # noqa: F401  (re-exported)
    Orbit,
    RECORD_GENERATOR_BLOCK,
    RECORD_REPRESENTATIVES,
    build_record_code,
    clique_extension,
    compatible_mask,
    extension_counts,
    filter_conflicting_orbits,
    orbit_compatibility_clique,
    orbit_partition,
    record_generator,
    record_universe,
    reference_orbit_statistics,
    verify_printed_representatives,
    verify_record_code,
)
from .rankmetric import gabidulin

ProgressFn = Callable[[int, int, int], None]

CHUNK = 64


@dataclass(frozen=True)
class SearchConfig:
    """Inputs of one search: subcode, restart count, attempt budget and seed."""

    E: Cdc
    n_max: int = 1
    r_max: int = 1
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_max < 1:
            raise PreconditionViolated(f"n_max >= 1 violated (n_max={self.n_max})")
        if self.r_max < 0:
            raise PreconditionViolated(f"r_max >= 0 violated (r_max={self.r_max})")


@dataclass
class SearchResult:
    extension: Cdc
    restart_sizes: list[int]
    best_restart: int
    seed: int
    candidates_tried: int = 0
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.extension)


def embed_in_gamma(e: Cdc, v: int, k: int) -> list[Subspace]:
    """Subspaces of ``E`` as subspaces of Γ inside ``F_q^v`` (prefix ``k`` zeros)."""
    if e.v == v:
        words = list(e)
        for u in words:
            if u.dim and np.any(u.basis[:, :k]):
                raise AmbientMismatch("subcode codeword does not lie in Γ")
        return words
    if e.v != v - k:
        raise AmbientMismatch(f"subcode ambient {e.v}, expected {v - k} or {v}")
    pad = np.zeros((e.k, k), dtype=np.uint8)
    return [Subspace(e.field, v, np.hstack([pad, u.basis])) for u in e]


class _ConflictIndex:
    """Accepted codewords with a batched ``rank[Z; W]`` test."""

    def __init__(self, field: Field, v: int, k: int, threshold: int):
        self.field, self.v, self.k = field, v, k
        # conflict iff dim(Z ∩ W) > threshold iff rank < 2k - threshold
        self.min_rank = 2 * k - threshold
        self.packed = field.q == 2 and v <= PACKED_MAX_COLS
        self.rows: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.rows)

    def _encode(self, mats: np.ndarray) -> np.ndarray:
        return pack_rows(mats) if self.packed else mats

    def conflicts(self, cands: np.ndarray) -> np.ndarray:
        """Boolean mask over candidate bases (shape ``(n, k, v)``)."""
        n = cands.shape[0]
        if not self.rows or n == 0:
            return np.zeros(n, dtype=bool)
        acc = np.stack(self.rows)
        enc = self._encode(cands)
        na = acc.shape[0]
        stacked = np.concatenate(
            [np.repeat(enc, na, axis=0), np.tile(acc, (n,) + (1,) * (acc.ndim - 1))], axis=1
        )
        if self.packed:
            ranks = kernels.gf2_rank_rows(stacked, self.v)
        else:
            ranks = kernels.rank_batch(stacked, *self.field.tables())
        return (ranks.reshape(n, na) < self.min_rank).any(axis=1)

    def add(self, basis: np.ndarray) -> None:
        self.rows.append(self._encode(basis[None])[0])


def _one_restart(
    field: Field,
    p: Params,
    words: list[Subspace],
    complements: list[np.ndarray],
    table: np.ndarray,
    r_max: int,
    seq: np.random.SeedSequence,
    progress: ProgressFn | None,
    restart: int,
) -> tuple[list[Subspace], int]:
    v, d, k = p.v, p.d, p.k
    h = d // 2
    rng = np.random.Generator(np.random.PCG64(seq))
    n_t = table.shape[0]
    budget = min(r_max, n_t)
    index = _ConflictIndex(field, v, k, k - h)
    accepted: list[Subspace] = []
    tried = 0
    for u, m in zip(words, complements):
        # lazy Fisher-Yates over the indices of T
        swaps: dict[int, int] = {}
        r = 0
        done = False
        while r < budget and not done:
            picks = []
            for _ in range(min(CHUNK, budget - r)):
                j = int(rng.integers(r, n_t))
                a, b = swaps.get(r, r), swaps.get(j, j)
                swaps[r], swaps[j] = b, a
                picks.append(b)
                r += 1
            sel = table[np.array(picks)]
            cands = np.concatenate([np.broadcast_to(u.basis, (len(picks),) + u.basis.shape), matmul(field, sel, m)], axis=1)
            bad = index.conflicts(cands)
            new_start = len(index)
            for i in range(len(picks)):
                tried += 1
                if bad[i]:
                    continue
                if len(index) > new_start:
                    # re-check against codewords accepted earlier in this chunk
                    rest = _ConflictIndex(field, v, k, k - h)
                    rest.rows = index.rows[new_start:]
                    if rest.conflicts(cands[i : i + 1])[0]:
                        continue
                w = subspace_from_rows(field, v, cands[i])
                accepted.append(w)
                index.add(w.basis)
                if k < d:
                    done = True
                    break
        if progress is not None:
            progress(restart, len(accepted), tried)
    return accepted, tried


def extend_lmrd(
    cfg: SearchConfig,
    params: Params | tuple,
    progress: ProgressFn | None = None,
    check: bool = True,
) -> SearchResult:
    """Randomised extension; returns the largest accepted set over ``n_max`` restarts.

    Restart ``i`` draws from the ``i``-th child of ``SeedSequence(seed)``, so
    the result does not depend on ``workers``.  Ties keep the earliest
    restart.
    """
    p = Params.of(params)
    q, v, d, k = p.q, p.v, p.d, p.k
    if d % 2 or not 2 <= d // 2 <= k <= v / 2:
        raise PreconditionViolated(f"2 <= d/2 <= k <= v/2 violated for {p}")
    e = cfg.E
    field = e.field
    if field.q != q:
        raise AmbientMismatch(f"subcode over GF({field.q}), parameters over GF({q})")
    h = d // 2
    if e.k != h:
        raise InvalidSubcode(f"subcode dimension {e.k}, expected d/2 = {h}")
    need = 2 * (d - k)
    if need > 0 and len(e) > 1:
        got = verify_cdc(e, mark=False).min_distance
        if got < need:
            raise InvalidSubcode(f"subcode minimum distance {got} < 2(d-k) = {need}")
    words = embed_in_gamma(e, v, k)
    r_max = max(cfg.r_max, 1)
    notes = [] if cfg.r_max >= 1 else ["r_max = 0 treated as 1"]
    table = grassmannian_array(field, v - h, k - h)
    complements = [complement_through(u).basis for u in words]
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.n_max)

    def run(i: int):
        return _one_restart(field, p, words, complements, table, r_max, seqs[i], progress, i)

    if cfg.workers > 1 and cfg.n_max > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, range(cfg.n_max)))
    else:
        results = [run(i) for i in range(cfg.n_max)]

    best, best_i = [], 0
    for i, (acc, _) in enumerate(results):
        if len(acc) > len(best) or i == 0:
            best, best_i = acc, i
    ext = Cdc(field, v, k, d, best, provenance=f"random extension: seed={cfg.seed}, n_max={cfg.n_max}, r_max={r_max}")
    result = SearchResult(ext, [len(a) for a, _ in results], best_i, cfg.seed, sum(t for _, t in results), notes)
    if check:
        check_extension(ext, p)
    return result


def check_extension(ext: Cdc, params: Params | tuple) -> None:
    """Pairwise distance and the Γ-intersection condition that protects the LMRD."""
    from .cdc import gamma_dims
    from .errors import VerificationFailed

    p = Params.of(params)
    if len(ext) == 0:
        return
    dims = gamma_dims(ext)
    if dims.min() < p.d // 2:
        raise VerificationFailed(f"extension codeword meets Γ in dimension {int(dims.min())} < d/2")
    res = verify_cdc(ext, structural=False, mark=False)
    if res.min_distance < p.d:
        raise VerificationFailed(f"extension has minimum distance {res.min_distance} < {p.d}")
    ext.verified = True


def verify_union(ext: Cdc, params: Params | tuple) -> Cdc:
    """Union of the standard LMRD with ``ext``, verified at distance ``d``."""
    p = Params.of(params)
    lmrd = lift(gabidulin(ext.field, p.k, p.v - p.k, p.d // 2))
    union = Cdc(ext.field, p.v, p.k, p.d, lmrd, provenance=lmrd.provenance + ext.provenance)
    union.add_all(ext)
    verify_cdc(union)
    return union


def gamma_subcode(field: Field, v: int, d: int, k: int) -> Cdc:
    """All ``d/2``-subspaces of Γ as a code in ``F_q^{v-k}``."""
    h = d // 2
    arr = grassmannian_array(field, v - k, h)
    c = Cdc(field, v - k, h, 2, provenance=f"[Γ choose {h}]")
    c.add_all(Subspace(field, v - k, b) for b in arr)
    return c


def size_cap(params: Params | tuple) -> float:
    """Upper bound on the extension size when ``k < d``; ``inf`` otherwise."""
    from .bounds import resolve_aq_upper

    p = Params.of(params)
    if p.k >= p.d:
        return math.inf
    return resolve_aq_upper(p.q, p.v - p.k, 2 * (p.d - p.k), p.d // 2).value


__all__ = [
    "Orbit",
    "SearchConfig",
    "SearchResult",
    "check_extension",
    "embed_in_gamma",
    "extend_lmrd",
    "extension_counts",
    "filter_conflicting_orbits",
    "gamma_subcode",
    "orbit_compatibility_clique",
    "orbit_partition",
    "record_generator",
    "record_universe",
    "reference_orbit_statistics",
    "size_cap",
    "verify_printed_representatives",
    "verify_record_code",
    "verify_union",
]
