"""Orbits of a cyclic matrix group on subspaces, conflict filtering and greedy cliques.

The group acts on row vectors from the right, ``U -> {x G : x in U}``.  A
universe of subspaces is held as a stacked array of canonical bases sorted
lexicographically, so the smallest index on an orbit is its
lexicographically least member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import NotFound, VerificationFailed
from .gf import Field, field_new
from .linalg import (
    PACKED_MAX_COLS,
    FqMatrix,
    Subspace,
    complement_through,
    gamma_intersection_dim,
    grassmannian_array,
    matmul,
    pack_rows,
    rank_many,
    require_invertible,
    rref_many,
    subspace_from_rows,
)
from .qcomb import q_binomial

# one Singer-cycle block; the reference generator repeats it on the diagonal
RECORD_GENERATOR_BLOCK = (
    (0, 0, 0, 0, 1),
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 1),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
)

RECORD_REPRESENTATIVES = (
    ("1000000000", "0011100010", "0000010000", "0000001100", "0000000001"),
    ("1000000000", "0100001000", "0000010000", "0000000100", "0000000010"),
    ("0100000000", "0010000001", "0000010001", "0000001010", "0000000101"),
    ("1000000000", "0001100010", "0000010001", "0000001011", "0000000101"),
    ("1000000000", "0000100011", "0000010000", "0000001001", "0000000111"),
)

RECORD_PARAMS = (2, 10, 6, 5)


def record_generator(first_power: int = 1) -> FqMatrix:
    """Block-diagonal ``10 x 10`` generator built from the printed Singer-cycle block.

    ``first_power`` replaces the upper block by its power; the printed
    generator is ``first_power=1``.
    """
    f = field_new(2)
    block = np.array(RECORD_GENERATOR_BLOCK, dtype=np.uint8)
    first = np.eye(5, dtype=np.uint8)
    for _ in range(first_power % 31):
        first = matmul(f, first, block)
    g = np.zeros((10, 10), dtype=np.uint8)
    g[:5, :5] = first
    g[5:, 5:] = block
    return FqMatrix(f, g)


def record_representatives() -> list[Subspace]:
    f = field_new(2)
    return [Subspace(f, 10, np.array([[int(ch) for ch in row] for row in rep], dtype=np.uint8)) for rep in RECORD_REPRESENTATIVES]


@dataclass
class Orbit:
    """An orbit stored in cycle order starting from its least member."""

    index: int
    representative: Subspace
    members: np.ndarray

    @property
    def length(self) -> int:
        return self.members.shape[0]

    def subspaces(self) -> list[Subspace]:
        f, v = self.representative.field, self.representative.v
        return [Subspace(f, v, m) for m in self.members]


@dataclass
class OrbitPartition:
    field: Field
    universe: np.ndarray
    perm: np.ndarray
    labels: np.ndarray
    orbits: list[Orbit]

    def __len__(self) -> int:
        return len(self.orbits)

    def lengths(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for o in self.orbits:
            out[o.length] = out.get(o.length, 0) + 1
        return out


def _keys(field: Field, bases: np.ndarray) -> np.ndarray:
    """Order-preserving keys of flattened canonical bases."""
    flat = bases.reshape(bases.shape[0], -1)
    if field.q == 2 and flat.shape[1] <= 64:
        return pack_rows(flat)
    width = flat.shape[1]
    if width * np.log2(field.q) < 63:
        out = np.zeros(flat.shape[0], dtype=np.uint64)
        for j in range(width):
            out = out * np.uint64(field.q) + flat[:, j].astype(np.uint64)
        return out
    return np.ascontiguousarray(flat).view(np.dtype((np.void, width))).ravel()


def gamma_universe(field: Field, v: int, k: int, t: int) -> np.ndarray:
    """Canonical bases of all ``k``-subspaces ``U`` of ``F_q^v`` with ``dim(U ∩ Γ) = t``.

    Each such basis is ``[[P, B], [0, X]]``: ``P`` spans the projection to the
    first ``k`` coordinates, ``X`` is ``U ∩ Γ`` and ``B`` vanishes on the pivot
    columns of ``X``.  Rows are sorted lexicographically.
    """
    s = k - t
    ps = grassmannian_array(field, k, s)
    xs = grassmannian_array(field, v - k, t)
    nfree = (v - k - t) * s
    q = field.q
    fills = np.array(np.meshgrid(*[np.arange(q)] * nfree, indexing="ij"), dtype=np.uint8).reshape(nfree, -1).T
    if nfree == 0:
        fills = np.zeros((1, 0), dtype=np.uint8)
    out = []
    for x in xs:
        piv = {int(np.flatnonzero(row)[0]) for row in x}
        free_cols = [j for j in range(v - k) if j not in piv]
        b = np.zeros((fills.shape[0], s, v - k), dtype=np.uint8)
        b[:, :, free_cols] = fills.reshape(-1, s, len(free_cols))
        top = np.concatenate(
            [np.broadcast_to(ps[:, None], (ps.shape[0], b.shape[0], s, k)), np.broadcast_to(b[None], (ps.shape[0],) + b.shape)],
            axis=3,
        ).reshape(-1, s, v)
        bottom = np.zeros((top.shape[0], t, v), dtype=np.uint8)
        bottom[:, :, k:] = x
        out.append(np.concatenate([top, bottom], axis=1))
    bases = np.concatenate(out) if out else np.zeros((0, k, v), dtype=np.uint8)
    order = np.argsort(_keys(field, bases), kind="stable")
    return np.ascontiguousarray(bases[order])


def record_universe() -> np.ndarray:
    """The ``384400`` subspaces ``U`` of ``F_2^10`` with ``dim U = 5``, ``dim(U ∩ Γ) = 3``."""
    return gamma_universe(field_new(2), 10, 5, 3)


def _apply(field: Field, bases: np.ndarray, g: np.ndarray) -> np.ndarray:
    return rref_many(field, matmul(field, bases, g))


def orbit_partition(generator: FqMatrix, universe: np.ndarray | Sequence[Subspace]) -> OrbitPartition:
    """Split ``universe`` (closed under the generator) into orbits."""
    require_invertible(generator)
    field = generator.field
    if not isinstance(universe, np.ndarray):
        words = sorted(universe, key=Subspace.sort_key)
        universe = np.stack([u.basis for u in words]) if words else np.zeros((0, 0, generator.rows), dtype=np.uint8)
    n = universe.shape[0]
    if n == 0:
        return OrbitPartition(field, universe, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), [])
    keys = _keys(field, universe)
    order = np.argsort(keys, kind="stable")
    if not np.array_equal(order, np.arange(n)):
        universe = np.ascontiguousarray(universe[order])
        keys = keys[order]
    if np.any(keys[1:] == keys[:-1]):
        raise ValueError("universe contains repeated subspaces")
    images = _keys(field, _apply(field, universe, generator.data))
    perm = np.searchsorted(keys, images)
    perm = np.minimum(perm, n - 1)
    if not np.array_equal(keys[perm], images):
        raise ValueError("universe is not closed under the generator")
    perm = perm.astype(np.int64)
    labels = kernels.orbit_labels(perm)
    reps = np.flatnonzero(labels == np.arange(n))
    lengths = np.bincount(labels, minlength=n)[reps]
    members_of: dict[int, np.ndarray] = {}
    for length in np.unique(lengths):
        group = reps[lengths == length]
        walk = np.empty((group.size, length), dtype=np.int64)
        cur = group.copy()
        for step in range(length):
            walk[:, step] = cur
            cur = perm[cur]
        for r, row in zip(group, walk):
            members_of[int(r)] = row
    orbits = [
        Orbit(i, Subspace(field, universe.shape[2], universe[r]), universe[members_of[int(r)]]) for i, r in enumerate(reps)
    ]
    return OrbitPartition(field, universe, perm, labels, orbits)


def _pair_ranks(field: Field, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Ranks of ``[left_i ; right_i]`` for aligned stacks."""
    stacked = np.concatenate([left, right], axis=1)
    if field.q == 2 and stacked.shape[2] <= PACKED_MAX_COLS:
        return kernels.gf2_rank_rows(pack_rows(stacked), stacked.shape[2])
    return rank_many(field, stacked)


def filter_conflicting_orbits(orbits: Sequence[Orbit], max_intersection: int) -> tuple[list[Orbit], list[Orbit]]:
    """Split into ``(clean, dirty)``; dirty orbits hold a pair meeting in more than ``max_intersection``.

    For a cyclic group every pair ``(g^a U, g^b U)`` is an image of
    ``(U, g^(b-a) U)``, so comparing the representative with the other
    members covers all pairs.
    """
    clean, dirty = [], []
    groups: dict[tuple, list[Orbit]] = {}
    for o in orbits:
        groups.setdefault(o.members.shape, []).append(o)
    flags: dict[int, bool] = {}
    for shape, group in groups.items():
        length, k, v = shape
        if length == 1:
            for o in group:
                flags[o.index] = False
            continue
        field = group[0].representative.field
        mem = np.stack([o.members for o in group])
        left = np.repeat(mem[:, :1], length - 1, axis=1).reshape(-1, k, v)
        right = mem[:, 1:].reshape(-1, k, v)
        inter = 2 * k - _pair_ranks(field, left, right)
        bad = (inter.reshape(len(group), length - 1) > max_intersection).any(axis=1)
        for o, b in zip(group, bad):
            flags[o.index] = bool(b)
    for o in orbits:
        (dirty if flags[o.index] else clean).append(o)
    return clean, dirty


def compatible_mask(rep: Subspace, members: np.ndarray, max_intersection: int) -> np.ndarray:
    """For stacked orbit members ``(m, L, k, v)``: is every member within ``max_intersection`` of ``rep``?"""
    m, length, k, v = members.shape
    left = np.broadcast_to(rep.basis, (m * length, rep.dim, v))
    inter = rep.dim + k - _pair_ranks(rep.field, np.ascontiguousarray(left), members.reshape(-1, k, v))
    return (inter.reshape(m, length) <= max_intersection).all(axis=1)


def orbits_compatible(a: Orbit, b: Orbit, max_intersection: int) -> bool:
    return bool(compatible_mask(a.representative, b.members[None], max_intersection)[0])


def orbit_compatibility_clique(
    clean: Sequence[Orbit],
    target_size: int,
    max_intersection: int,
    seed: int | None = None,
    max_starts: int | None = None,
) -> list[Orbit]:
    """Greedy clique in the orbit compatibility graph.

    Vertices are ordered by representative (lexicographic canonical form),
    ties by orbit index; ``seed`` shuffles that order reproducibly.  Starting
    from each vertex in turn, the next compatible vertex in order is added
    until ``target_size`` is reached.
    """
    if target_size < 1:
        return []
    verts = sorted(clean, key=lambda o: (o.representative.sort_key(), o.index))
    if seed is not None:
        perm = np.random.Generator(np.random.PCG64(seed)).permutation(len(verts))
        verts = [verts[i] for i in perm]
    if not verts:
        raise NotFound("no clean orbits")
    shapes = {o.members.shape for o in verts}
    if len(shapes) != 1:
        raise ValueError("greedy clique needs orbits of equal length")
    members = np.stack([o.members for o in verts])
    starts = len(verts) if max_starts is None else min(max_starts, len(verts))
    best: list[int] = []
    for s in range(starts):
        chosen = [s]
        alive = compatible_mask(verts[s].representative, members, max_intersection)
        alive[: s + 1] = False
        while len(chosen) < target_size and alive.any():
            nxt = int(np.flatnonzero(alive)[0])
            chosen.append(nxt)
            alive &= compatible_mask(verts[nxt].representative, members, max_intersection)
            alive[nxt] = False
        if len(chosen) > len(best):
            best = chosen
        if len(best) >= target_size:
            return [verts[i] for i in best]
    raise NotFound(f"greedy search reached a clique of size {len(best)}, target {target_size}")


def orbit_of(generator: FqMatrix, u: Subspace) -> list[Subspace]:
    """Orbit of a single subspace in cycle order."""
    require_invertible(generator)
    out = [u]
    cur = u.basis
    while True:
        cur = _apply(u.field, cur[None], generator.data)[0]
        if np.array_equal(cur, u.basis):
            return out
        out.append(Subspace(u.field, u.v, cur))


def extension_counts(q: int = 2, v: int = 10, k: int = 5, t: int = 3) -> tuple[int, int]:
    """``(all k-extensions of a t-subspace of Γ, those meeting Γ in exactly t dims)``.

    Counted by brute force for the first ``t``-subspace of Γ in canonical order.
    """
    f = field_new(q)
    x = np.zeros((t, v), dtype=np.uint8)
    x[:, k:] = grassmannian_array(f, v - k, t)[0]
    xs = subspace_from_rows(f, v, x)
    comp = complement_through(xs)
    ext = grassmannian_array(f, v - t, k - t)
    bases = np.concatenate([np.broadcast_to(xs.basis, (ext.shape[0], t, v)), matmul(f, ext, comp.basis)], axis=1)
    meets = k - rank_many(f, np.ascontiguousarray(bases[:, :, :k]))
    total = q_binomial(v - t, k - t, q)
    assert total == ext.shape[0]
    return total, int((meets == t).sum())


@dataclass
class OrbitStatistics:
    universe: int
    orbits: int
    lengths: dict[int, int]
    dirty: int
    clean: int
    clique: list[Orbit]
    partition: OrbitPartition
    clean_orbits: list[Orbit]

    def to_dict(self) -> dict:
        return {
            "universe": self.universe,
            "orbits": self.orbits,
            "lengths": {str(k): v for k, v in self.lengths.items()},
            "dirty": self.dirty,
            "clean": self.clean,
            "clique_size": len(self.clique),
            "clique_representatives": [["".join(map(str, r)) for r in o.representative.basis] for o in self.clique],
        }


def reference_orbit_statistics(
    clique_target: int = 5, seed: int | None = None, first_power: int = 1
) -> OrbitStatistics:
    """Universe, orbit partition, conflict filter and greedy clique for the record parameters."""
    q, v, d, k = RECORD_PARAMS
    max_int = k - d // 2
    part = orbit_partition(record_generator(first_power), record_universe())
    clean, dirty = filter_conflicting_orbits(part.orbits, max_int)
    clique = orbit_compatibility_clique(clean, clique_target, max_int, seed=seed) if clique_target else []
    return OrbitStatistics(part.universe.shape[0], len(part), part.lengths(), len(dirty), len(clean), clique, part, clean)


@dataclass(frozen=True)
class RepresentativeReport:
    ok: bool
    orbit_lengths: tuple[int, ...]
    clean: bool
    compatible: bool
    union_size: int
    gamma_cover_exact: bool


def verify_printed_representatives() -> RepresentativeReport:
    """Check the five printed representatives: clean orbits, pairwise compatible, exact cover of ``[Γ, 3]``."""
    q, v, d, k = RECORD_PARAMS
    max_int = k - d // 2
    g = record_generator()
    orbits = []
    for i, rep in enumerate(record_representatives()):
        members = np.stack([u.basis for u in orbit_of(g, rep)])
        orbits.append(Orbit(i, rep, members))
    lengths = tuple(o.length for o in orbits)
    clean, _ = filter_conflicting_orbits(orbits, max_int)
    compatible = all(
        orbits_compatible(a, b, max_int) for i, a in enumerate(orbits) for b in orbits[i + 1 :]
    )
    words = [u for o in orbits for u in o.subspaces()]
    union = {u.key for u in words}
    cover: dict[bytes, int] = {}
    for u in words:
        rows = [r for r, p in zip(u.basis, u.pivots) if p >= k]
        key = np.stack(rows).tobytes()
        cover[key] = cover.get(key, 0) + 1
    exact = len(cover) == q_binomial(v - k, d // 2, q) and set(cover.values()) == {1}
    in_s3 = all(gamma_intersection_dim(u, k) == d // 2 for u in words)
    ok = len(clean) == len(orbits) and compatible and len(union) == 155 and exact and in_s3
    return RepresentativeReport(ok, lengths, len(clean) == len(orbits), compatible, len(union), exact)


def record_extension() -> list[Subspace]:
    """The ``155`` subspaces in the orbits of the printed representatives."""
    g = record_generator()
    return [u for rep in record_representatives() for u in orbit_of(g, rep)]


def clique_extension(seed: int | None = None) -> list[Subspace]:
    """The subspaces in a greedy 5-clique of clean orbits under the printed generator."""
    stats = reference_orbit_statistics(5, seed=seed)
    return [u for o in stats.clique for u in o.subspaces()]


def build_record_code(source: str = "printed", seed: int | None = None):
    """Standard ``2^15`` LMRD plus 155 orbit subspaces, unverified.

    ``source="printed"`` uses the five printed representatives; ``"clique"``
    uses the greedy clique search under the printed generator.
    """
    from .cdc import Cdc, lift
    from .rankmetric import gabidulin

    q, v, d, k = RECORD_PARAMS
    f = field_new(q)
    lmrd = lift(gabidulin(f, k, v - k, d // 2))
    if source == "printed":
        ext, note = record_extension(), "orbits of the five printed representatives under G"
    elif source == "clique":
        ext, note = clique_extension(seed), f"orbits of a greedy clique under G (seed={seed})"
    else:
        raise ValueError(f"unknown source {source!r}")
    c = Cdc(f, v, k, d, lmrd, provenance=lmrd.provenance + [note])
    c.add_all(ext)
    return c


def verify_record_code(source: str = "printed", seed: int | None = None):
    """Build the record code and verify size ``2^15 + 155`` and distance 6."""
    from .cdc import verify_cdc

    q, v, d, k = RECORD_PARAMS
    c = build_record_code(source, seed)
    added = len(c) - q ** ((v - k) * (k - d // 2 + 1))
    res = verify_cdc(c)
    expected = q ** ((v - k) * (k - d // 2 + 1)) + 155
    if len(c) != expected or added != 155 or res.min_distance != d:
        raise VerificationFailed(f"record code: size {len(c)} (expected {expected}), min distance {res.min_distance}")
    return c
