"""Constant dimension codes: lifting, Echelon-Ferrers assembly and diagnostics.

A :class:`Cdc` is a set of ``k``-subspaces of ``F_q^v`` keyed by canonical
basis bytes.  Construction never marks a code as verified; only
:func:`verify_cdc` does that, after computing the exact minimum distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    AmbientMismatch,
    DimensionTooLarge,
    InvalidDistance,
    ProfileViolation,
    ShapeViolation,
    TooLarge,
    WeightMismatch,
)
from .gf import Field, field_new
from .linalg import (
    PivotVector,
    Subspace,
    grassmannian_array,
    orthogonal_complement,
    pack_rows,
    pivot_vector,
    rank_array,
    rank_many,
    subspace_distance,
)
from .qcomb import count_avoiding
from .rankmetric import MATERIALIZE_CAP, RankCode, block_compose, gabidulin, place_in_frame, zero_code


class Cdc:
    """A ``(v, #C, d; k)_q`` constant dimension code."""

    def __init__(
        self,
        field: Field,
        v: int,
        k: int,
        claimed_d: int,
        codewords: Iterable[Subspace] = (),
        provenance: str | Sequence[str] = (),
    ):
        if not 0 <= k <= v:
            raise DimensionTooLarge(f"need 0 <= k <= v, got k={k}, v={v}")
        self.field = field
        self.v = v
        self.k = k
        self.claimed_d = claimed_d
        self._words: dict[bytes, Subspace] = {}
        self._sorted: list[Subspace] | None = None
        self.provenance: list[str] = [provenance] if isinstance(provenance, str) else list(provenance)
        self.verified = False
        self.add_all(codewords)

    def add(self, u: Subspace) -> bool:
        """Insert ``u``; returns False when it was already present."""
        if u.field != self.field or u.v != self.v:
            raise AmbientMismatch(f"codeword in ambient {u.v} over GF({u.field.q}), code is {self.v} over GF({self.field.q})")
        if u.dim != self.k:
            raise DimensionTooLarge(f"codeword of dimension {u.dim}, code dimension is {self.k}")
        if u.key in self._words:
            return False
        self._words[u.key] = u
        self._sorted = None
        self.verified = False
        return True

    def add_all(self, words: Iterable[Subspace]) -> int:
        return sum(self.add(u) for u in words)

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, u: object) -> bool:
        return isinstance(u, Subspace) and self._words.get(u.key) == u

    def codewords(self) -> list[Subspace]:
        """Codewords in sorted canonical order."""
        if self._sorted is None:
            self._sorted = sorted(self._words.values(), key=Subspace.sort_key)
        return self._sorted

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.codewords())

    def stack(self) -> np.ndarray:
        """Canonical bases as a ``(#C, k, v)`` array in sorted order."""
        words = self.codewords()
        if not words:
            return np.zeros((0, self.k, self.v), dtype=np.uint8)
        return np.stack([u.basis for u in words])

    def __repr__(self) -> str:
        tag = "verified" if self.verified else "unverified"
        return f"Cdc(({self.v}, {len(self)}, {self.claimed_d}; {self.k})_{self.field.q}, {tag})"


@dataclass(frozen=True)
class VerifyResult:
    """Exact minimum subspace distance and a pair attaining it."""

    min_distance: float
    witness: tuple[Subspace, Subspace] | None
    claimed_d: int
    method: str

    @property
    def ok(self) -> bool:
        return self.min_distance >= self.claimed_d

    def __iter__(self):
        # allows ``dist, witness = verify_cdc(c)``
        return iter((self.min_distance, self.witness))


@dataclass(frozen=True)
class StProfile:
    """Sizes of ``S_t`` for ``t = d/2 .. k`` together with the size of ``M``."""

    counts: dict[int, int]
    lmrd_size: int
    total: int

    @property
    def rest(self) -> int:
        return sum(self.counts.values())


def lift(mrd: RankCode, cap: int = MATERIALIZE_CAP) -> Cdc:
    """Row spaces of ``[I_k | A]`` for every codeword ``A``."""
    k, n = mrd.m, mrd.n
    v = k + n
    words = mrd.materialize(cap)
    eye = np.broadcast_to(np.eye(k, dtype=np.uint8), (words.shape[0], k, k))
    bases = np.concatenate([eye, words], axis=2)
    d = 2 * mrd.min_distance if mrd.min_distance is not None else 0
    c = Cdc(mrd.field, v, k, d, provenance=f"lift of {mrd!r}")
    # [I | A] is already reduced, so the bases are canonical
    c.add_all(Subspace(mrd.field, v, b) for b in bases)
    return c


def standard_lmrd(field: Field, v: int, d: int, k: int) -> Cdc:
    """Lift of the canonical Gabidulin ``[k x (v-k), d/2]`` code."""
    if d % 2 or not 2 <= d <= 2 * min(k, v - k):
        raise InvalidDistance(f"d={d} is not an even subspace distance for k={k}, v={v}")
    return lift(gabidulin(field, k, v - k, d // 2))


def _cross_min(field: Field, a: np.ndarray, b: np.ndarray, same: bool) -> tuple[int, int, int]:
    """Minimum rank of ``[a_i ; b_j]`` over pairs, with the indices attaining it."""
    if field.q == 2:
        v = a.shape[2]
        pa = pack_rows(a.reshape(-1, v)).reshape(a.shape[0], a.shape[1])
        pb = pa if same else pack_rows(b.reshape(-1, v)).reshape(b.shape[0], b.shape[1])
        return kernels.gf2_cross_min_rank(pa, pb, v, same)
    add, sub, mul, inv = field.tables()
    return kernels.cross_min_rank(a, b if not same else a, add, sub, mul, inv, same)


def _free_parts(bases: np.ndarray, pivots: Sequence[int]) -> np.ndarray:
    v = bases.shape[2]
    free = [j for j in range(v) if j not in set(pivots)]
    return bases[:, :, free]


def _linear_cell_min(field: Field, free: np.ndarray) -> tuple[int, int, int] | None:
    """``(min nonzero rank, zero index, argmin index)`` if the free parts form a linear space."""
    n = free.shape[0]
    flat = free.reshape(n, -1)
    r = rank_array(field, flat)
    if field.q**r != n:
        return None
    zero = np.flatnonzero(~flat.any(axis=1))
    if zero.size != 1:
        return None
    ranks = rank_many(field, free)
    ranks[zero[0]] = 1 << 30
    j = int(ranks.argmin())
    return int(ranks[j]), int(zero[0]), j


def verify_cdc(c: Cdc, structural: bool = True, mark: bool = True) -> VerifyResult:
    """Exact minimum subspace distance of ``c``.

    The structural mode groups codewords by pivot vector.  Inside a cell the
    distance is twice the rank of the difference of the free parts, so a cell
    whose free parts form a linear space only needs the minimum nonzero rank.
    All remaining pairs go through the batched pair kernel.  With
    ``structural=False`` every pair is scanned directly.
    """
    words = c.codewords()
    n = len(words)
    if n <= 1:
        res = VerifyResult(math.inf, None, c.claimed_d, "trivial")
        if mark:
            c.verified = True
        return res
    bases = c.stack()
    k = c.k
    best = (1 << 30, None)

    def consider(rank_sum: int, i: int, j: int) -> None:
        nonlocal best
        if rank_sum < best[0]:
            best = (rank_sum, (i, j))

    if not structural:
        r, i, j = _cross_min(c.field, bases, bases, True)
        consider(r, i, j)
        method = "pairwise"
    else:
        cells: dict[tuple[int, ...], list[int]] = {}
        for idx, u in enumerate(words):
            cells.setdefault(u.pivots, []).append(idx)
        linear: list[np.ndarray] = []
        rest: list[int] = []
        for piv, members in cells.items():
            members_arr = np.array(members)
            res = _linear_cell_min(c.field, _free_parts(bases[members_arr], piv)) if len(members) > 2 else None
            if res is None:
                rest.extend(members)
                continue
            r, z, j = res
            consider(k + r, int(members_arr[z]), int(members_arr[j]))
            linear.append(members_arr)
        rest_arr = np.array(sorted(rest), dtype=np.int64)
        if rest_arr.size > 1:
            r, i, j = _cross_min(c.field, bases[rest_arr], bases[rest_arr], True)
            consider(r, int(rest_arr[i]), int(rest_arr[j]))
        for a_pos, a in enumerate(linear):
            if rest_arr.size:
                r, i, j = _cross_min(c.field, bases[a], bases[rest_arr], False)
                consider(r, int(a[i]), int(rest_arr[j]))
            for b in linear[a_pos + 1 :]:
                r, i, j = _cross_min(c.field, bases[a], bases[b], False)
                consider(r, int(a[i]), int(b[j]))
        method = "structural"

    rank_sum, (i, j) = best
    dist = 2 * (rank_sum - k)
    res = VerifyResult(dist, (words[i], words[j]), c.claimed_d, method)
    if mark:
        c.verified = res.ok
    return res


def ferrers_mask(pv: PivotVector) -> np.ndarray:
    """Boolean ``k x (v-k)`` mask of the entries left free by the pivot pattern."""
    piv = pv.positions()
    non = [j for j in range(pv.length) if pv.bits[j] == 0]
    return np.array([[col > p for col in non] for p in piv], dtype=bool).reshape(len(piv), len(non))


def _rref_from_free(pv: PivotVector, free: np.ndarray) -> np.ndarray:
    piv = pv.positions()
    non = [j for j in range(pv.length) if pv.bits[j] == 0]
    n, k = free.shape[0], len(piv)
    out = np.zeros((n, k, pv.length), dtype=np.uint8)
    out[:, np.arange(k), piv] = 1
    out[:, :, non] = free
    return out


def echelon_ferrers(
    skeleton: Sequence[PivotVector],
    subcodes: Sequence[RankCode],
    field: Field | None = None,
    d: int | None = None,
    cap: int = MATERIALIZE_CAP,
) -> Cdc:
    """Union of the cells ``{RREF with pivots c_i, free part A : A in subcode_i}``.

    The claimed distance is the smaller of the minimum pairwise Hamming
    distance of the skeleton and the within-cell distances ``2 * delta_i``;
    when ``d`` is given the skeleton must reach it.
    """
    if len(skeleton) != len(subcodes):
        raise ValueError(f"{len(skeleton)} pivot vectors but {len(subcodes)} subcodes")
    if not skeleton:
        raise ValueError("empty skeleton")
    field = field or subcodes[0].field
    v = skeleton[0].length
    k = skeleton[0].weight
    for pv in skeleton:
        if pv.length != v:
            raise AmbientMismatch(f"pivot vector {pv} has length {pv.length}, expected {v}")
        if pv.weight != k:
            raise WeightMismatch(f"pivot vector {pv} has weight {pv.weight}, expected {k}")
    if len(set(skeleton)) != len(skeleton):
        raise ValueError("repeated pivot vector in skeleton")
    ham = min((a.hamming(b) for i, a in enumerate(skeleton) for b in skeleton[i + 1 :]), default=math.inf)
    if d is not None and ham < d:
        raise InvalidDistance(f"skeleton Hamming distance {ham} < {d}")
    claimed = ham
    for pv, code in zip(skeleton, subcodes):
        if code.field != field:
            raise ValueError("subcodes over different fields")
        if (code.m, code.n) != (k, v - k):
            raise ShapeViolation(f"subcode shape {code.m}x{code.n}, Ferrers frame is {k}x{v - k}")
        mask = ferrers_mask(pv)
        probe = code.generators if code.linear else code.codewords
        if np.any(probe[:, ~mask]):
            raise ShapeViolation(f"subcode writes into a forced-zero entry for pivot vector {pv}")
        if len(code) > 1:
            claimed = min(claimed, 2 * (code.min_distance or 0))
    claimed = int(claimed) if claimed != math.inf else 2 * min(k, v - k)
    total = sum(len(code) for code in subcodes)
    if total > cap:
        raise TooLarge(f"{total} codewords exceed the materialisation cap {cap}")
    c = Cdc(field, v, k, claimed, provenance=f"Echelon-Ferrers over {len(skeleton)} pivot vectors")
    for pv, code in zip(skeleton, subcodes):
        bases = _rref_from_free(pv, code.materialize(cap))
        c.add_all(Subspace(field, v, b) for b in bases)
        c.provenance.append(f"  {pv}: {len(code)} codewords from {code!r}")
    return c


def _blocks(sizes: Sequence[int], bits: Sequence[int]) -> PivotVector:
    out: list[int] = []
    for size, b in zip(sizes, bits):
        out.extend([b] * size)
    return PivotVector(tuple(out))


def _check_size(q: int, count: int, cap: int) -> None:
    if count > cap:
        raise TooLarge(f"family has {count} codewords, beyond the materialisation cap {cap}")


def family_6l(q: int, l: int, cap: int = MATERIALIZE_CAP) -> Cdc:
    """``(6l, q^{3l(l+1)} + q^{2l} + q^l + 1, 4l; 3l)_q`` code containing the standard LMRD."""
    if l < 1:
        raise ValueError("l must be at least 1")
    _check_size(q, q ** (3 * l * (l + 1)) + q ** (2 * l) + q**l + 1, cap)
    f = field_new(q)
    sizes = [l] * 6
    k = 3 * l
    skeleton = [
        _blocks(sizes, (1, 1, 1, 0, 0, 0)),
        _blocks(sizes, (1, 0, 0, 1, 1, 0)),
        _blocks(sizes, (0, 1, 0, 1, 0, 1)),
        _blocks(sizes, (0, 0, 1, 0, 1, 1)),
    ]
    lmrd = gabidulin(f, k, k, 2 * l)
    # free columns are blocks 2, 3, 6: l x 2l on top, 2l x l below
    second = block_compose(gabidulin(f, l, 2 * l, l), gabidulin(f, 2 * l, l, l))
    # free columns are blocks 1, 3, 5: two l x l codes right of the first block
    third = place_in_frame(block_compose(gabidulin(f, l, l, l), gabidulin(f, l, l, l)), k, k, 0, l)
    c = echelon_ferrers(skeleton, [lmrd, second, third, zero_code(f, k, k)], f, d=4 * l, cap=cap)
    c.provenance.insert(0, f"family_6l(q={q}, l={l})")
    return c


def family_6_3l(q: int, l: int, cap: int = MATERIALIZE_CAP) -> Cdc:
    """``(6+3l, q^{6+4l} + q^{2+l} + 1, 4+2l; 3+l)_q`` code containing the standard LMRD."""
    if l < 1:
        raise ValueError("l must be at least 1")
    _check_size(q, q ** (6 + 4 * l) + q ** (2 + l) + 1, cap)
    f = field_new(q)
    sizes = [1, 1 + l, 1, 1 + l, 1, 1 + l]
    k, n = 3 + l, 3 + 2 * l
    skeleton = [
        _blocks(sizes, (1, 1, 1, 0, 0, 0)),
        _blocks(sizes, (1, 0, 0, 1, 1, 0)),
        _blocks(sizes, (0, 0, 1, 0, 1, 1)),
    ]
    lmrd = gabidulin(f, k, n, 2 + l)
    second = block_compose(gabidulin(f, 1, 2 + l, 1), gabidulin(f, 2 + l, 1 + l, 1 + l))
    c = echelon_ferrers(skeleton, [lmrd, second, zero_code(f, k, n)], f, d=4 + 2 * l, cap=cap)
    c.provenance.insert(0, f"family_6_3l(q={q}, l={l})")
    return c


def gamma_dims(c: Cdc) -> np.ndarray:
    """``dim(U ∩ Γ)`` for every codeword in sorted order."""
    bases = c.stack()
    if bases.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return c.k - rank_many(c.field, np.ascontiguousarray(bases[:, :, : c.k]))


def st_profile(c: Cdc, d: int | None = None) -> StProfile:
    """Histogram of ``dim(U ∩ Γ)`` over codewords outside the LMRD cell.

    Codewords meeting Γ trivially are exactly those with pivot vector
    ``(1_k 0_{v-k})``; those form ``M``.
    """
    d = c.claimed_d if d is None else d
    dims = gamma_dims(c)
    m_size = int((dims == 0).sum())
    low = d // 2
    bad = dims[(dims > 0) & (dims < low)]
    if bad.size:
        raise ProfileViolation(
            f"{bad.size} codewords outside the LMRD cell meet Γ in dimension below {low} (smallest {int(bad.min())})"
        )
    counts = {t: int((dims == t).sum()) for t in range(low, c.k + 1)}
    return StProfile(counts, m_size, len(c))


def gamma_part(u: Subspace, k: int) -> Subspace:
    """``U ∩ Γ``: the canonical rows whose pivot lies outside the first ``k`` columns."""
    rows = [i for i, p in enumerate(u.pivots) if p >= k]
    return Subspace(u.field, u.v, u.basis[rows])


def lemma7_check(c: Cdc) -> tuple[bool, int]:
    """Check ``d(A∩Γ, B∩Γ) >= d(A, B) - 2k + a + b`` over all pairs outside ``M``.

    Returns ``(holds, pairs checked)``.
    """
    words = [u for u, t in zip(c.codewords(), gamma_dims(c)) if t > 0]
    n, k, v = len(words), c.k, c.v
    if n < 2:
        return True, 0
    full = np.stack([u.basis for u in words])
    part = np.zeros_like(full)
    dims = np.zeros(n, dtype=np.int64)
    for i, u in enumerate(words):
        g = gamma_part(u, k)
        part[i, : g.dim] = g.basis
        dims[i] = g.dim
    pairs = 0
    for i in range(n - 1):
        rest = slice(i + 1, n)
        m = n - i - 1
        full_rank = rank_many(c.field, np.concatenate([np.broadcast_to(full[i], (m, k, v)), full[rest]], axis=1))
        part_rank = rank_many(c.field, np.concatenate([np.broadcast_to(part[i], (m, k, v)), part[rest]], axis=1))
        d_full = 2 * (full_rank - k)
        d_part = 2 * part_rank - dims[i] - dims[rest]
        if np.any(d_part < d_full - 2 * k + dims[i] + dims[rest]):
            return False, pairs + m
        pairs += m
    return True, pairs


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of the exact-cover check of Γ-avoiding subspaces by an LMRD."""

    ok: bool
    dimension: int
    avoiding: int
    expected: int
    per_codeword: tuple[int, ...] = dc_field(repr=False)
    multiplicities: dict[int, int] = dc_field(default_factory=dict)


def lemma4_coverage(m: Cdc, d: int | None = None) -> CoverageReport:
    """Count, for every ``(k-d/2+1)``-subspace avoiding Γ, the codewords containing it."""
    d = m.claimed_d if d is None else d
    k, v, f = m.k, m.v, m.field
    s = k - d // 2 + 1
    cand = grassmannian_array(f, v, s)
    avoid = cand[rank_many(f, np.ascontiguousarray(cand[:, :, :k])) == s] if cand.size else cand
    bases = m.stack()
    n = bases.shape[0]
    per_word = np.zeros(n, dtype=np.int64)
    mult: dict[int, int] = {}
    for x in avoid:
        stacked = np.concatenate([bases, np.broadcast_to(x, (n, s, v))], axis=1)
        inside = rank_many(f, stacked) == k
        per_word += inside
        cnt = int(inside.sum())
        mult[cnt] = mult.get(cnt, 0) + 1
    expected = count_avoiding(v, v - k, s, f.q)
    ok = len(avoid) == expected and set(mult) == {1}
    return CoverageReport(ok, s, len(avoid), expected, tuple(int(x) for x in per_word), mult)


def lemma4_coverage_check(m: Cdc, d: int | None = None) -> bool:
    return lemma4_coverage(m, d).ok


def dual_code(c: Cdc) -> Cdc:
    """Orthogonal complements of every codeword, a ``(v, #C, d; v-k)`` code."""
    out = Cdc(c.field, c.v, c.v - c.k, c.claimed_d, provenance=c.provenance + ["orthogonal complement"])
    out.add_all(orthogonal_complement(u) for u in c)
    return out


def pairwise_min_distance(words: Sequence[Subspace]) -> float:
    """Reference pair loop on :class:`Subspace` objects (slow, used as an oracle)."""
    best: float = math.inf
    for i, a in enumerate(words):
        for b in words[i + 1 :]:
            best = min(best, subspace_distance(a, b))
    return best


__all__ = [
    "Cdc",
    "CoverageReport",
    "StProfile",
    "VerifyResult",
    "dual_code",
    "echelon_ferrers",
    "family_6_3l",
    "family_6l",
    "ferrers_mask",
    "gamma_dims",
    "gamma_part",
    "lemma4_coverage",
    "lemma4_coverage_check",
    "lemma7_check",
    "lift",
    "pairwise_min_distance",
    "pivot_vector",
    "st_profile",
    "standard_lmrd",
    "verify_cdc",
]
