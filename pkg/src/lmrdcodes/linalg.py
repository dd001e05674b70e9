"""Matrices and subspaces over GF(q).

A :class:`Subspace` always stores its canonical basis: the reduced row echelon
form of any spanning set, with zero rows dropped.  Two subspaces are equal iff
their canonical bases coincide, which makes hashing and deduplication cheap.

Over GF(2) with at most 64 columns, rows are additionally packed into
``uint64`` words (column 0 is the most significant used bit) and the hot
operations run on the packed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import AmbientMismatch, DimensionTooLarge, FieldMismatch, NotInvertible, ShapeMismatch
from .gf import Field

PACKED_MAX_COLS = 64


# --- raw array helpers ---


def pack_rows(arr: np.ndarray) -> np.ndarray:
    """Pack 0/1 entries along the last axis into ``uint64`` (column 0 = MSB)."""
    arr = np.asarray(arr)
    v = arr.shape[-1]
    if v > PACKED_MAX_COLS:
        raise ValueError(f"cannot pack {v} columns")
    weights = np.left_shift(np.uint64(1), np.arange(v - 1, -1, -1, dtype=np.uint64))
    return (arr.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)


def unpack_rows(packed: np.ndarray, v: int) -> np.ndarray:
    packed = np.asarray(packed, dtype=np.uint64)
    shifts = np.arange(v - 1, -1, -1, dtype=np.uint64)
    return ((packed[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(q) on encoded ``uint8`` arrays (batched on the left)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape[-1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if field.e == 1:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % field.q).astype(np.uint8)
    if field.p == 2:
        return np.bitwise_xor.reduce(field.mul_table[a[..., None], b], axis=-2).astype(np.uint8)
    out = np.zeros(a.shape[:-1] + (b.shape[1],), dtype=np.uint8)
    for t in range(a.shape[-1]):
        out = field.add_table[out, field.mul_table[a[..., :, t, None], b[t]]]
    return out


def rref_array(field: Field, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """RREF of a single encoded matrix and its pivot columns."""
    m = np.asarray(m, dtype=np.uint8)
    r, c = m.shape
    if r == 0 or c == 0:
        return m.copy(), []
    if field.q == 2 and c <= PACKED_MAX_COLS:
        red = kernels.gf2_rref_rows(pack_rows(m)[None, :], c)[0]
        out = unpack_rows(red, c)
    else:
        out = kernels.rref_batch(m[None], *field.tables())[0]
    pivots = []
    for row in out:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            break
        pivots.append(int(nz[0]))
    return out, pivots


def rank_array(field: Field, m: np.ndarray) -> int:
    m = np.asarray(m, dtype=np.uint8)
    if m.size == 0:
        return 0
    if field.q == 2 and m.shape[1] <= PACKED_MAX_COLS:
        return int(kernels.gf2_rank_rows(pack_rows(m)[None, :], m.shape[1])[0])
    return int(kernels.rank_batch(m[None], *field.tables())[0])


def rank_many(field: Field, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices, shape ``(n, rows, cols)``."""
    mats = np.asarray(mats, dtype=np.uint8)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if mats.shape[1] == 0 or mats.shape[2] == 0:
        return np.zeros(mats.shape[0], dtype=np.int64)
    if field.q == 2 and mats.shape[2] <= PACKED_MAX_COLS:
        return kernels.gf2_rank_rows(pack_rows(mats), mats.shape[2])
    return kernels.rank_batch(mats, *field.tables())


def rref_many(field: Field, mats: np.ndarray) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.uint8)
    if mats.shape[0] == 0 or mats.shape[1] == 0:
        return mats.copy()
    if field.q == 2 and mats.shape[2] <= PACKED_MAX_COLS:
        return unpack_rows(kernels.gf2_rref_rows(pack_rows(mats), mats.shape[2]), mats.shape[2])
    return kernels.rref_batch(mats, *field.tables())


# --- matrices ---


class FqMatrix:
    """An immutable matrix over GF(q) holding encoded entries."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        arr = np.array(data, dtype=np.uint8, copy=True)
        if arr.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got shape {arr.shape}")
        if arr.size and int(arr.max()) >= field.q:
            raise ValueError(f"entry out of range for {field}")
        arr.flags.writeable = False
        self.field = field
        self.data = arr

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "FqMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, field: Field, n: int) -> "FqMatrix":
        return cls(field, np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _check(self, other: "FqMatrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        return FqMatrix(self.field, self.field.add_table[self.data, other.data])

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        return FqMatrix(self.field, self.field.sub_table[self.data, other.data])

    def __neg__(self) -> "FqMatrix":
        return FqMatrix(self.field, self.field.neg_table[self.data])

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        return FqMatrix(self.field, matmul(self.field, self.data, other.data))

    def scale(self, a: int) -> "FqMatrix":
        return FqMatrix(self.field, self.field.mul_table[a, self.data])

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix(self.field, self.data.T)

    def rank(self) -> int:
        return rank_array(self.field, self.data)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"FqMatrix({self.field}, [{body}])"


def rref(m: FqMatrix) -> tuple[FqMatrix, list[int]]:
    out, pivots = rref_array(m.field, m.data)
    return FqMatrix(m.field, out), pivots


def rank_distance(a: FqMatrix, b: FqMatrix) -> int:
    """``rk(a - b)``."""
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    return (a - b).rank()


# --- subspaces ---


@dataclass(frozen=True)
class PivotVector:
    bits: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def hamming(self, other: "PivotVector") -> int:
        if self.length != other.length:
            raise AmbientMismatch("pivot vectors of different length")
        return sum(a != b for a, b in zip(self.bits, other.bits))

    def positions(self) -> list[int]:
        return [i for i, b in enumerate(self.bits) if b]

    @classmethod
    def from_string(cls, s: str) -> "PivotVector":
        return cls(tuple(int(ch) for ch in s.strip()))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


class Subspace:
    """A subspace of ``F_q^v`` held by its canonical (RREF) basis."""

    def __init__(self, field: Field, v: int, basis: np.ndarray):
        basis = np.asarray(basis, dtype=np.uint8).reshape(-1, v)
        basis.flags.writeable = False
        self.field = field
        self.v = v
        self.basis = basis

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def key(self) -> bytes:
        return self.basis.tobytes()

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(row)[0]) for row in self.basis)

    @cached_property
    def packed(self) -> np.ndarray:
        if self.field.q != 2:
            raise TypeError("packed rows exist only over GF(2)")
        out = pack_rows(self.basis)
        out.flags.writeable = False
        return out

    def matrix(self) -> FqMatrix:
        return FqMatrix(self.field, self.basis)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.basis.ravel())

    def vectors(self) -> np.ndarray:
        """All ``q**dim`` vectors of the subspace (brute force, tiny cases only)."""
        q, k = self.field.q, self.dim
        coeffs = np.array(np.meshgrid(*[np.arange(q)] * k, indexing="ij"), dtype=np.uint8)
        coeffs = coeffs.reshape(k, -1).T if k else np.zeros((1, 0), dtype=np.uint8)
        if k == 0:
            return np.zeros((1, self.v), dtype=np.uint8)
        return matmul(self.field, coeffs, self.basis)

    def contains(self, other: "Subspace") -> bool:
        return intersection_dim(self, other) == other.dim

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.v == other.v
            and self.dim == other.dim
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.v, self.dim, self.key))

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.sort_key()) < (other.dim, other.sort_key())

    def __repr__(self) -> str:
        rows = ",".join("".join(str(x) for x in row) for row in self.basis)
        return f"Subspace(q={self.field.q}, v={self.v}, [{rows}])"


def subspace_from_rows(field: Field, v: int, rows) -> Subspace:
    """Row space of ``rows`` (any spanning set, possibly dependent)."""
    arr = rows.data if isinstance(rows, FqMatrix) else np.asarray(rows, dtype=np.uint8)
    arr = arr.reshape(-1, v)
    if arr.shape[1] != v:
        raise AmbientMismatch(f"rows have {arr.shape[1]} columns, expected {v}")
    red, pivots = rref_array(field, arr)
    return Subspace(field, v, red[: len(pivots)])


def zero_subspace(field: Field, v: int) -> Subspace:
    return Subspace(field, v, np.zeros((0, v), dtype=np.uint8))


def whole_space(field: Field, v: int) -> Subspace:
    return Subspace(field, v, np.eye(v, dtype=np.uint8))


def _same_ambient(u: Subspace, w: Subspace) -> None:
    if u.field != w.field:
        raise FieldMismatch(f"{u.field} vs {w.field}")
    if u.v != w.v:
        raise AmbientMismatch(f"ambient dimensions {u.v} and {w.v}")


def sum_dim(u: Subspace, w: Subspace) -> int:
    _same_ambient(u, w)
    if u.dim == 0 or w.dim == 0:
        return u.dim + w.dim
    return rank_array(u.field, np.vstack([u.basis, w.basis]))


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    _same_ambient(u, w)
    return subspace_from_rows(u.field, u.v, np.vstack([u.basis, w.basis]))


def intersection_dim(u: Subspace, w: Subspace) -> int:
    return u.dim + w.dim - sum_dim(u, w)


def subspace_distance(u: Subspace, w: Subspace) -> int:
    """``dim(U+W) - dim(U ∩ W)``."""
    s = sum_dim(u, w)
    return s - (u.dim + w.dim - s)


def orthogonal_complement(u: Subspace) -> Subspace:
    """Complement with respect to the standard dot product."""
    field, v = u.field, u.v
    pivots = u.pivots
    free = [j for j in range(v) if j not in set(pivots)]
    out = np.zeros((len(free), v), dtype=np.uint8)
    for r, f in enumerate(free):
        out[r, f] = 1
        for i, p in enumerate(pivots):
            out[r, p] = field.neg_table[u.basis[i, f]]
    return subspace_from_rows(field, v, out)


def intersection(u: Subspace, w: Subspace) -> Subspace:
    _same_ambient(u, w)
    return orthogonal_complement(subspace_sum(orthogonal_complement(u), orthogonal_complement(w)))


def pivot_vector(u: Subspace) -> PivotVector:
    bits = [0] * u.v
    for p in u.pivots:
        bits[p] = 1
    return PivotVector(tuple(bits))


def gamma(field: Field, v: int, k: int) -> Subspace:
    """The ``(v-k)``-dimensional subspace of vectors whose first ``k`` entries vanish."""
    if not 0 <= k <= v:
        raise DimensionTooLarge(f"need 0 <= k <= v, got k={k}, v={v}")
    basis = np.zeros((v - k, v), dtype=np.uint8)
    basis[:, k:] = np.eye(v - k, dtype=np.uint8)
    return Subspace(field, v, basis)


def avoids_gamma(u: Subspace, g: Subspace) -> bool:
    """True iff ``u`` meets ``g`` only in the zero vector."""
    return intersection_dim(u, g) == 0


def gamma_intersection_dim(u: Subspace, k: int) -> int:
    """``dim(U ∩ Γ)`` for Γ of parameter ``k``: ``dim U`` minus the rank of the first ``k`` columns."""
    return u.dim - rank_array(u.field, u.basis[:, :k])


def select_subspace(u: Subspace, m: int) -> Subspace:
    """Span of the first ``m`` canonical basis rows of ``u``."""
    if not 0 <= m <= u.dim:
        raise DimensionTooLarge(f"cannot select a {m}-subspace of a {u.dim}-space")
    return Subspace(u.field, u.v, u.basis[:m])


def complement_through(u: Subspace) -> Subspace:
    """Greedy complement of ``u`` spanned by unit vectors, lowest index first."""
    field, v = u.field, u.v
    rows = [r for r in u.basis]
    added = []
    current = u.dim
    for j in range(v):
        if current == v:
            break
        e = np.zeros(v, dtype=np.uint8)
        e[j] = 1
        cand = np.vstack(rows + [e]) if rows else e[None, :]
        r = rank_array(field, cand)
        if r > current:
            rows.append(e)
            added.append(e)
            current = r
    if not added:
        return zero_subspace(field, v)
    return subspace_from_rows(field, v, np.vstack(added))


def apply_matrix(u: Subspace, g: FqMatrix) -> Subspace:
    """Image ``{x g : x in U}`` under right multiplication by an invertible ``g``."""
    if g.shape != (u.v, u.v):
        raise ShapeMismatch(f"generator shape {g.shape} for ambient {u.v}")
    if u.dim == 0:
        return u
    return subspace_from_rows(u.field, u.v, matmul(u.field, u.basis, g.data))


def require_invertible(g: FqMatrix) -> None:
    if not g.is_invertible():
        raise NotInvertible("generator matrix is singular")


def rref_matrices(field: Field, v: int, k: int) -> Iterator[np.ndarray]:
    """All ``k x v`` full-rank RREF matrices in row-major lexicographic order.

    Entries are chosen depth-first in row-major position order, smallest value
    first, pruning branches that can no longer complete to a full-rank RREF.
    Yields a fresh array each time.
    """
    if k == 0:
        yield np.zeros((0, v), dtype=np.uint8)
        return
    if k > v or k < 0:
        return
    q = field.q
    mat = np.zeros((k, v), dtype=np.uint8)
    piv = [-1] * k
    blocked = [0] * v  # earlier rows holding a nonzero entry in this column
    is_piv = [False] * v

    def available(lo: int) -> int:
        return sum(1 for c in range(lo + 1, v) if not blocked[c] and not is_piv[c])

    def dfs(pos: int):
        if pos == k * v:
            yield mat.copy()
            return
        i, j = divmod(pos, v)
        if piv[i] < 0:
            prev = piv[i - 1] if i else -1
            if j <= prev:
                yield from dfs(pos + 1)
                return
            if available(j) >= k - i:
                yield from dfs(pos + 1)
            if not blocked[j] and not is_piv[j] and available(j) >= k - i - 1:
                mat[i, j] = 1
                piv[i] = j
                is_piv[j] = True
                yield from dfs(pos + 1)
                is_piv[j] = False
                piv[i] = -1
                mat[i, j] = 0
            return
        yield from dfs(pos + 1)
        blocked[j] += 1
        if available(piv[i]) >= k - i - 1:
            for a in range(1, q):
                mat[i, j] = a
                yield from dfs(pos + 1)
            mat[i, j] = 0
        blocked[j] -= 1

    yield from dfs(0)


def enumerate_grassmannian(field: Field, v: int, k: int) -> Iterator[Subspace]:
    """Every ``k``-subspace of ``F_q^v`` exactly once, lexicographic in canonical form."""
    for m in rref_matrices(field, v, k):
        yield Subspace(field, v, m)


def grassmannian_array(field: Field, v: int, k: int) -> np.ndarray:
    """Canonical bases of all ``k``-subspaces, stacked as ``(n, k, v)`` in enumeration order."""
    mats = list(rref_matrices(field, v, k))
    if not mats:
        return np.zeros((0, k, v), dtype=np.uint8)
    return np.stack(mats)


def subspaces_from_array(field: Field, v: int, arr: Iterable[np.ndarray]) -> list[Subspace]:
    return [Subspace(field, v, m) for m in arr]


def stack_bases(subspaces: Sequence[Subspace]) -> np.ndarray:
    """Stack equal-dimension canonical bases into ``(n, k, v)``."""
    if not subspaces:
        raise ValueError("no subspaces to stack")
    return np.stack([s.basis for s in subspaces])
