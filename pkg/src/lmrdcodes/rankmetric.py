"""Rank-metric codes: Gabidulin MRD codes and block-diagonal composition.

Linear codes are held by a list of GF(q)-generator matrices.  Codeword ``i``
is the combination whose coefficient vector is the base-``q`` expansion of
``i`` with the first coefficient most significant, so indices enumerate
messages lexicographically.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import CardinalityMismatch, InvalidDistance, ShapeMismatch, TooLarge
from .gf import Field, is_irreducible, monic_polynomials, poly_mod, poly_mul, poly_trim
from .linalg import FqMatrix, rank_distance, rank_many  # noqa: F401  (rank_distance re-exported)

MATERIALIZE_CAP = 1 << 24
EXHAUSTIVE_CAP = 1 << 12


class ExtensionField:
    """GF(q^N) as polynomials over ``base`` modulo a fixed monic irreducible.

    Elements are length-``N`` tuples of base encodings, constant term first.
    """

    def __init__(self, base: Field, degree: int):
        self.base = base
        self.degree = degree
        self.modulus = default_extension_modulus(base, degree)

    def from_poly(self, coeffs: list[int]) -> tuple[int, ...]:
        coeffs = poly_mod(self.base, coeffs, self.modulus) if len(coeffs) > self.degree else coeffs
        return tuple(coeffs) + (0,) * (self.degree - len(coeffs))

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        prod = poly_mul(self.base, poly_trim(list(a)), poly_trim(list(b)))
        return self.from_poly(poly_mod(self.base, prod, self.modulus))

    def power(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        result = self.from_poly([1])
        base = self.from_poly(list(a))
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: tuple[int, ...], i: int) -> tuple[int, ...]:
        """``a^(q^i)``."""
        return self.power(a, self.base.q**i)


@lru_cache(maxsize=None)
def default_extension_modulus(base: Field, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree (ordered by packed lower coefficients)."""
    for f in monic_polynomials(base, degree):
        if degree > 1 and f[0] == 0:
            continue
        if is_irreducible(base, f):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class RankCode:
    """A set of ``m x n`` matrices over GF(q) with a claimed minimum rank distance."""

    def __init__(
        self,
        field: Field,
        m: int,
        n: int,
        *,
        generators: np.ndarray | None = None,
        codewords: np.ndarray | None = None,
        min_distance: int | None = None,
        mrd: bool = False,
        label: str = "",
    ):
        if (generators is None) == (codewords is None):
            raise ValueError("give exactly one of generators or codewords")
        self.field, self.m, self.n = field, m, n
        self.generators = None if generators is None else np.asarray(generators, dtype=np.uint8).reshape(-1, m, n)
        self.codewords = None if codewords is None else np.asarray(codewords, dtype=np.uint8).reshape(-1, m, n)
        self.min_distance = min_distance
        self.mrd = mrd
        self.label = label

    @property
    def linear(self) -> bool:
        return self.generators is not None

    @property
    def dimension(self) -> int:
        if self.generators is None:
            raise TypeError("explicit code has no generator dimension")
        return self.generators.shape[0]

    def __len__(self) -> int:
        if self.generators is not None:
            return self.field.q ** self.generators.shape[0]
        return self.codewords.shape[0]

    @property
    def cardinality(self) -> int:
        return len(self)

    def message(self, index: int) -> list[int]:
        q, s = self.field.q, self.dimension
        if not 0 <= index < q**s:
            raise IndexError(index)
        digits = []
        for _ in range(s):
            digits.append(index % q)
            index //= q
        return digits[::-1]

    def codeword_array(self, index: int) -> np.ndarray:
        if self.codewords is not None:
            return self.codewords[index]
        f = self.field
        out = np.zeros((self.m, self.n), dtype=np.uint8)
        for coeff, g in zip(self.message(index), self.generators):
            if coeff:
                out = f.add_table[out, f.mul_table[coeff, g]]
        return out

    def codeword(self, index: int) -> FqMatrix:
        return FqMatrix(self.field, self.codeword_array(index))

    def __iter__(self) -> Iterator[FqMatrix]:
        for m in self.materialize():
            yield FqMatrix(self.field, m)

    def materialize(self, cap: int = MATERIALIZE_CAP) -> np.ndarray:
        """All codewords as an ``(N, m, n)`` array in index order."""
        if self.codewords is not None:
            return self.codewords
        if len(self) > cap:
            raise TooLarge(f"{len(self)} codewords exceed the materialisation cap {cap}")
        f = self.field
        q = f.q
        out = np.zeros((1, self.m, self.n), dtype=np.uint8)
        for g in self.generators:
            if q == 2:
                out = np.stack([out, out ^ g], axis=1)
            else:
                mult = f.mul_table[np.arange(q)[:, None, None], g[None]]
                out = f.add_table[out[:, None], mult[None]]
            out = out.reshape(-1, self.m, self.n)
        return out

    def __repr__(self) -> str:
        d = self.min_distance
        return f"RankCode([{self.m}x{self.n}, {len(self)}, {d}]_{self.field.q}{', ' + self.label if self.label else ''})"


def mrd_cardinality(q: int, m: int, n: int, d: int) -> int:
    return q ** (max(m, n) * (min(m, n) - d + 1))


def gabidulin(field: Field, m: int, n: int, delta: int) -> RankCode:
    """Linear MRD code of ``m x n`` matrices with minimum rank distance ``delta``.

    Codewords evaluate ``f(x) = sum_{i < min(m,n)-delta+1} a_i x^(q^i)`` over
    GF(q^max(m,n)) at the first ``min(m,n)`` polynomial-basis elements; each
    value is written in the polynomial basis.
    """
    short, big = min(m, n), max(m, n)
    if not 1 <= delta <= short:
        raise InvalidDistance(f"need 1 <= delta <= {short}, got {delta}")
    ext = ExtensionField(field, big)
    k = short - delta + 1
    points = [ext.from_poly([0] * j + [1]) for j in range(short)]
    frob = [[ext.frobenius(g, i) for g in points] for i in range(k)]
    gens = []
    for i in range(k):
        for l in range(big):
            basis_el = ext.from_poly([0] * l + [1])
            rows = np.array([ext.mul(basis_el, frob[i][j]) for j in range(short)], dtype=np.uint8)
            gens.append(rows if m <= n else rows.T)
    gens = np.stack(gens).reshape(-1, m, n)
    return RankCode(
        field,
        m,
        n,
        generators=gens,
        min_distance=delta,
        mrd=True,
        label=f"Gabidulin over GF({field.q}^{big})",
    )


def verify_min_rank_distance(code: RankCode, mode: str = "linear", cap: int = MATERIALIZE_CAP) -> float:
    """Exact minimum rank distance; ``math.inf`` when the code has one codeword.

    ``linear`` takes the minimum rank over nonzero codewords, valid because a
    difference of codewords is a codeword.  ``exhaustive`` checks every pair.
    """
    if len(code) <= 1:
        return math.inf
    if mode == "linear":
        if not code.linear:
            raise ValueError("linear mode needs a generator-backed code")
        words = code.materialize(cap)
        return int(rank_many(code.field, words[1:]).min())
    if mode == "exhaustive":
        if len(code) > min(cap, EXHAUSTIVE_CAP):
            raise TooLarge(f"{len(code)} codewords is beyond the exhaustive pair cap")
        words = code.materialize(cap)
        sub = code.field.sub_table
        best = math.inf
        for i in range(len(words) - 1):
            diffs = sub[words[i + 1 :], words[i][None]]
            best = min(best, int(rank_many(code.field, diffs).min()))
        return best
    raise ValueError(f"unknown mode {mode!r}")


def block_compose(a: RankCode, b: RankCode) -> RankCode:
    """Codewords ``[[A_i, 0], [0, B_i]]`` pairing the ``i``-th codewords of each code."""
    if a.field != b.field:
        raise ValueError("codes over different fields")
    if len(a) != len(b):
        raise CardinalityMismatch(f"{len(a)} vs {len(b)} codewords")
    m, n = a.m + b.m, a.n + b.n
    dist = None if a.min_distance is None or b.min_distance is None else a.min_distance + b.min_distance

    def place(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape[:-2] + (m, n), dtype=np.uint8)
        out[..., : a.m, : a.n] = x
        out[..., a.m :, a.n :] = y
        return out

    label = f"block({a.label or 'A'}, {b.label or 'B'})"
    if a.linear and b.linear and a.dimension == b.dimension:
        return RankCode(a.field, m, n, generators=place(a.generators, b.generators), min_distance=dist, label=label)
    return RankCode(a.field, m, n, codewords=place(a.materialize(), b.materialize()), min_distance=dist, label=label)


def zero_code(field: Field, m: int, n: int) -> RankCode:
    return RankCode(field, m, n, codewords=np.zeros((1, m, n), dtype=np.uint8), min_distance=None, label="zero")


def place_in_frame(code: RankCode, rows: int, cols: int, row_off: int, col_off: int) -> RankCode:
    """Embed every codeword at ``(row_off, col_off)`` inside a zero ``rows x cols`` frame."""
    if row_off + code.m > rows or col_off + code.n > cols:
        raise ShapeMismatch(f"{code.m}x{code.n} block does not fit at ({row_off},{col_off}) in {rows}x{cols}")

    def pad(x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape[:-2] + (rows, cols), dtype=np.uint8)
        out[..., row_off : row_off + code.m, col_off : col_off + code.n] = x
        return out

    if code.linear:
        return RankCode(code.field, rows, cols, generators=pad(code.generators), min_distance=code.min_distance, label=code.label)
    return RankCode(code.field, rows, cols, codewords=pad(code.codewords), min_distance=code.min_distance, label=code.label)
