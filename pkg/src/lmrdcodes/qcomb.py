"""Exact q-analog combinatorics in Python integers and Fractions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NegativeArgument


def q_int(x: int, q: int) -> int:
    """``[x]_q = (q^x - 1)/(q - 1)``."""
    if x < 0:
        raise NegativeArgument(f"[x]_q needs x >= 0, got {x}")
    return (q**x - 1) // (q - 1)


def q_factorial(x: int, q: int) -> int:
    if x < 0:
        raise NegativeArgument(f"[x]_q! needs x >= 0, got {x}")
    out = 1
    for i in range(1, x + 1):
        out *= q_int(i, q)
    return out


@lru_cache(maxsize=65536)
def q_binomial(v: int, k: int, q: int) -> int:
    """Number of ``k``-subspaces of ``F_q^v``; zero outside ``0 <= k <= v``."""
    if k < 0 or v < k:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q**v - q**i
        den *= q**k - q**i
    return num // den


def count_avoiding(w: int, u: int, c: int, q: int) -> int:
    """Number of ``c``-subspaces of a ``w``-space meeting a fixed ``u``-subspace trivially."""
    if c < 0 or c > w - u:
        return 0
    return q ** (u * c) * q_binomial(w - u, c, q)


@dataclass(frozen=True)
class MuApprox:
    """Rational enclosure ``lower <= mu(q) <= upper`` of the infinite product."""

    q: int
    terms: int
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __float__(self) -> float:
        return float((self.lower + self.upper) / 2)


def mu(q: int, precision_terms: int = 64) -> MuApprox:
    """Enclose ``prod_{i>=1} (1 - q^-i)^-1`` using ``precision_terms`` factors.

    The tail ``prod_{i>n}`` is at most ``1 / (1 - sum_{i>n} q^-i)``, i.e.
    ``1 / (1 - q^-n/(q-1))``.
    """
    if q < 2 or precision_terms < 1:
        raise ValueError("need q >= 2 and precision_terms >= 1")
    partial = Fraction(1)
    for i in range(1, precision_terms + 1):
        qi = q**i
        partial *= Fraction(qi, qi - 1)
    tail_sum = Fraction(1, q**precision_terms * (q - 1))
    return MuApprox(q, precision_terms, partial, partial / (1 - tail_sum))
