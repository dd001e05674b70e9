"""Finite fields GF(q) for small prime powers q.

Elements are encoded as integers in ``[0, q)``: the coefficient vector of the
polynomial representative, packed base ``p`` with the constant term as the
least significant digit.  All arithmetic goes through precomputed tables, so
a ``Field`` is immutable once built and can be shared freely.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotAPrimePower

# Conway polynomials, low degree coefficient first.
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (2, 2, 1),  # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}

MAX_Q = 256


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise NotAPrimePower otherwise."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotAPrimePower(f"{q!r} is not a prime power")
    q = int(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    rest = q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NotAPrimePower(f"{q} has at least two distinct prime factors")
    return p, e


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


# --- polynomials over a field, as lists of encoded coefficients (low first) ---


def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_sub(field: "Field", a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = field.sub_scalar(x, y)
    return poly_trim(out)


def poly_mul(field: "Field", a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = field.add_scalar(out[i + j], field.mul_scalar(x, y))
    return poly_trim(out)


def poly_divmod(field: "Field", a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = poly_trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = poly_trim(list(a))
    quot = [0] * max(len(rem) - len(b) + 1, 0)
    lead_inv = field.inv_scalar(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        coef = field.mul_scalar(rem[-1], lead_inv)
        quot[shift] = coef
        for i, y in enumerate(b):
            rem[shift + i] = field.sub_scalar(rem[shift + i], field.mul_scalar(coef, y))
        poly_trim(rem)
    return poly_trim(quot), rem


def poly_mod(field: "Field", a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_divmod(field, a, b)[1]


def poly_gcd(field: "Field", a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_mod(field, a, b)
    if a:
        inv = field.inv_scalar(a[-1])
        a = [field.mul_scalar(c, inv) for c in a]
    return a


def poly_powmod(field: "Field", base: Sequence[int], exp: int, mod: Sequence[int]) -> list[int]:
    result = [1]
    base = poly_mod(field, base, mod)
    while exp:
        if exp & 1:
            result = poly_mod(field, poly_mul(field, result, base), mod)
        base = poly_mod(field, poly_mul(field, base, base), mod)
        exp >>= 1
    return result


def is_irreducible(field: "Field", f: Sequence[int]) -> bool:
    """Rabin's test for a monic polynomial ``f`` over ``field``."""
    f = poly_trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    q = field.q
    x = [0, 1]
    if poly_sub(field, poly_powmod(field, x, q**n, f), x):
        return False
    primes = [r for r in range(2, n + 1) if n % r == 0 and _is_prime(r)]
    for r in primes:
        h = poly_sub(field, poly_powmod(field, x, q ** (n // r), f), x)
        if len(poly_gcd(field, f, h)) != 1:
            return False
    return True


def monic_polynomials(field: "Field", degree: int):
    """Monic polynomials of a given degree, ordered by packed lower coefficients."""
    q = field.q
    for code in range(q**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % q)
            code //= q
        yield coeffs + [1]


class Field:
    """The finite field GF(q) with fixed tables.

    Use :func:`field_new` rather than constructing directly; it caches one
    instance per ``q``.
    """

    def __init__(self, q: int, modulus: Sequence[int] | None = None):
        p, e = prime_power(q)
        if q > MAX_Q:
            raise NotAPrimePower(f"q={q} exceeds supported maximum {MAX_Q}")
        self.q, self.p, self.e = q, p, e
        if e == 1:
            self.modulus: tuple[int, ...] = (0, 1)
            self._build_prime_tables()
        else:
            if modulus is None:
                modulus = DEFAULT_MODULI.get(q) or _smallest_primitive(p, e)
            self.modulus = tuple(int(c) for c in modulus)
            self._build_extension_tables()
        for table in (self.add_table, self.mul_table, self.neg_table, self.inv_table, self.sub_table):
            table.flags.writeable = False

    # -- table construction --

    def _build_prime_tables(self) -> None:
        q = self.q
        r = np.arange(q)
        self.add_table = ((r[:, None] + r[None, :]) % q).astype(np.uint8)
        self.mul_table = ((r[:, None] * r[None, :]) % q).astype(np.uint8)
        self.neg_table = ((-r) % q).astype(np.uint8)
        self.sub_table = ((r[:, None] - r[None, :]) % q).astype(np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = pow(a, q - 2, q)
        self.inv_table = inv
        self.generator = _prime_generator(q)

    def _build_extension_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        prime = field_new(p)
        if len(self.modulus) != e + 1 or self.modulus[-1] != 1:
            raise NotAPrimePower(f"modulus {self.modulus} is not monic of degree {e}")
        if not is_irreducible(prime, self.modulus):
            raise NotAPrimePower(f"modulus {self.modulus} is reducible over GF({p})")
        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(e)
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (summed @ weights).astype(np.uint8)
        self.neg_table = (((-digits) % p) @ weights).astype(np.uint8)
        diff = (digits[:, None, :] - digits[None, :, :]) % p
        self.sub_table = (diff @ weights).astype(np.uint8)

        # find a primitive element by walking powers
        self.generator = None
        for g in range(2, q):
            exp = [1]
            seen = {1}
            cur = 1
            ok = True
            for _ in range(q - 2):
                cur = _poly_mul_encoded(prime, cur, g, self.modulus, p, e)
                if cur in seen:
                    ok = False
                    break
                seen.add(cur)
                exp.append(cur)
            if ok:
                self.generator = g
                break
        exp_t = np.array(exp, dtype=np.int64)
        log_t = np.zeros(q, dtype=np.int64)
        log_t[exp_t] = np.arange(q - 1)
        r = np.arange(q)
        la = log_t[r][:, None] + log_t[r][None, :]
        mul = exp_t[la % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = mul.astype(np.uint8)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp_t[(-log_t[1:]) % (q - 1)]
        self.inv_table = inv.astype(np.uint8)

    # -- scalar helpers on encodings --

    def add_scalar(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub_scalar(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul_scalar(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv_scalar(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[a])

    # -- element API --

    def __call__(self, rep: int) -> "FieldElement":
        return FieldElement(self, rep)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, a) for a in range(self.q)]

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, sub, mul, inv) tables, the form the batch kernels expect."""
        return self.add_table, self.sub_table, self.mul_table, self.inv_table

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        cur, n = a, 1
        while cur != 1:
            cur = int(self.mul_table[cur, a])
            n += 1
        return n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self) -> int:
        return hash((self.q, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


def _prime_generator(p: int) -> int:
    if p == 2:
        return 1
    factors = [r for r in range(2, p) if (p - 1) % r == 0 and _is_prime(r)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("unreachable")


def _poly_mul_encoded(prime: Field, a: int, b: int, modulus: Sequence[int], p: int, e: int) -> int:
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = poly_mod(prime, poly_mul(prime, poly_trim(da), poly_trim(db)), modulus)
    return sum(c * p**i for i, c in enumerate(prod))


def _smallest_primitive(p: int, e: int) -> tuple[int, ...]:
    prime = field_new(p)
    q = p**e
    for f in monic_polynomials(prime, e):
        if f[0] == 0 or not is_irreducible(prime, f):
            continue
        # x primitive: x^((q-1)/r) != 1 for every prime r | q-1
        rs = [r for r in range(2, q) if (q - 1) % r == 0 and _is_prime(r)]
        if all(poly_powmod(prime, [0, 1], (q - 1) // r, f) != [1] for r in rs):
            return tuple(f)
    raise AssertionError("no primitive polynomial found")


@lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    """The field with ``q`` elements and the package's fixed default modulus."""
    return Field(q)


class FieldElement:
    __slots__ = ("field", "rep")

    def __init__(self, field: Field, rep: int):
        rep = int(rep)
        if not 0 <= rep < field.q:
            raise ValueError(f"encoding {rep} out of range for {field}")
        self.field = field
        self.rep = rep

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.add_table[self.rep, other.rep])

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.sub_table[self.rep, other.rep])

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul_table[self.rep, other.rep])

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg_table[self.rep])

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_scalar(self.rep))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inv()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldElement) and self.field == other.field and self.rep == other.rep

    def __hash__(self) -> int:
        return hash((self.field.q, self.rep))

    def __int__(self) -> int:
        return self.rep

    def __repr__(self) -> str:
        return f"{self.field}({self.rep})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()
