"""Upper bounds for codes containing a lifted MRD code.

All arithmetic is exact: integers and :class:`fractions.Fraction`, with one
floor at the end of each bound.  Every reported value carries the rule that
produced it and the ``A_q`` sub-queries it relied on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .errors import NotApplicable, PreconditionViolated
from .gf import prime_power
from .qcomb import q_binomial, q_int


class Rule(str, Enum):
    TRIVIAL = "Trivial"
    SINGLETON = "Singleton"
    PARTIAL_SPREAD = "PartialSpread"
    SEEDED = "SeededTable"
    PROP1 = "Prop1"
    PROP2 = "Prop2"
    PROP0_CASE1 = "Prop0Case1"
    PROP0_CASE2 = "Prop0Case2"
    PROP0_CASE3 = "Prop0Case3"
    NO_LMRD_BOUND = "NoLmrdBoundKnown"


class Region(str, Enum):
    NO_LMRD_BOUND = "NoLmrdBound"
    PROP2_BEST = "Prop2Best"
    PROP1_BEST = "Prop1Best"
    TRIVIAL_BOUND = "TrivialBound"


@dataclass(frozen=True)
class Params:
    q: int
    v: int
    d: int
    k: int

    def __post_init__(self):
        prime_power(self.q)

    @classmethod
    def of(cls, p: "Params | tuple[int, int, int, int]") -> "Params":
        return p if isinstance(p, Params) else cls(*p)

    def __str__(self) -> str:
        return f"(q={self.q}, v={self.v}, d={self.d}, k={self.k})"


@dataclass(frozen=True)
class SubResolution:
    query: tuple[int, int, int, int]
    value: int
    rule: Rule


@dataclass
class BoundReport:
    """An upper bound with the rule that produced it."""

    value: int | None
    rule: Rule
    params: tuple[int, int, int, int]
    sub_resolutions: list[SubResolution] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def trace(self) -> str:
        q, v, d, k = self.params
        head = f"A_{q}({v},{d};{k})" if self.rule in _AQ_RULES else f"bound{self.params}"
        lines = [f"{head} <= {self.value if self.value is not None else '?'}  [{self.rule.value}]"]
        for key, val in self.details.items():
            lines.append(f"  {key} = {val}")
        for s in self.sub_resolutions:
            sq, sv, sd, sk = s.query
            lines.append(f"  A_{sq}({sv},{sd};{sk}) <= {s.value}  [{s.rule.value}]")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "rule": self.rule.value,
            "params": dict(zip("qvdk", self.params)),
            "sub_resolutions": [
                {"query": dict(zip("qvdk", s.query)), "value": s.value, "rule": s.rule.value} for s in self.sub_resolutions
            ],
            "notes": list(self.notes),
            "details": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.details.items()},
        }


_AQ_RULES = {Rule.TRIVIAL, Rule.SINGLETON, Rule.PARTIAL_SPREAD, Rule.SEEDED}


@dataclass(frozen=True)
class SeededEntry:
    value: int
    citation: str


@dataclass(frozen=True)
class LowerBoundRecord:
    """A row of published lower bounds for codes containing an LMRD.

    Values past the LMRD are stored as offsets from ``lmrd_size``.  These
    records are display-only and never feed upper-bound resolution.
    """

    q: int
    v: int
    d: int
    k: int
    lmrd_size: int
    lmrd_bound_extra: int
    lmrd_bound_exact: bool
    previous_extra: int
    subcode: str
    best_extra: int

    @property
    def best(self) -> int:
        return self.lmrd_size + self.best_extra


_TABLE_CITATION = "upper bound quoted in the published table of improved LMRD-containing codes"

SEEDED_UPPER: dict[tuple[int, int, int, int], SeededEntry] = {
    (2, 7, 4, 3): SeededEntry(381, _TABLE_CITATION),
    (2, 8, 4, 3): SeededEntry(1493, _TABLE_CITATION),
    (2, 9, 4, 3): SeededEntry(6205, _TABLE_CITATION),
}

LOWER_BOUND_RECORDS: tuple[LowerBoundRecord, ...] = (
    LowerBoundRecord(2, 10, 6, 5, 2**15, 155, True, 122, "[Gamma, 3]", 155),
    LowerBoundRecord(2, 11, 6, 4, 2**14, 381, False, 285, "(7,333,4;3)_2", 333),
    LowerBoundRecord(2, 11, 6, 5, 2**18, 1395, True, 852, "[Gamma, 3]", 1334),
    LowerBoundRecord(2, 12, 6, 4, 2**16, 1493, False, 1144, "(8,1326,4;3)_2", 1303),
    LowerBoundRecord(2, 12, 6, 5, 2**21, 11811, True, 7232, "[Gamma, 3]", 7925),
    LowerBoundRecord(2, 13, 6, 4, 2**18, 6205, False, 4747, "(9,5986,4;3)_2", 5753),
)


def singleton(p: Params | tuple) -> int:
    """``[v - d/2 + 1, max(k, v-k)]_q``."""
    p = Params.of(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    if d < 0 or not 0 <= k <= v or d // 2 > min(k, v - k):
        raise PreconditionViolated(f"d/2 <= min{{k, v-k}} violated for {p}")
    return q_binomial(v - d // 2 + 1, max(k, v - k), q)


def partial_spread(p: Params | tuple) -> int:
    """Exact ``A_q(v, 2k; k)`` when ``[r]_q < k`` with ``r = v mod k``."""
    p = Params.of(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    if d != 2 * k:
        raise NotApplicable(f"partial spread needs d = 2k, got {p}")
    if not 1 <= k <= v // 2:
        raise NotApplicable(f"partial spread needs 1 <= k <= v/2, got {p}")
    r = v % k
    if q_int(r, q) >= k:
        raise NotApplicable(f"[r]_q = {q_int(r, q)} is not below k = {k}")
    return (q**v - q ** (k + r)) // (q**k - 1) + 1


class AqResolver:
    """Upper bounds on ``A_q(v, d; k)`` from conventions, a seeded table, partial spreads and the Singleton bound."""

    def __init__(self, seeded: dict[tuple[int, int, int, int], SeededEntry] | None = None):
        self.seeded = dict(SEEDED_UPPER if seeded is None else seeded)

    def resolve(self, q: int, v: int, d: int, k: int) -> BoundReport:
        query = (q, v, d, k)
        notes = []
        if d % 2:
            notes.append(f"odd d={d} replaced by d={d + 1}")
            d += 1
        if k < 0 or v < k:
            return BoundReport(0, Rule.TRIVIAL, query, notes=notes + ["no k-subspaces exist"])
        if d <= 2:
            return BoundReport(q_binomial(v, k, q), Rule.TRIVIAL, query, notes=notes + ["d <= 2: whole Grassmannian"])
        ks = min(k, v - k)
        if ks != k:
            notes.append(f"dimension symmetry k={k} -> {ks}")
        if 2 * ks < d:
            return BoundReport(1, Rule.TRIVIAL, query, notes=notes + ["2k < d: at most one codeword"])
        candidates: list[tuple[int, int, Rule, str]] = []
        for key in ((q, v, d, ks), (q, v, d, v - ks)):
            if key in self.seeded:
                e = self.seeded[key]
                candidates.append((e.value, 0, Rule.SEEDED, e.citation))
                break
        try:
            candidates.append((partial_spread((q, v, d, ks)), 1, Rule.PARTIAL_SPREAD, "exact value"))
        except NotApplicable:
            pass
        candidates.append((singleton((q, v, d, ks)), 2, Rule.SINGLETON, ""))
        value, _, rule, cite = min(candidates)
        if cite and rule is Rule.SEEDED:
            notes.append(cite)
        return BoundReport(value, rule, query, notes=notes)

    def __call__(self, q: int, v: int, d: int, k: int) -> BoundReport:
        return self.resolve(q, v, d, k)


DEFAULT_RESOLVER = AqResolver()


def resolve_aq_upper(q: int, v: int, d: int, k: int, resolver: AqResolver | None = None) -> BoundReport:
    return (resolver or DEFAULT_RESOLVER).resolve(q, v, d, k)


def _sub(report: BoundReport) -> SubResolution:
    return SubResolution(report.params, report.value, report.rule)


def _require_standard(p: Params) -> None:
    if p.d % 2:
        raise PreconditionViolated(f"d must be even, got {p}")
    if not 2 <= p.d // 2 <= p.k <= p.v / 2:
        raise PreconditionViolated(f"2 <= d/2 <= k <= v/2 violated for {p}")


def lmrd_size(p: Params | tuple) -> int:
    p = Params.of(p)
    return p.q ** ((p.v - p.k) * (p.k - p.d // 2 + 1))


def prop1_bound(p: Params | tuple, resolver: AqResolver | None = None) -> BoundReport:
    """``q^{(v-k)(k-d/2+1)} + A_q(v-k, 2(d-k); d/2)``."""
    p = Params.of(p)
    _require_standard(p)
    if not p.k < p.d:
        raise PreconditionViolated(f"k < d violated for {p}")
    sub = resolve_aq_upper(p.q, p.v - p.k, 2 * (p.d - p.k), p.d // 2, resolver)
    m = lmrd_size(p)
    return BoundReport(m + sub.value, Rule.PROP1, (p.q, p.v, p.d, p.k), [_sub(sub)], details={"lmrd_size": m})


def _prop2_second(q: int, v: int, d: int, k: int, c: int, y: int) -> Fraction:
    h = d // 2
    num = q_binomial(v - k, y, q) * q_binomial(k, c, q)
    den = q_binomial(k - h, c, q) * q_binomial(h, y, q)
    return Fraction(num, den) * q ** (c * (v - k - h))


def prop2_bound(p: Params | tuple, c: int, y: int, resolver: AqResolver | None = None) -> BoundReport:
    """Three-summand bound for a choice of ``(c, y)``, floored once at the end."""
    p = Params.of(p)
    _require_standard(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    h = d // 2
    if not 1 <= y <= h:
        raise PreconditionViolated(f"1 <= y <= d/2 violated (y={y}, d/2={h})")
    if not 1 <= c <= min(k - h, h):
        raise PreconditionViolated(f"1 <= c <= min{{k-d/2, d/2}} violated (c={c}, k-d/2={k - h}, d/2={h})")
    if not k - h + 1 <= c + y:
        raise PreconditionViolated(f"k-d/2+1 <= c+y violated (c+y={c + y}, k-d/2+1={k - h + 1})")
    m = lmrd_size(p)
    second = _prop2_second(q, v, d, k, c, y)
    sub = resolve_aq_upper(q, v - k, d - 2 * (c - 1), k - c + 1, resolver)
    value = math.floor(m + second + sub.value)
    return BoundReport(
        value,
        Rule.PROP2,
        (q, v, d, k),
        [_sub(sub)],
        details={"c": c, "y": y, "lmrd_size": m, "second_summand": second},
    )


def optimal_cy(p: Params | tuple) -> tuple[int, int]:
    """``c = max(1, k-d+1)`` and ``y = max(1, k-d/2+1-c)``."""
    p = Params.of(p)
    h = p.d // 2
    if not h < p.k < 3 * h:
        raise NotApplicable(f"d/2 < k < 3d/2 violated for {p}")
    c = max(1, p.k - p.d + 1)
    return c, max(1, p.k - h + 1 - c)


def prop0_display(p: Params | tuple, resolver: AqResolver | None = None) -> tuple[int, Fraction, BoundReport]:
    """Direct evaluation of the closed form for ``d <= k < 3d/2``.

    Returns ``(floored value, middle summand, third-summand resolution)``.
    """
    p = Params.of(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    h = d // 2
    middle = Fraction(
        q_binomial(v - k, h, q) * q_binomial(k, d - 1, q) * q ** ((k - d + 1) * (v - k - h)),
        q_binomial(k - h, h - 1, q),
    )
    third = resolve_aq_upper(q, v - k, 3 * d - 2 * k, d, resolver)
    return math.floor(lmrd_size(p) + third.value + middle), middle, third


def prop0_bound(p: Params | tuple, resolver: AqResolver | None = None) -> BoundReport:
    """Dispatch to the strongest applicable bound for a code containing an LMRD."""
    p = Params.of(p)
    _require_standard(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    key = (q, v, d, k)
    if k < d and 2 * v < 3 * d:
        m = lmrd_size(p)
        return BoundReport(m + 1, Rule.PROP0_CASE2, key, details={"lmrd_size": m}, notes=["v < 3d/2: one extra codeword"])
    if k < d:
        r = prop1_bound(p, resolver)
        r.rule = Rule.PROP0_CASE1
        r.details["via"] = Rule.PROP1.value
        return r
    if 2 * k < 3 * d:
        c, y = optimal_cy(p)
        r = prop2_bound(p, c, y, resolver)
        r.rule = Rule.PROP0_CASE3
        r.details["via"] = Rule.PROP2.value
        shown, middle, third = prop0_display(p, resolver)
        r.details["display_value"] = shown
        r.details["display_agrees"] = shown == r.value
        if shown != r.value:
            r.notes.append(f"closed-form display gives {shown}, the three-summand bound at optimal (c, y) gives {r.value}")
        return r
    return BoundReport(None, Rule.NO_LMRD_BOUND, key, notes=["k >= 3d/2: no LMRD bound is known"])


def st_cap(p: Params | tuple, t: int, resolver: AqResolver | None = None) -> BoundReport:
    """Cap ``A_q(v-k, d-2(k-t); t)`` on codewords meeting Γ in dimension ``t``."""
    p = Params.of(p)
    q, v, d, k = p.q, p.v, p.d, p.k
    lo = max(d // 2, k - d // 2 + 1)
    if not lo <= t <= k:
        raise PreconditionViolated(f"max{{d/2, k-d/2+1}} <= t <= k violated (t={t}, range {lo}..{k})")
    return resolve_aq_upper(q, v - k, d - 2 * (k - t), t, resolver)


def classify_region(p: Params | tuple) -> Region:
    p = Params.of(p)
    d, k, v = p.d, p.k, p.v
    if 2 * k >= 3 * d:
        return Region.NO_LMRD_BOUND
    if d <= k:
        return Region.PROP2_BEST
    if 2 * v < 3 * d:
        return Region.TRIVIAL_BOUND
    return Region.PROP1_BEST


def standard_grid(qs=(2, 3), vmax: int = 14) -> Iterator[Params]:
    """Every ``(q, v, d, k)`` with ``d`` even and ``2 <= d/2 <= k <= v/2``."""
    for q in qs:
        for v in range(4, vmax + 1):
            for k in range(2, v // 2 + 1):
                for h in range(2, k + 1):
                    yield Params(q, v, 2 * h, k)


def lemma8_violations(p: Params) -> list[str]:
    """``[v-k, y]_q / [d/2, y]_q`` must be non-decreasing for ``1 <= y <= d/2``."""
    q, v, d, k = p.q, p.v, p.d, p.k
    h = d // 2
    f = [Fraction(q_binomial(v - k, y, q), q_binomial(h, y, q)) for y in range(1, h + 1)]
    return [f"{p}: f({y + 1}) > f({y + 2})" for y in range(len(f) - 1) if f[y] > f[y + 1]]


def lemma10_violations(p: Params) -> list[str]:
    """Second summand non-decreasing in ``c`` when ``y`` stays or drops by one."""
    q, v, d, k = p.q, p.v, p.d, p.k
    h = d // 2
    if v - k < 2:
        return []
    out = []
    for c in range(0, k - h):
        for y0 in range(0, h + 1):
            for y1 in (y0, y0 - 1):
                if y1 < 0:
                    continue
                if _prop2_second(q, v, d, k, c, y0) > _prop2_second(q, v, d, k, c + 1, y1):
                    out.append(f"{p}: f(c={c}, y={y0}) > f(c={c + 1}, y={y1})")
    return out


def lemma11_violations(p: Params, resolver: AqResolver | None = None) -> list[str]:
    """The single-extension summand never exceeds the three-summand middle term at ``c = 1, y = k - d/2``."""
    q, v, d, k = p.q, p.v, p.d, p.k
    h = d // 2
    if not (2 <= h < k < d and 3 * d <= 2 * v and k + h <= v):
        return []
    left = resolve_aq_upper(q, v - k, 2 * (d - k), h, resolver).value
    right = _prop2_second(q, v, d, k, 1, k - h)
    return [] if left <= right else [f"{p}: {left} > {right}"]


def lemma9_check(p: Params, resolver: AqResolver | None = None) -> tuple[bool, bool]:
    """``A_q(v,d;k) <= A_q(v,d-2;k-1)`` on resolved values.

    Returns ``(holds, both_exact)``; only exact pairs must hold, since an
    upper bound on the left may exceed one on the right.
    """
    left = resolve_aq_upper(p.q, p.v, p.d, p.k, resolver)
    right = resolve_aq_upper(p.q, p.v, p.d - 2, p.k - 1, resolver)
    exact = {Rule.TRIVIAL, Rule.PARTIAL_SPREAD}
    return left.value <= right.value, left.rule in exact and right.rule in exact


__all__ = [
    "AqResolver",
    "BoundReport",
    "DEFAULT_RESOLVER",
    "LOWER_BOUND_RECORDS",
    "LowerBoundRecord",
    "Params",
    "Region",
    "Rule",
    "SEEDED_UPPER",
    "SeededEntry",
    "SubResolution",
    "classify_region",
    "lemma10_violations",
    "lemma11_violations",
    "lemma8_violations",
    "lemma9_check",
    "lmrd_size",
    "optimal_cy",
    "partial_spread",
    "prop0_bound",
    "prop0_display",
    "prop1_bound",
    "prop2_bound",
    "resolve_aq_upper",
    "singleton",
    "st_cap",
    "standard_grid",
]
