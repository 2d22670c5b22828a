"""
Linkage, the union/intersection rewrite, and truncation families.

Recombination replaces a linked pair by its union and intersection until no
linked pair is left.  Each step strictly raises the sum of squared relative
lengths, so it terminates; the normal form depends only on the support.

>>> recombine(ms((0, 1), (1, 2)))
{rho[0, 2], rho[1, 1]}
>>> recombine(ms((0, 1), (2, 3)))
{rho[0, 3]}
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .segments import (
    DomainError, Multisegment, Segment, Side, truncate, ms,  # noqa: F401  (ms used in doctests)
)

__all__ = [
    "linked", "union_intersection", "is_generic", "linked_pairs", "rewrite",
    "recombine", "recombine_trace", "RewriteStep", "all_normal_forms",
    "square_weight", "TruncationPattern", "apply_pattern", "truncations",
    "LemmaCheck", "verify_truncation_lemma",
]


def linked(d1: Segment, d2: Segment) -> bool:
    """Neither contains the other and the union is again a segment."""
    if d1.line != d2.line or (d2.a - d1.a).denominator != 1:
        return False
    if d1.a > d2.a:
        d1, d2 = d2, d1
    # now a1 <= a2; linked iff a1 < a2, b1 < b2, and no gap between them
    return d1.a < d2.a and d1.b < d2.b and d2.a <= d1.b + 1


def union_intersection(d1: Segment, d2: Segment) -> tuple[Segment, Segment | None]:
    if not linked(d1, d2):
        raise DomainError(f"{d1} and {d2} are not linked")
    lo, hi = min(d1.a, d2.a), max(d1.b, d2.b)
    ia, ib = max(d1.a, d2.a), min(d1.b, d2.b)
    inter = Segment(d1.line, ia, ib) if ia <= ib else None
    return Segment(d1.line, lo, hi), inter


def linked_pairs(m: Multisegment) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, of linked members, in canonical order."""
    segs = m.segments
    return [(i, j) for i, j in combinations(range(len(segs)), 2) if linked(segs[i], segs[j])]


def is_generic(m: Multisegment) -> bool:
    segs = m.segments
    return not any(linked(x, y) for x, y in combinations(segs, 2))


def rewrite(m: Multisegment, i: int, j: int) -> Multisegment:
    """Replace members i and j (which must be linked) by union and intersection."""
    segs = list(m.segments)
    u, n = union_intersection(segs[i], segs[j])
    rest = [s for k, s in enumerate(segs) if k not in (i, j)]
    return Multisegment(tuple(rest) + (u, n))


def square_weight(m: Multisegment) -> int:
    return sum(s.rel ** 2 for s in m.segments)


@dataclass(frozen=True)
class RewriteStep:
    pair: tuple[Segment, Segment]
    union: Segment
    intersection: Segment | None
    result: Multisegment


def recombine_trace(m: Multisegment) -> tuple[Multisegment, list[RewriteStep]]:
    """Rewrite the smallest linked pair first until generic; return the trace."""
    steps = []
    while True:
        pairs = linked_pairs(m)
        if not pairs:
            return m, steps
        i, j = pairs[0]
        x, y = m.segments[i], m.segments[j]
        u, n = union_intersection(x, y)
        nxt = rewrite(m, i, j)
        assert square_weight(nxt) > square_weight(m)
        steps.append(RewriteStep((x, y), u, n, nxt))
        m = nxt


def recombine(m: Multisegment) -> Multisegment:
    return recombine_trace(m)[0]


def all_normal_forms(m: Multisegment) -> set[Multisegment]:
    """Normal forms reachable by every possible rewrite order (memoised DFS)."""
    seen: dict[Multisegment, frozenset] = {}

    def go(x: Multisegment) -> frozenset:
        if x in seen:
            return seen[x]
        pairs = linked_pairs(x)
        if not pairs:
            out = frozenset([x])
        else:
            out = frozenset().union(*(go(rewrite(x, i, j)) for i, j in pairs))
        seen[x] = out
        return out

    return set(go(m))


@dataclass(frozen=True)
class TruncationPattern:
    """Relative truncation counts aligned with ``m.segments``."""

    counts: tuple[int, ...]
    side: Side
    amount: int  # absolute: sum of count * degree(line)


def apply_pattern(m: Multisegment, pattern: TruncationPattern) -> Multisegment:
    if len(pattern.counts) != len(m.segments):
        raise DomainError("pattern does not match the multisegment")
    return Multisegment(tuple(truncate(s, k, pattern.side)
                              for s, k in zip(m.segments, pattern.counts)))


def _patterns(segs: tuple[Segment, ...], amount: int):
    if not segs:
        if amount == 0:
            yield ()
        return
    head, tail = segs[0], segs[1:]
    r = head.line.degree
    for k in range(min(head.rel, amount // r) + 1):
        for rest in _patterns(tail, amount - k * r):
            yield (k,) + rest


def truncations(m: Multisegment, i: int, side: Side) -> dict[Multisegment, TruncationPattern]:
    """Every truncation of total absolute amount ``i``, one pattern per result."""
    if i < 0:
        raise DomainError("truncation amount must be non-negative")
    out: dict[Multisegment, TruncationPattern] = {}
    for counts in _patterns(m.segments, i):
        p = TruncationPattern(counts, side, i)
        out.setdefault(apply_pattern(m, p), p)
    return out


@dataclass(frozen=True)
class LemmaCheck:
    holds: bool
    i: int
    checked: int
    witness: Multisegment | None = None      # the offending right-truncation
    recombined: Multisegment | None = None   # its normal form
    depth: int | None = None                 # truncation depth re-derived from degrees


def verify_truncation_lemma(m: Multisegment, i: int) -> LemmaCheck:
    """Check that recombining any right-truncation of generic ``m`` is again one."""
    if not is_generic(m):
        raise DomainError(f"{m} is not generic")
    family = truncations(m, i, Side.RIGHT)
    by_depth: dict[int, dict] = {i: family}
    for trunc in family:
        normal = recombine(trunc)
        j = m.degree - normal.degree
        if j not in by_depth:
            by_depth[j] = truncations(m, j, Side.RIGHT)
        if normal not in by_depth[j]:
            return LemmaCheck(False, i, len(family), trunc, normal, j)
    return LemmaCheck(True, i, len(family))
