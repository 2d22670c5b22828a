"""
Restriction from GL(n+1) to GL(n) at the level of cuspidal supports.

Three checks live here:

* the Bernstein-Zelevinsky filtration of a restricted product, layer by layer;
* the quotient obstruction for St(Delta): a degenerate <m2> can be a quotient
  only if both the right and the left compatibility tests find a match;
* the recursive Ext-vanishing certificate for a pair of generic Steinberg
  data.  Each STEP peels off a shortest segment Delta of m1 meeting m2's
  lines, checks that the spectra of nu^(+-1/2) (St(Delta) x derivative of the
  rest) avoid those of the opposite derivative of St(m2) for every i, and
  recurses on {rho'} + {-Delta} + rest with rho' on a fresh line.

Spectra are compared as cuspidal-support multisets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, count
from typing import Iterator

from .derivatives import derive_product, derive_st_segment, whittaker_dim
from .recombination import is_generic, linked, linked_pairs
from .segments import (
    CuspidalLine, CuspidalPoint, DomainError, Flavor, FormalSum, InducedRep,
    Multisegment, Segment, Side, support, truncate, truncate_left,
)

__all__ = [
    "HALF", "Support", "FiltrationLayer", "bz_filtration",
    "generic_subquotients_of_derivative", "QuotientCertificate",
    "quotient_obstruction", "m_count", "choose_delta", "SpectrumWitness",
    "VariantCheck", "bullet_check", "LinkedPair", "extract_linked_pair",
    "Certificate", "ext_vanishing_certificate", "ep_pairing", "feasible_orders",
    "lhs_spectra", "rhs_spectra", "successor", "step_chain", "point_key", "PointKey",
]

HALF = Fraction(1, 2)

Support = tuple[CuspidalPoint, ...]


def _twist_for(side: Side) -> Fraction:
    return HALF if side is Side.RIGHT else -HALF


@dataclass(frozen=True)
class FiltrationLayer:
    index: int
    side: Side
    payload: FormalSum
    bottom: bool  # the Gelfand-Graev layer

    @property
    def degree(self) -> int:
        degs = {t.degree for t in self.payload}
        return degs.pop() if degs else -1


def bz_filtration(rep: InducedRep, side: Side) -> list[FiltrationLayer]:
    """Layers i = 0..n of rep restricted to GL(n): nu^(+-1/2) * derive(rep, i+1, side)."""
    if rep.degree < 1:
        raise DomainError("restriction needs degree >= 1")
    n = rep.degree - 1
    t = _twist_for(side)
    return [FiltrationLayer(i, side, derive_product(rep, i + 1, side).twisted(t), i == n)
            for i in range(n + 1)]


def generic_subquotients_of_derivative(m2: Multisegment, i: int, side: Side) -> set[Multisegment]:
    """Supports (as singleton multisegments) of generic subquotients of derive(<m2>, i, side)."""
    segs = m2.segments
    if any(s.rel >= 3 for s in segs):
        return set()
    forced = [s for s in segs if s.rel == 2]
    optional = [s for s in segs if s.rel == 1]
    base_amount = sum(s.line.degree for s in forced)
    base = tuple(truncate(s, 1, side) for s in forced)
    out = set()
    for k in range(len(optional) + 1):
        for chosen in combinations(range(len(optional)), k):
            if base_amount + sum(optional[c].line.degree for c in chosen) != i:
                continue
            kept = tuple(s for c, s in enumerate(optional) if c not in chosen)
            out.add(Multisegment(base + kept))
    return out


@dataclass(frozen=True)
class QuotientCertificate:
    delta: Segment
    m2: Multisegment
    degenerate: bool
    right_matches: tuple[tuple[int, Multisegment], ...]
    left_matches: tuple[tuple[int, Multisegment], ...]

    @property
    def obstructed(self) -> bool:
        return not (self.right_matches and self.left_matches)

    @property
    def verdict(self) -> str:
        return "OBSTRUCTED" if self.obstructed else "COMPATIBLE"


def _compatible(delta: Segment, m2: Multisegment, side: Side) -> list[tuple[int, Multisegment]]:
    # side is the derivative side on St(Delta); m2 is derived on the other side
    t = _twist_for(side)
    found = []
    for i in range(m2.degree + 1):
        for term in derive_st_segment(delta, i + 1, side):
            target = support(term.twisted(t))
            for g in sorted(generic_subquotients_of_derivative(m2, i, side.opposite)):
                if support(g) == target:
                    found.append((i, g))
    return found


def quotient_obstruction(delta: Segment, m2: Multisegment, *, require_degenerate: bool = False) -> QuotientCertificate:
    """Can <m2> be a quotient of St(delta) restricted to GL(n)?  OBSTRUCTED means no."""
    n = delta.length - 1
    if m2.degree != n:
        raise DomainError(f"m2 has degree {m2.degree}, expected {n}")
    degenerate = any(s.rel > 1 for s in m2.segments)
    if require_degenerate and not degenerate:
        raise DomainError("m2 is generic but a degenerate quotient was required")
    return QuotientCertificate(
        delta, m2, degenerate,
        tuple(_compatible(delta, m2, Side.RIGHT)),
        tuple(_compatible(delta, m2, Side.LEFT)),
    )


def m_count(m1: Multisegment, m2: Multisegment) -> int:
    """Support points of m1 on lines that occur in m2."""
    lines = m2.lines()
    return sum(s.rel for s in m1.segments if s.line in lines)


def choose_delta(m1: Multisegment, m2: Multisegment) -> Segment | None:
    """Shortest segment of m1 on a line of m2, ties by canonical order."""
    lines = m2.lines()
    candidates = [s for s in m1.segments if s.line in lines]
    return min(candidates, key=lambda s: (s.length, s), default=None)


# Inside the spectra comparison a point is the key (line id, numerator,
# denominator); any consistent order on keys gives a canonical multiset.
PointKey = tuple[str, int, int]


def point_key(p: CuspidalPoint) -> PointKey:
    return (p.line.id, p.exponent.numerator, p.exponent.denominator)


def _shift_key(k: PointKey, t: Fraction) -> PointKey:
    e = Fraction(k[1], k[2]) + t
    return (k[0], e.numerator, e.denominator)


@lru_cache(maxsize=1 << 16)
def _st_spectra(m: Multisegment, i: int, side: Side, shift: Fraction = Fraction(0)) -> frozenset:
    """Supports of the terms of derive(St(m), i, side), shifted, as sorted key tuples."""
    out = set()
    for t in derive_product(InducedRep(Flavor.ST, m), i, side):
        keys = (point_key(p) for p in support(t))
        if shift:
            keys = (_shift_key(k, shift) for k in keys)
        out.add(tuple(sorted(keys)))
    return frozenset(out)


@dataclass(frozen=True)
class SpectrumWitness:
    """Spectra at one i.  ``lhs`` is untwisted; the twist is applied on output."""

    i: int
    twist: Fraction
    lhs_keys: frozenset  # St(Delta) x derivative of the rest
    rhs_keys: frozenset  # opposite derivative of St(m2), shifted by -twist
    collision_key: tuple | None
    lines: tuple[CuspidalLine, ...] = field(default=(), compare=False, repr=False)

    def _points(self, keys: tuple, t: Fraction) -> Support:
        by_id = {ln.id: ln for ln in self.lines}
        pts = (CuspidalPoint(by_id.get(k[0]) or CuspidalLine(k[0]), Fraction(k[1], k[2]) + t)
               for k in keys)
        return tuple(sorted(pts))

    @property
    def lhs(self) -> tuple[Support, ...]:
        """nu^twist-shifted supports on the St(Delta) side."""
        return tuple(sorted(self._points(k, self.twist) for k in self.lhs_keys))

    @property
    def rhs(self) -> tuple[Support, ...]:
        return tuple(sorted(self._points(k, self.twist) for k in self.rhs_keys))

    @property
    def collision(self) -> Support | None:
        if self.collision_key is None:
            return None
        return self._points(self.collision_key, self.twist)


@dataclass(frozen=True)
class VariantCheck:
    variant: Side
    delta: Segment
    witnesses: tuple[SpectrumWitness, ...]

    @property
    def passed(self) -> bool:
        return all(w.collision_key is None for w in self.witnesses)

    @property
    def first_collision(self) -> SpectrumWitness | None:
        return next((w for w in self.witnesses if w.collision_key is not None), None)


def bullet_check(delta: Segment, rest: Multisegment, m2: Multisegment, variant: Side) -> VariantCheck:
    """Spectra disjointness for every feasible i of one variant.

    RIGHT: nu^(1/2) St(Delta) x rest^(i+1)  against  (i)-left derivative of St(m2).
    LEFT:  nu^(-1/2) St(Delta) x (i+1)-left derivative of rest  against  m2^(i).
    """
    t = _twist_for(variant)
    lines = tuple(sorted(rest.lines() | m2.lines() | {delta.line}))
    witnesses = []
    for i in feasible_orders(rest, m2):
        lhs = lhs_spectra(delta, rest, variant, i)
        rhs = rhs_spectra(m2, i, variant)
        common = lhs & rhs
        witnesses.append(SpectrumWitness(i, t, lhs, rhs, min(common) if common else None, lines))
    return VariantCheck(variant, delta, tuple(witnesses))


def feasible_orders(rest: Multisegment, m2: Multisegment) -> range:
    """i with i+1 <= deg(rest) and i <= deg(m2)."""
    return range(min(rest.degree, m2.degree + 1))


@lru_cache(maxsize=1 << 16)
def lhs_spectra(delta: Segment, rest: Multisegment, variant: Side, i: int) -> frozenset:
    """Untwisted key-supports of St(Delta) x derive(St(rest), i+1, variant)."""
    dkeys = tuple(point_key(p) for p in support(delta))
    return frozenset(tuple(sorted(dkeys + s)) for s in _st_spectra(rest, i + 1, variant))


def rhs_spectra(m2: Multisegment, i: int, variant: Side) -> frozenset:
    """Key-supports of the opposite i-th derivative of St(m2), untwisted by the variant's twist."""
    return _st_spectra(m2, i, variant.opposite, -_twist_for(variant))


@dataclass(frozen=True)
class LinkedPair:
    first: Segment
    second: Segment
    route: str  # "spectral": the pattern forced by both collisions; "direct": plain search


def extract_linked_pair(delta: Segment, m2: Multisegment) -> LinkedPair | None:
    """Exhibit the linked pair in m2 implied by collisions of both variants.

    Right collisions force a member starting at a+1/2 of relative length >= l,
    left collisions one ending at b-1/2 of relative length >= l; these two are
    linked.  When m2 is not generic the pattern may be absent and a linked
    pair is searched for directly.
    """
    l = delta.rel
    starts = [s for s in m2 if s.line == delta.line and s.a == delta.a + HALF and s.rel >= l]
    ends = [s for s in m2 if s.line == delta.line and s.b == delta.b - HALF and s.rel >= l]
    for x in starts:
        for y in ends:
            if linked(x, y):
                return LinkedPair(y, x, "spectral")
    pairs = linked_pairs(m2)
    if pairs:
        i, j = pairs[0]
        return LinkedPair(m2.segments[i], m2.segments[j], "direct")
    return None


@dataclass(frozen=True)
class Certificate:
    kind: str  # BASE, STEP or FAIL
    m1: Multisegment
    m2: Multisegment
    m_count: int
    delta: Segment | None = None
    variant: Side | None = None
    checks: tuple[VariantCheck, ...] = ()
    fresh_line: CuspidalLine | None = None
    children: tuple["Certificate", ...] = field(default=())
    linked_pair: LinkedPair | None = None

    def nodes(self) -> Iterator["Certificate"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def has_fail(self) -> bool:
        return any(n.kind == "FAIL" for n in self.nodes())

    def fail_node(self) -> "Certificate | None":
        return next((n for n in self.nodes() if n.kind == "FAIL"), None)

    def depth(self) -> int:
        """Edges on the longest root-to-leaf path."""
        return 1 + max(c.depth() for c in self.children) if self.children else 0

    @property
    def passing(self) -> VariantCheck | None:
        return next((c for c in self.checks if c.passed), None)


class _FreshLines:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.counter = count(1)

    def __call__(self, like: CuspidalLine) -> CuspidalLine:
        while True:
            name = f"{like.id}'_{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return CuspidalLine(name, like.degree)


def ext_vanishing_certificate(m1: Multisegment, m2: Multisegment, *, strict: bool = True,
                              first_delta: Segment | None = None) -> Certificate:
    """Certificate that Ext^j(St(m1), St(m2)) vanishes for j > 0.

    ``strict=False`` lets a non-generic m2 through so that forced failures
    can be inspected.  ``first_delta`` overrides the choice of Delta at the
    root only; it must lie on a line of m2 and keep the next datum generic.
    """
    if not is_generic(m1):
        raise DomainError(f"m1 = {m1} is not generic")
    if strict and not is_generic(m2):
        raise DomainError(f"m2 = {m2} is not generic")
    if m1.degree != m2.degree + 1:
        raise DomainError(f"degrees {m1.degree} and {m2.degree} are not n+1 and n")
    taken = {s.line.id for s in m1} | {s.line.id for s in m2}
    if first_delta is not None:
        if first_delta.line not in m2.lines():
            raise DomainError(f"{first_delta} does not lie on a line of m2")
        rest = m1.remove(first_delta)
        probe = rest.add(Segment(CuspidalLine("\0probe", first_delta.line.degree), Fraction(0), Fraction(0)),
                         truncate_left(first_delta, 1))
        if not is_generic(probe):
            raise DomainError(f"choosing {first_delta} makes the next datum non-generic")
    return _certify(m1, m2, _FreshLines(taken), first_delta)


def _certify(m1: Multisegment, m2: Multisegment, fresh: _FreshLines,
             forced: Segment | None = None) -> Certificate:
    k = m_count(m1, m2)
    if k == 0:
        return Certificate("BASE", m1, m2, 0)
    delta = forced if forced is not None else choose_delta(m1, m2)
    rest = m1.remove(delta)
    checks = [bullet_check(delta, rest, m2, Side.RIGHT)]
    if not checks[0].passed:
        checks.append(bullet_check(delta, rest, m2, Side.LEFT))
    passing = next((c for c in checks if c.passed), None)
    if passing is None:
        return Certificate("FAIL", m1, m2, k, delta, None, tuple(checks),
                           linked_pair=extract_linked_pair(delta, m2))
    line = fresh(delta.line)
    child = _certify(successor(rest, delta, line), m2, fresh)
    return Certificate("STEP", m1, m2, k, delta, passing.variant, tuple(checks), line, (child,))


def successor(rest: Multisegment, delta: Segment, line: CuspidalLine) -> Multisegment:
    """{rho'} + {-Delta} + rest, with rho' the singleton at 0 on ``line``."""
    nxt = rest.add(Segment(line, Fraction(0), Fraction(0)), truncate_left(delta, 1))
    if not is_generic(nxt):
        raise RuntimeError(f"recursion produced a non-generic datum {nxt}")
    return nxt


def step_chain(m1: Multisegment, m2: Multisegment) -> list[tuple[Multisegment, Segment, Multisegment, CuspidalLine]]:
    """(m1 state, Delta, rest, fresh line) for every STEP, assuming each one passes.

    The chain depends on m2 only through its lines, which makes batch
    evaluation over many m2 possible.
    """
    taken = {s.line.id for s in m1} | {s.line.id for s in m2}
    fresh = _FreshLines(taken)
    out = []
    while m_count(m1, m2):
        delta = choose_delta(m1, m2)
        rest = m1.remove(delta)
        line = fresh(delta.line)
        out.append((m1, delta, rest, line))
        m1 = successor(rest, delta, line)
    return out


def ep_pairing(rep1: InducedRep, rep2: InducedRep) -> int:
    return whittaker_dim(rep1) * whittaker_dim(rep2)
