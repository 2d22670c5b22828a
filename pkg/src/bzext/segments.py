"""
Cuspidal lines, segments, multisegments and induced representations.

Everything here is an immutable value with exact rational exponents.  A
cuspidal line stands for the unramified-twist class of one cuspidal
representation; a point on it is a twist exponent.

>>> s = seg(0, 2)
>>> s.rel, s.length
(3, 3)
>>> truncate_right(s, 1)
Segment(rho[0, 1])
>>> truncate_right(s, 3) is None
True
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

__all__ = [
    "DomainError", "Side", "Flavor", "CuspidalLine", "CuspidalPoint",
    "Segment", "Multisegment", "InducedRep", "FormalSum", "RHO",
    "seg", "ms", "rational", "truncate_right", "truncate_left",
    "truncate", "support", "dual", "unit_rep",
]

RationalLike = Union[int, Fraction, str]


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class Flavor(str, Enum):
    ZEL = "ZEL"  # product of <Delta_j>
    ST = "ST"    # product of St(Delta_j)


_INTERNED: dict[Fraction, Fraction] = {}


def rational(x: RationalLike) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("exponents must be exact; got a float")
    return Fraction(x)


def _intern(x: Fraction) -> Fraction:
    # equal exponents share one object so tuple comparisons hit the identity fast path
    return _INTERNED.setdefault(x, x)


@dataclass(frozen=True, order=True)
class CuspidalLine:
    id: str
    degree: int = 1
    dual_id: str = None  # type: ignore[assignment]  # None means self-dual

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise DomainError(f"line degree must be a positive integer, got {self.degree!r}")
        if self.dual_id is None:
            object.__setattr__(self, "dual_id", self.id)

    @property
    def self_dual(self) -> bool:
        return self.dual_id == self.id

    def dual(self) -> "CuspidalLine":
        return CuspidalLine(self.dual_id, self.degree, self.id)

    def __repr__(self):
        return self.id


RHO = CuspidalLine("rho")


@dataclass(frozen=True, order=True)
class CuspidalPoint:
    line: CuspidalLine
    exponent: Fraction

    def __hash__(self):
        # Fraction.__hash__ is slow; hash the integer pair instead
        e = self.exponent
        return hash((self.line.id, e.numerator, e.denominator))

    def dual(self) -> "CuspidalPoint":
        return CuspidalPoint(self.line.dual(), -self.exponent)

    def __repr__(self):
        return f"{self.line.id}:{self.exponent}"


@dataclass(frozen=True, eq=False)
class Segment:
    """The run nu^a rho, nu^(a+1) rho, ..., nu^b rho on one line.

    Ordered by (line, a, b) with exact comparison of exponents.
    """

    line: CuspidalLine
    a: Fraction
    b: Fraction
    rel: int = field(init=False, repr=False)     # b - a + 1
    length: int = field(init=False, repr=False)  # degree(line) * rel
    _k: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        a, b = _intern(rational(self.a)), _intern(rational(self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        d = b - a
        if d.denominator != 1 or d < 0:
            raise DomainError(f"b - a must be a non-negative integer: [{a}, {b}]")
        ln = self.line
        object.__setattr__(self, "rel", int(d) + 1)
        object.__setattr__(self, "length", ln.degree * self.rel)
        # a float never reorders exact values; ties fall through to the Fraction
        object.__setattr__(self, "_k", (ln.id, ln.degree, ln.dual_id, float(a), a, float(b), b))
        object.__setattr__(self, "_hash", hash(
            (ln.id, a.numerator, a.denominator, b.numerator, b.denominator)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Segment):
            return NotImplemented
        return self._k == other._k

    def __lt__(self, other):
        return self._k < other._k

    def __le__(self, other):
        return self._k <= other._k

    def __gt__(self, other):
        return self._k > other._k

    def __ge__(self, other):
        return self._k >= other._k

    def points(self) -> tuple[CuspidalPoint, ...]:
        return tuple(CuspidalPoint(self.line, self.a + k) for k in range(self.rel))

    def contains(self, other: "Segment") -> bool:
        return (self.line == other.line and (other.a - self.a).denominator == 1
                and self.a <= other.a and other.b <= self.b)

    def shift(self, t: RationalLike) -> "Segment":
        t = rational(t)
        return Segment(self.line, self.a + t, self.b + t)

    def dual(self) -> "Segment":
        return _segment_dual(self)

    def __repr__(self):
        return f"Segment({self})"

    def __str__(self):
        return f"{self.line.id}[{self.a}, {self.b}]"


def _seg_key(s: Segment) -> tuple:
    return s._k


def seg(a: RationalLike, b: RationalLike, line: CuspidalLine = RHO) -> Segment:
    return Segment(line, rational(a), rational(b))


@lru_cache(maxsize=1 << 16)
def _segment_dual(s: Segment) -> Segment:
    return Segment(s.line.dual(), -s.b, -s.a)


@lru_cache(maxsize=1 << 16)
def truncate_right(delta: Segment, k: int) -> Segment | None:
    """Drop ``k`` points (relative count) from the right end; None if all go."""
    if k < 0 or k > delta.rel:
        raise DomainError(f"cannot truncate {delta} by {k}")
    if k == delta.rel:
        return None
    return Segment(delta.line, delta.a, delta.b - k)


@lru_cache(maxsize=1 << 16)
def truncate_left(delta: Segment, k: int) -> Segment | None:
    if k < 0 or k > delta.rel:
        raise DomainError(f"cannot truncate {delta} by {k}")
    if k == delta.rel:
        return None
    return Segment(delta.line, delta.a + k, delta.b)


def truncate(delta: Segment, k: int, side: Side) -> Segment | None:
    """Truncate on the given side: RIGHT lowers b, LEFT raises a."""
    return truncate_right(delta, k) if side is Side.RIGHT else truncate_left(delta, k)


@dataclass(frozen=True)
class Multisegment:
    """A multiset of segments, stored sorted.  None entries are dropped."""

    segments: tuple[Segment, ...] = ()
    degree: int = field(init=False, compare=False, repr=False)
    _k: tuple = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        try:
            segs = sorted(self.segments, key=_seg_key)
        except AttributeError:  # ABSENT members
            segs = sorted((s for s in self.segments if s is not None), key=_seg_key)
        keys = tuple([s._k for s in segs])
        set_ = object.__setattr__
        set_(self, "segments", tuple(segs))
        set_(self, "degree", sum([s.length for s in segs]))
        set_(self, "_k", keys)
        set_(self, "_hash", hash(tuple([s._hash for s in segs])))

    def __hash__(self):
        return self._hash

    @classmethod
    def of(cls, *segments: Segment | None) -> "Multisegment":
        return cls(segments)

    def __len__(self):
        return len(self.segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __bool__(self):
        return bool(self.segments)

    def sort_key(self):
        return (self.degree, len(self.segments), self.segments)

    def __lt__(self, other: "Multisegment"):
        return self.sort_key() < other.sort_key()

    def lines(self) -> set[CuspidalLine]:
        return {s.line for s in self.segments}

    def shift(self, t: RationalLike) -> "Multisegment":
        t = rational(t)
        if not t:
            return self
        return Multisegment(tuple(s.shift(t) for s in self.segments))

    def dual(self) -> "Multisegment":
        return _multisegment_dual(self)

    def add(self, *segments: Segment | None) -> "Multisegment":
        return Multisegment(self.segments + segments)

    def remove(self, delta: Segment) -> "Multisegment":
        """Remove one copy of ``delta``."""
        segs = list(self.segments)
        try:
            segs.remove(delta)
        except ValueError:
            raise DomainError(f"{delta} is not a member of {self}") from None
        return Multisegment(tuple(segs))

    def __repr__(self):
        return "{" + ", ".join(str(s) for s in self.segments) + "}"


@lru_cache(maxsize=1 << 16)
def _multisegment_dual(m: Multisegment) -> Multisegment:
    return Multisegment(tuple(s.dual() for s in m.segments))


def ms(*pairs, line: CuspidalLine = RHO) -> Multisegment:
    """Shorthand: ``ms((0, 1), (2, 2))`` on a single line."""
    return Multisegment(tuple(seg(a, b, line) for a, b in pairs))


@dataclass(frozen=True, eq=False)
class InducedRep:
    """flavor(Delta_1) x ... x flavor(Delta_k), twisted by nu^twist.

    Equality is semantic: the twist is folded into the segments, and the
    degree-0 unit is equal across flavors.
    """

    flavor: Flavor
    m: Multisegment
    twist: Fraction = Fraction(0)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        if type(self.flavor) is not Flavor:
            object.__setattr__(self, "flavor", Flavor(self.flavor))
        t = self.twist
        if type(t) is not Fraction:
            t = rational(t)
            object.__setattr__(self, "twist", t)
        m = self.m.shift(t) if t else self.m
        tag = "" if not m.segments else ("ZEL" if self.flavor is Flavor.ZEL else "ST")
        object.__setattr__(self, "_key", (tag, m._k))
        object.__setattr__(self, "_hash", hash((tag, m._hash)))

    @property
    def degree(self) -> int:
        return self.m.degree

    def folded(self) -> Multisegment:
        """The factor multisegment with the twist absorbed."""
        return self.m.shift(self.twist)

    def key(self):
        return self._key

    def __eq__(self, other):
        if not isinstance(other, InducedRep):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def twisted(self, t: RationalLike) -> "InducedRep":
        return InducedRep(self.flavor, self.m, self.twist + rational(t))

    def __repr__(self):
        name = "<>" if self.flavor is Flavor.ZEL else "St"
        tw = f" nu^{self.twist}" if self.twist else ""
        return f"{name}{self.m!r}{tw}"


def unit_rep(flavor: Flavor = Flavor.ST) -> InducedRep:
    """The degree-0 unit representation."""
    return InducedRep(flavor, Multisegment(), Fraction(0))


@dataclass(frozen=True, eq=False)
class FormalSum:
    """A multiset of InducedRep terms (filtration subquotients, order forgotten)."""

    terms: tuple[InducedRep, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=InducedRep.key)))

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls(())

    def keys(self):
        return tuple(t.key() for t in self.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.keys() == other.keys()

    def __hash__(self):
        return hash(self.keys())

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[InducedRep]:
        return iter(self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + other.terms)

    def twisted(self, t: RationalLike) -> "FormalSum":
        return FormalSum(tuple(r.twisted(t) for r in self.terms))

    def supports(self) -> list[tuple[CuspidalPoint, ...]]:
        return [support(r) for r in self.terms]

    def __repr__(self):
        return "FormalSum(" + " + ".join(repr(t) for t in self.terms) + ")"


def _points(segments: Iterable[Segment], t: Fraction = Fraction(0)) -> tuple[CuspidalPoint, ...]:
    pts = [CuspidalPoint(p.line, p.exponent + t) for s in segments for p in s.points()]
    return tuple(sorted(pts))


def support(x: Segment | Multisegment | InducedRep) -> tuple[CuspidalPoint, ...]:
    """Cuspidal support as a sorted tuple (a hashable multiset)."""
    if x is None:
        return ()
    if isinstance(x, Segment):
        return x.points()
    if isinstance(x, Multisegment):
        return _points(x.segments)
    if isinstance(x, InducedRep):
        return _points(x.m.segments, x.twist)
    raise TypeError(f"no support for {type(x).__name__}")


def dual(rep: InducedRep) -> InducedRep:
    """Contragredient: [a, b] on L goes to [-b, -a] on dual(L); twist negates."""
    # reps compare semantically (twist folded, units equal across flavors),
    # so cache on the structural parts to keep the caller's presentation
    return _dual(rep.m, rep.twist, rep.flavor)


@lru_cache(maxsize=1 << 16)
def _dual(m: Multisegment, twist: Fraction, flavor: Flavor) -> InducedRep:
    return InducedRep(flavor, m.dual(), -twist)
