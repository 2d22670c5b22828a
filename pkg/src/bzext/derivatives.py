"""
Left and right Bernstein-Zelevinsky derivatives at the level of segments.

A derivative of a product is returned as the FormalSum of its filtration
subquotients (Leibniz rule); the order in which they are glued is dropped.
"""

from __future__ import annotations

from functools import lru_cache

from .recombination import is_generic
from .segments import (
    DomainError, Flavor, FormalSum, InducedRep, Multisegment, Segment, Side,
    dual, truncate,
)

__all__ = [
    "derive_zel_segment", "derive_st_segment", "derive_product", "derive",
    "factor_derivatives", "whittaker_dim", "check_derivative_duality",
]


@lru_cache(maxsize=1 << 14)
def factor_derivatives(delta: Segment, flavor: Flavor, side: Side) -> tuple[tuple[int, Segment | None], ...]:
    """Admissible (order, resulting segment) pairs for one factor.

    <Delta> loses one point from the derivative's side; St(Delta) loses j points
    from the opposite side, for every j.
    """
    r = delta.line.degree
    if flavor is Flavor.ZEL:
        return ((0, delta), (r, truncate(delta, 1, side)))
    return tuple((j * r, truncate(delta, j, side.opposite)) for j in range(delta.rel + 1))


def _single(delta: Segment, i: int, side: Side, flavor: Flavor) -> FormalSum:
    for order, result in factor_derivatives(delta, flavor, side):
        if order == i:
            return FormalSum((InducedRep(flavor, Multisegment.of(result)),))
    return FormalSum.zero()


def derive_zel_segment(delta: Segment, i: int, side: Side) -> FormalSum:
    return _single(delta, i, side, Flavor.ZEL)


def derive_st_segment(delta: Segment, i: int, side: Side) -> FormalSum:
    return _single(delta, i, side, Flavor.ST)


@lru_cache(maxsize=1 << 16)
def _expansion(segs: tuple[Segment, ...], flavor: Flavor, side: Side) -> dict[int, tuple[tuple[Segment, ...], ...]]:
    # order -> surviving segments of every Leibniz term, built on suffixes
    if not segs:
        return {0: ((),)}
    tail = _expansion(segs[1:], flavor, side)
    out: dict[int, list] = {}
    for order, result in factor_derivatives(segs[0], flavor, side):
        head = () if result is None else (result,)
        for k, rests in tail.items():
            out.setdefault(order + k, []).extend(head + r for r in rests)
    return {k: tuple(v) for k, v in out.items()}


_ZERO = FormalSum.zero()


@lru_cache(maxsize=1 << 18)
def _term(segs: tuple[Segment, ...], flavor: Flavor) -> InducedRep:
    # the same surviving tuple recurs across many inputs
    return InducedRep(flavor, Multisegment(segs))


@lru_cache(maxsize=1 << 16)
def _untwisted(m: Multisegment, flavor: Flavor, side: Side) -> dict[int, FormalSum]:
    return {k: FormalSum(tuple([_term(t, flavor) for t in v]))
            for k, v in _expansion(m.segments, flavor, side).items()}


def derive_product(rep: InducedRep, i: int, side: Side) -> FormalSum:
    """i-th derivative of a product by the Leibniz rule, twist carried along."""
    if i < 0 or i > rep.degree:
        raise DomainError(f"derivative order {i} outside 0..{rep.degree}")
    out = _untwisted(rep.m, rep.flavor, side).get(i, _ZERO)
    return out.twisted(rep.twist) if rep.twist else out


derive = derive_product


def whittaker_dim(rep: InducedRep) -> int:
    """Dimension of Whittaker functionals of the irreducible named by ``rep``.

    ZEL data name <m> (Zelevinsky classification); ST data must be generic.
    """
    if rep.flavor is Flavor.ST:
        if not is_generic(rep.m):
            raise DomainError(f"St{rep.m!r} is not irreducible: the datum is not generic")
        return 1
    return int(all(s.rel == 1 for s in rep.m.segments))


def check_derivative_duality(rep: InducedRep, i: int, side: Side | None = None) -> bool:
    """dual(derive(rep, i, s)) == derive(dual(rep), i, opposite s); both sides by default."""
    sides = [side] if side is not None else [Side.RIGHT, Side.LEFT]
    for s in sides:
        lhs = FormalSum(tuple(dual(t) for t in derive_product(rep, i, s)))
        rhs = derive_product(dual(rep), i, s.opposite)
        if lhs != rhs:
            return False
    return True
