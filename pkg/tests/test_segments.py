from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bzext.recombination import linked, union_intersection
from bzext.segments import (
    RHO, CuspidalLine, CuspidalPoint, DomainError, Flavor, InducedRep, Multisegment, Segment,
    dual, ms, seg, support, truncate_left, truncate_right, unit_rep,
)
from strategies import SIGMA, TAU, multisegments, reps, segments


def pts(*es, line=RHO):
    return tuple(CuspidalPoint(line, F(e)) for e in es)


class TestTruncation:
    def test_right_examples(self):
        assert truncate_right(seg(0, 2), 1) == seg(0, 1)
        assert truncate_right(seg(0, 2), 3) is None
        assert truncate_right(seg(0, 2), 0) == seg(0, 2)

    def test_left_examples(self):
        assert truncate_left(seg(0, 2), 1) == seg(1, 2)
        assert truncate_left(seg(F(1, 2), F(1, 2)), 1) is None
        assert truncate_left(seg(0, 2), 0) == seg(0, 2)

    @pytest.mark.parametrize("fn", [truncate_left, truncate_right])
    def test_over_truncation_rejected(self, fn):
        with pytest.raises(DomainError):
            fn(seg(0, 2), 4)

    def test_counted_in_relative_length(self):
        # on a degree-2 line one relative step removes one point of absolute length 2
        d = Segment(SIGMA, 0, 2)
        assert truncate_right(d, 1) == Segment(SIGMA, 0, 1)
        assert truncate_right(d, 1).length == 4

    @given(segments(), st.integers(0, 4), st.integers(0, 4))
    def test_right_composes(self, d, k, j):
        if k + j <= d.rel:
            first = truncate_right(d, k)
            twice = truncate_right(first, j) if first is not None else (None if j == 0 else "skip")
            if twice != "skip":
                assert twice == truncate_right(d, k + j)

    @given(segments(), st.integers(0, 4))
    def test_left_right_mirror_under_dual(self, d, k):
        if k <= d.rel:
            r = truncate_right(d, k)
            left_of_dual = truncate_left(d.dual(), k)
            assert (r is None and left_of_dual is None) or r.dual() == left_of_dual


class TestSegmentValue:
    def test_rejects_non_integral_length(self):
        with pytest.raises(DomainError):
            seg(0, F(1, 2))
        with pytest.raises(DomainError):
            seg(1, 0)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            seg(0.0, 1)

    def test_lengths(self):
        assert seg(0, 2).rel == 3 and seg(0, 2).length == 3
        assert Segment(SIGMA, 0, 2).length == 6

    def test_line_degree_positive(self):
        with pytest.raises(DomainError):
            CuspidalLine("bad", 0)

    def test_line_dual_involution(self):
        assert TAU.dual() != TAU
        assert TAU.dual().dual() == TAU
        assert RHO.dual() == RHO

    def test_points_equal_by_line_and_exponent(self):
        assert CuspidalPoint(RHO, F(2, 4)) == CuspidalPoint(RHO, F(1, 2))
        assert CuspidalPoint(RHO, F(1)) != CuspidalPoint(TAU, F(1))

    def test_order_is_line_then_a_then_b(self):
        xs = [seg(1, 1), seg(0, 2), seg(0, 1), Segment(TAU, -5, -5)]
        assert sorted(xs) == [seg(0, 1), seg(0, 2), seg(1, 1), Segment(TAU, -5, -5)]


class TestLinked:
    def test_examples(self):
        assert linked(seg(0, 1), seg(1, 2))
        assert not linked(seg(0, 3), seg(1, 2))
        assert linked(seg(0, 1), seg(2, 3))

    def test_other_line_or_offset(self):
        assert not linked(seg(0, 1), Segment(TAU, 1, 2))
        assert not linked(seg(0, 1), seg(F(1, 2), F(3, 2)))

    @given(segments(), segments())
    def test_symmetric(self, d1, d2):
        assert linked(d1, d2) == linked(d2, d1)

    @given(segments())
    def test_irreflexive(self, d):
        assert not linked(d, d)

    @given(segments(lines=(RHO,)), segments(lines=(RHO,)))
    def test_matches_interval_definition(self, d1, d2):
        # oracle: point sets, containment and contiguity of the union
        p1, p2 = set(support(d1)), set(support(d2))
        same_grid = (d1.a - d2.a).denominator == 1
        union = sorted(p.exponent for p in p1 | p2)
        contiguous = all(y - x == 1 for x, y in zip(union, union[1:]))
        expected = same_grid and not (p1 <= p2 or p2 <= p1) and contiguous
        assert linked(d1, d2) == expected


class TestUnionIntersection:
    def test_examples(self):
        assert union_intersection(seg(0, 1), seg(1, 2)) == (seg(0, 2), seg(1, 1))
        assert union_intersection(seg(0, 1), seg(2, 3)) == (seg(0, 3), None)
        assert union_intersection(seg(-1, 1), seg(0, 2)) == (seg(-1, 2), seg(0, 1))

    def test_unlinked_rejected(self):
        with pytest.raises(DomainError):
            union_intersection(seg(0, 3), seg(1, 2))

    @given(segments(), segments())
    def test_support_preserved(self, d1, d2):
        if linked(d1, d2):
            u, i = union_intersection(d1, d2)
            assert sorted(support(d1) + support(d2)) == sorted(support(u) + support(i))


class TestSupport:
    def test_examples(self):
        assert support(seg(0, 2)) == pts(0, 1, 2)
        assert support(InducedRep(Flavor.ST, ms((0, 1)), F(1, 2))) == pts(F(1, 2), F(3, 2))
        assert support(Multisegment()) == ()

    @given(multisegments(lines=(RHO, TAU)))
    def test_size_equals_degree_on_degree_one_lines(self, m):
        assert len(support(m)) == m.degree

    @given(reps())
    def test_dual_support_is_pointwise_dual(self, r):
        assert sorted(p.dual() for p in support(r)) == list(support(dual(r)))


class TestMultisegment:
    def test_degree(self):
        assert Multisegment().degree == 0
        assert Multisegment((seg(0, 1), Segment(SIGMA, 0, 0))).degree == 4

    def test_absent_members_dropped(self):
        assert Multisegment((seg(0, 0), None)) == ms((0, 0))

    def test_multiset_order_insensitive(self):
        assert ms((0, 1), (2, 2)) == ms((2, 2), (0, 1))
        assert hash(ms((0, 1), (2, 2))) == hash(ms((2, 2), (0, 1)))
        assert ms((0, 0), (0, 0)) != ms((0, 0))


class TestDual:
    def test_examples(self):
        assert dual(InducedRep(Flavor.ST, ms((0, 1)))) == InducedRep(Flavor.ST, ms((-1, 0)))
        assert dual(unit_rep()) == unit_rep()

    def test_moves_to_dual_line(self):
        r = InducedRep(Flavor.ZEL, Multisegment((Segment(TAU, 0, 1),)), F(1, 2))
        d = dual(r)
        assert d.m.segments[0].line == TAU.dual()
        assert d.twist == F(-1, 2)
        assert d.m.segments[0] == Segment(TAU.dual(), -1, 0)

    @given(reps())
    def test_involution(self, r):
        assert dual(dual(r)) == r

    @given(reps())
    def test_degree_and_flavor_preserved(self, r):
        d = dual(r)
        assert d.degree == r.degree and d.flavor == r.flavor


class TestInducedRep:
    def test_unit_equal_across_flavors(self):
        assert unit_rep(Flavor.ST) == unit_rep(Flavor.ZEL)

    def test_twist_folds_into_segments(self):
        assert InducedRep(Flavor.ST, ms((0, 1)), 1) == InducedRep(Flavor.ST, ms((1, 2)))
        assert InducedRep(Flavor.ST, ms((0, 1))) != InducedRep(Flavor.ZEL, ms((0, 1)))

    @given(reps(), half_twists := st.integers(-4, 4).map(lambda n: F(n, 2)))
    def test_twist_shifts_support(self, r, t):
        shifted = tuple(CuspidalPoint(p.line, p.exponent + t) for p in support(r))
        assert support(r.twisted(t)) == shifted
