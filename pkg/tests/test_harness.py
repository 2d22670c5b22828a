import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from bzext.harness import (
    MODES, ExtBatch, RunReport, UniverseSpec, certificate_outline, enumerate_multisegments, run_suite,
)
from bzext.branching import ext_vanishing_certificate
from bzext.recombination import is_generic
from bzext.segments import RHO, CuspidalLine, DomainError, Multisegment, Segment, ms, seg

GOLDEN = Path(__file__).parent / "golden"


class TestEnumeration:
    def test_golden_small_window(self):
        gold = json.loads((GOLDEN / "window_0_1_degree_2.json").read_text())
        expected = [ms(*(tuple(p) for p in m)) for m in gold["multisegments"]]
        assert enumerate_multisegments(UniverseSpec(lo=0, hi=1, step=1, max_degree=2)) == expected

    def test_degree_zero(self):
        assert enumerate_multisegments(UniverseSpec(max_degree=0)) == [Multisegment()]

    def test_two_lines_degree_one(self):
        other = CuspidalLine("other")
        got = enumerate_multisegments(UniverseSpec(lines=(RHO, other), lo=0, hi=1, max_degree=1))
        singles = {Multisegment((Segment(ln, a, a),)) for ln in (RHO, other) for a in (0, 1)}
        assert got[0] == Multisegment()
        assert set(got[1:]) == singles and len(got) == 5

    def test_duplicate_free_and_deterministic(self):
        spec = UniverseSpec(lo=0, hi=2, step=F(1, 2), max_degree=4)
        a, b = enumerate_multisegments(spec), enumerate_multisegments(spec)
        assert a == b
        assert len(set(a)) == len(a)

    def test_complete_against_brute_force(self):
        # oracle: all multisets of universe segments, filtered by degree
        from itertools import combinations_with_replacement
        spec = UniverseSpec(lo=0, hi=2, step=1, max_degree=3)
        segs = [seg(a, b) for a in range(3) for b in range(a, 3)]
        brute = {Multisegment(c) for k in range(4) for c in combinations_with_replacement(segs, k)
                 if sum(s.length for s in c) <= 3}
        assert set(enumerate_multisegments(spec)) == brute

    def test_segment_cap_and_generic_filter(self):
        spec = UniverseSpec(lo=0, hi=2, max_degree=3, max_segments=1)
        assert all(len(m) <= 1 for m in enumerate_multisegments(spec))
        spec = UniverseSpec(lo=0, hi=2, max_degree=3, generic_only=True)
        assert all(is_generic(m) for m in enumerate_multisegments(spec))

    @pytest.mark.parametrize("kw", [{"step": 0}, {"step": F(1, 3)}, {"lo": F(1, 4)}, {"lo": 3, "hi": 1},
                                    {"max_degree": -1}, {"lines": ()}, {"hi": 1.5}])
    def test_rejects_bad_specs(self, kw):
        with pytest.raises(DomainError):
            UniverseSpec(**kw)


class TestRunReport:
    def test_exit_code_and_first_counterexample(self):
        r = RunReport("duality", [], {}, "d")
        r.record(True)
        assert r.exit_code == 0
        r.record(False, lambda: {"case": 1})
        r.record(False, lambda: {"case": 2})
        assert r.exit_code == 2
        assert r.first_counterexample == {"case": 1}
        assert (r.checked, r.certified, r.failed) == (3, 1, 2)

    def test_wall_time_only_on_request(self):
        r = RunReport("duality", [], {}, "d", wall_time=1.5)
        assert "wall_time" not in r.to_json()
        assert r.to_json(timing=True)["wall_time"] == 1.5

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            run_suite("nope", UniverseSpec())


SMALL = UniverseSpec(lo=0, hi=2, step=F(1, 2), max_degree=3)


@pytest.mark.parametrize("mode", [m for m in MODES if m != "hecke"])
def test_small_suites_pass_and_are_byte_stable(mode):
    a = run_suite(mode, SMALL, options={"sample": 20})
    b = run_suite(mode, SMALL, options={"sample": 20})
    assert a.failed == 0 and a.checked > 0
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_small_hecke_suite():
    rep = run_suite("hecke", UniverseSpec(max_degree=0), options={"trials": 20, "characters": 3})
    assert rep.failed == 0


class TestExtBatch:
    def test_batch_agrees_with_certificates(self):
        spec = UniverseSpec(lo=0, hi=2, step=F(1, 2), max_degree=3, generic_only=True)
        ms_ = enumerate_multisegments(spec)
        m2s = [m for m in ms_ if m.degree == 2]
        batch = ExtBatch(m2s)
        for m1 in (m for m in ms_ if m.degree == 3):
            states = batch.evaluate(m1)
            for b, m2 in enumerate(m2s):
                expected = certificate_outline(ext_vanishing_certificate(m1, m2))
                assert batch.outline(states, b) == expected
