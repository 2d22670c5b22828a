"""
Exhaustive enumeration over a bounded universe and the suite runner.

A universe is a set of lines, a grid ``lo, lo + step, ..., <= hi`` of
exponents, and a degree bound.  ``run_suite`` applies one check to every
case and returns a ``RunReport`` whose JSON form is byte-stable.

The Ext mode evaluates verdicts in batch.  For a fixed m1 the recursion
(Delta, rest, fresh line) does not depend on m2 beyond its set of lines, so
each bullet check reduces to "does some St(Delta) x rest-derivative spectrum
occur among the m2-derivative spectra".  Indexing every m2 spectrum by a
bitmask over the m2 list turns that into dictionary lookups and integer ORs.
A seeded sample of pairs is replayed through ``ext_vanishing_certificate``
and must agree node for node.
"""

from __future__ import annotations

import gc
import hashlib
import json
import random
import sys
import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .branching import (
    Certificate, choose_delta, ep_pairing, ext_vanishing_certificate, extract_linked_pair,
    feasible_orders, lhs_spectra, linked, quotient_obstruction, rhs_spectra, step_chain,
)
from .derivatives import check_derivative_duality, derive_product
from .recombination import all_normal_forms, is_generic, recombine, verify_truncation_lemma
from .segments import (
    RHO, CuspidalLine, DomainError, Flavor, InducedRep, Multisegment, Segment, Side, support,
)

__all__ = [
    "UniverseSpec", "RunReport", "MODES", "grid", "universe_segments",
    "enumerate_multisegments", "run_suite", "ExtBatch", "delta_choice_evidence",
    "paused_gc",
]

MODES = ("truncation-lemma", "ext", "quotient", "duality", "hecke", "confluence", "ep")


@contextmanager
def paused_gc():
    """Suspend the cyclic collector: sweeps keep millions of acyclic cached values alive."""
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


@dataclass(frozen=True)
class UniverseSpec:
    lines: tuple[CuspidalLine, ...] = (RHO,)
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(4)
    step: Fraction = Fraction(1)
    max_degree: int = 2
    flavors: tuple[Flavor, ...] = (Flavor.ZEL, Flavor.ST)
    max_segments: int | None = None
    generic_only: bool = False

    def __post_init__(self):
        for name in ("lo", "hi", "step"):
            v = getattr(self, name)
            if isinstance(v, float):
                raise DomainError(f"{name} must be exact")
            v = Fraction(v)
            if v.denominator > 2:
                raise DomainError(f"{name} = {v} has denominator above 2")
            object.__setattr__(self, name, v)
        if self.step <= 0:
            raise DomainError("the grid step must be positive; the universe would be infinite")
        if self.lo > self.hi:
            raise DomainError(f"empty window [{self.lo}, {self.hi}]")
        if not isinstance(self.max_degree, int) or self.max_degree < 0:
            raise DomainError("a finite non-negative degree bound is required")
        if not self.lines:
            raise DomainError("at least one line must be declared")
        object.__setattr__(self, "flavors", tuple(Flavor(f) for f in self.flavors))

    def to_json(self) -> dict:
        def rat(x):
            return [x.numerator, x.denominator]
        return {
            "lines": [{"id": ln.id, "degree": ln.degree, "dual": ln.dual_id} for ln in self.lines],
            "window": [rat(self.lo), rat(self.hi)],
            "step": rat(self.step),
            "max_degree": self.max_degree,
            "flavors": [f.value for f in self.flavors],
            "max_segments": self.max_segments,
            "generic_only": self.generic_only,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def grid(spec: UniverseSpec) -> list[Fraction]:
    out, x = [], spec.lo
    while x <= spec.hi:
        out.append(x)
        x += spec.step
    return out


def universe_segments(spec: UniverseSpec) -> list[Segment]:
    pts = grid(spec)
    return sorted(Segment(ln, a, b) for ln in spec.lines for a in pts for b in pts
                  if b >= a and (b - a).denominator == 1 and ln.degree * (b - a + 1) <= spec.max_degree)


def enumerate_multisegments(spec: UniverseSpec) -> list[Multisegment]:
    """Every multisegment of the universe once, in canonical order.

    >>> [repr(m) for m in enumerate_multisegments(UniverseSpec(lo=0, hi=1, max_degree=2))]
    ['{}', '{rho[0, 0]}', '{rho[1, 1]}', '{rho[0, 1]}', '{rho[0, 0], rho[0, 0]}', '{rho[0, 0], rho[1, 1]}', '{rho[1, 1], rho[1, 1]}']
    """
    segs = universe_segments(spec)
    cap = spec.max_segments
    out: list[Multisegment] = []

    def go(start: int, chosen: tuple, degree: int):
        m = Multisegment(chosen)
        if not spec.generic_only or is_generic(m):
            out.append(m)
        if cap is not None and len(chosen) >= cap:
            return
        for j in range(start, len(segs)):
            s = segs[j]
            if degree + s.length <= spec.max_degree:
                go(j, chosen + (s,), degree + s.length)

    go(0, (), 0)
    out.sort(key=Multisegment.sort_key)
    return out


@dataclass
class RunReport:
    mode: str
    command: list[str]
    spec: dict
    digest: str
    checked: int = 0
    certified: int = 0
    failed: int = 0
    verdicts: dict[str, int] = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    first_counterexample: dict | None = None
    wall_time: float = 0.0

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 else 2

    def tally(self, verdict: str, n: int = 1):
        self.verdicts[verdict] = self.verdicts.get(verdict, 0) + n

    def record(self, ok: bool, counterexample: Callable[[], dict] | None = None, n: int = 1):
        if n <= 0:
            return
        self.checked += n
        if ok:
            self.certified += n
        else:
            self.failed += n
            if self.first_counterexample is None and counterexample is not None:
                self.first_counterexample = counterexample()

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "schema": 1,
            "mode": self.mode,
            "command": self.command,
            "spec": self.spec,
            "input_digest": self.digest,
            "counts": {"checked": self.checked, "certified": self.certified, "failed": self.failed},
            "verdicts": dict(sorted(self.verdicts.items())),
            "details": self.details,
            "first_counterexample": self.first_counterexample,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _ms_json(m: Multisegment) -> dict:
    from .serialization import Encoder
    return Encoder().multisegment(m)


def _rep_json(r: InducedRep) -> dict:
    from .serialization import Encoder
    return Encoder().rep(r)


def run_suite(mode: str, spec: UniverseSpec, *, seed: int = 0, command: list[str] | None = None,
              options: dict | None = None, progress: Callable[[str], None] | None = None) -> RunReport:
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    options = dict(options or {})
    report = RunReport(mode, list(command or []), spec.to_json(), spec.digest())
    report.details["seed"] = seed
    started = time.perf_counter()
    with paused_gc():
        _RUNNERS[mode](spec, report, seed, options, progress or (lambda msg: None))
    report.wall_time = time.perf_counter() - started
    return report


def _run_duality(spec, report, seed, options, progress):
    ms = enumerate_multisegments(spec)
    report.details["multisegments"] = len(ms)
    for m in ms:
        for flavor in spec.flavors:
            rep = InducedRep(flavor, m)
            for i in range(m.degree + 1):
                ok = check_derivative_duality(rep, i)
                report.record(ok, lambda: {"rep": _rep_json(rep), "i": i})
                # every term of an i-th derivative has degree deg - i
                for side in Side:
                    if any(t.degree != m.degree - i for t in derive_product(rep, i, side)):
                        report.record(False, lambda: {"rep": _rep_json(rep), "i": i, "degree": "mismatch"})
    report.tally("PASS", report.certified)
    report.tally("FAIL", report.failed)


def _run_truncation(spec, report, seed, options, progress):
    ms = [m for m in enumerate_multisegments(spec) if is_generic(m)]
    report.details["generic_multisegments"] = len(ms)
    for m in ms:
        for i in range(m.degree + 1):
            res = verify_truncation_lemma(m, i)
            report.record(res.holds, lambda: {"m": _ms_json(m), "i": i, "witness": _ms_json(res.witness)})
            report.tally("HOLDS" if res.holds else "VIOLATED")


def _run_confluence(spec, report, seed, options, progress):
    ms = enumerate_multisegments(spec)
    report.details["multisegments"] = len(ms)
    by_support: dict[tuple, Multisegment] = {}
    classes = 0
    for m in ms:
        forms = all_normal_forms(m)
        canon = recombine(m)
        ok = forms == {canon} and is_generic(canon) and support(canon) == support(m)
        report.record(ok, lambda: {"m": _ms_json(m), "normal_forms": [_ms_json(f) for f in sorted(forms)]})
        sup = support(m)
        seen = by_support.setdefault(sup, canon)
        if seen is canon:
            classes += 1
        elif seen != canon:
            report.record(False, lambda: {"m": _ms_json(m), "canonical": _ms_json(canon),
                                          "same_support_canonical": _ms_json(seen)})
    report.details["support_classes"] = classes
    report.tally("CONFLUENT", report.certified)


def _run_quotient(spec, report, seed, options, progress):
    ms = [m for m in enumerate_multisegments(spec) if any(s.rel > 1 for s in m)]
    by_degree = defaultdict(list)
    for m in ms:
        by_degree[m.degree].append(m)
    deltas = [d for d in universe_segments(spec) if d.length <= spec.max_degree]
    report.details["deltas"] = len(deltas)
    report.details["degenerate_m2"] = len(ms)
    for delta in deltas:
        for m2 in by_degree.get(delta.length - 1, ()):
            cert = quotient_obstruction(delta, m2, require_degenerate=True)
            report.record(cert.obstructed, lambda: _quotient_json(cert))
            report.tally(cert.verdict)


def _quotient_json(cert) -> dict:
    from .serialization import Encoder
    return Encoder().quotient_certificate(cert)


def _run_ep(spec, report, seed, options, progress):
    ms = enumerate_multisegments(spec)
    data = [InducedRep(Flavor.ZEL, m) for m in ms]
    data += [InducedRep(Flavor.ST, m) for m in ms if is_generic(m)]
    by_degree = defaultdict(list)
    for r in data:
        by_degree[r.degree].append(r)

    # generic iff the full right derivative is the unit, by the Leibniz expansion
    def generic(r: InducedRep) -> bool:
        top = derive_product(r, r.degree, Side.RIGHT)
        return len(top) == 1 and top.terms[0].degree == 0

    flags = {id(r): generic(r) for r in data}
    report.details["irreducible_data"] = len(data)
    for n in sorted(by_degree):
        for r1 in by_degree.get(n + 1, ()):
            for r2 in by_degree[n]:
                expected = int(flags[id(r1)] and flags[id(r2)])
                got = ep_pairing(r1, r2)
                report.record(got == expected, lambda: {"rep1": _rep_json(r1), "rep2": _rep_json(r2),
                                                        "ep": got, "expected": expected})
                report.tally(f"EP={got}")


def _run_hecke(spec, report, seed, options, progress):
    from .hecke.modules import central_quotient, principal_series, sign_isotypic_dim, verify_relations
    trials = options.get("trials", 1000)
    q = Fraction(options.get("q", 4))
    ranks = options.get("ranks", (2, 3))
    rng = random.Random(seed)
    for m in ranks:
        rel = verify_relations(m, trials, seed)
        report.record(rel.ok, lambda: {"m": m, "violations": rel.violations[:5]})
        report.tally("RELATIONS_OK" if rel.ok else "RELATIONS_FAIL")
        report.details[f"relations_m{m}"] = rel.checks
        for _ in range(options.get("characters", 20)):
            chi = _regular_character(rng, m)
            ps = principal_series(m, chi, q)
            dim = sign_isotypic_dim(ps)
            report.record(dim == 1, lambda: {"m": m, "chi": [str(c) for c in chi], "sign_dim": dim})
            report.tally(f"PS_SIGN_DIM={dim}")
    cq = central_quotient(2, (Fraction(1), Fraction(3)), q)
    ok = cq.dim == 2 and cq.sign_dim == 1 and cq.unique_sign_quotient is True
    report.record(ok, lambda: {"central_quotient": {"dim": cq.dim, "sign_dim": cq.sign_dim}})
    report.tally("CENTRAL_QUOTIENT_OK" if ok else "CENTRAL_QUOTIENT_FAIL")


def _regular_character(rng: random.Random, m: int) -> tuple[Fraction, ...]:
    pool = [Fraction(n, d) for n in range(-9, 10) if n for d in (1, 2, 3)]
    while True:
        chi = tuple(rng.choice(pool) for _ in range(m))
        if len(set(chi)) == m:
            return chi


class ExtBatch:
    """Bullet verdicts of one m1 against every m2 of a fixed degree and line set."""

    def __init__(self, m2s: list[Multisegment]):
        if not m2s:
            raise DomainError("empty m2 family")
        degrees = {m.degree for m in m2s}
        lines = {frozenset(m.lines()) for m in m2s}
        if len(degrees) != 1 or len(lines) != 1:
            raise DomainError("an m2 family must share degree and lines")
        self.m2s = m2s
        self.n = degrees.pop()
        self.full = (1 << len(m2s)) - 1
        self.index: dict[Side, list[dict]] = {}
        for variant in (Side.RIGHT, Side.LEFT):
            tables = []
            for i in range(self.n + 1):
                tab: dict = defaultdict(int)
                for b, m2 in enumerate(m2s):
                    bit = 1 << b
                    for key in rhs_spectra(m2, i, variant):
                        tab[key] |= bit
                tables.append(dict(tab))
            self.index[variant] = tables

    def collisions(self, delta: Segment, rest: Multisegment, variant: Side) -> int:
        """Bitmask of the m2 for which this variant collides at some feasible i."""
        mask = 0
        tables = self.index[variant]
        for i in feasible_orders(rest, self.m2s[0]):
            tab = tables[i]
            for key in lhs_spectra(delta, rest, variant, i):
                mask |= tab.get(key, 0)
        return mask

    def evaluate(self, m1: Multisegment) -> list[tuple[Segment, int, int]]:
        """Per STEP of the chain: (Delta, right-collision mask, left-collision mask)."""
        return [(delta, self.collisions(delta, rest, Side.RIGHT), self.collisions(delta, rest, Side.LEFT))
                for _, delta, rest, _ in step_chain(m1, self.m2s[0])]

    @staticmethod
    def outline(states: list[tuple[Segment, int, int]], b: int) -> list[str]:
        """Node kinds and variants for the pair with m2 index b, as the certificate would show."""
        out = []
        for _, r, l in states:
            if not (r >> b) & 1:
                out.append("STEP:right")
            elif not (l >> b) & 1:
                out.append("STEP:left")
            else:
                out.append("FAIL")
                return out
        out.append("BASE")
        return out


def certificate_outline(c: Certificate) -> list[str]:
    out = []
    for node in c.nodes():
        out.append(f"STEP:{node.variant.value}" if node.kind == "STEP" else node.kind)
    return out


def _run_ext(spec, report, seed, options, progress):
    ms = enumerate_multisegments(spec)
    generic = [m for m in ms if is_generic(m)]
    nongeneric = [m for m in ms if not is_generic(m)]
    max_n = spec.max_degree - 1
    rng = random.Random(seed)
    sample = options.get("sample", 200)
    inject = options.get("inject", True)
    report.details.update({"generic_data": len(generic), "max_n": max_n})
    stats = defaultdict(int)

    def families(pool, n):
        groups = defaultdict(list)
        for m in pool:
            if m.degree == n:
                groups[frozenset(ln.id for ln in m.lines())].append(m)
        return [groups[k] for k in sorted(groups, key=sorted)]

    for n in range(max_n + 1):
        m1s = [m for m in generic if m.degree == n + 1]
        for fam in families(generic, n):
            batch = ExtBatch(fam)
            progress(f"ext n={n}: {len(m1s)} x {len(fam)}")
            replay = []
            for m1 in m1s:
                states = batch.evaluate(m1)
                alive, fails = batch.full, 0
                for _, r, l in states:
                    stats["steps_right"] += (alive & ~r).bit_count()
                    stats["steps_left"] += (alive & r & ~l).bit_count()
                    f = alive & r & l
                    fails |= f
                    alive &= ~f
                if not states:
                    stats["base_at_root"] += len(fam)
                nf = fails.bit_count()
                report.record(True, n=len(fam) - nf)
                if nf:
                    report.record(False, lambda: _ext_counterexample(m1, fam[_lowest_bit(fails)]), n=nf)
                report.tally("CERTIFIED", len(fam) - nf)
                report.tally("FAIL", nf)
                replay.append((m1, states))
            _replay(report, batch, replay, rng, sample, stats, strict=True)
        if inject:
            _run_injected(report, m1s, families(nongeneric, n), rng, sample, stats, progress)
    report.details["stats"] = dict(sorted(stats.items()))


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _ext_counterexample(m1, m2) -> dict:
    from .serialization import Encoder
    cert = ext_vanishing_certificate(m1, m2, strict=False)
    return {"m1": _ms_json(m1), "m2": _ms_json(m2), "certificate": Encoder().certificate(cert)}


def _replay(report, batch, replay, rng, sample, stats, *, strict):
    """Re-run sampled pairs through the certificate generator; outlines must agree."""
    pairs = [(m1, states, b) for m1, states in replay for b in range(len(batch.m2s))]
    chosen = pairs if len(pairs) <= sample else rng.sample(pairs, sample)
    for m1, states, b in chosen:
        m2 = batch.m2s[b]
        cert = ext_vanishing_certificate(m1, m2, strict=strict)
        expect = ExtBatch.outline(states, b)
        got = certificate_outline(cert)
        stats["replayed"] += 1
        if got != expect:
            report.record(False, lambda: {"m1": _ms_json(m1), "m2": _ms_json(m2), "batch": expect,
                                          "certificate": got, "problem": "batch and certificate disagree"})
            report.tally("REPLAY_MISMATCH")


def _run_injected(report, m1s, fams, rng, sample, stats, progress):
    """Non-generic m2: every FAIL must come with a genuinely linked pair of m2."""
    for fam in fams:
        batch = ExtBatch(fam)
        progress(f"ext injected n={batch.n}: {len(m1s)} x {len(fam)}")
        first_fail: dict[Segment, int] = defaultdict(int)
        replay = []
        for m1 in m1s:
            states = batch.evaluate(m1)
            alive = batch.full
            for delta, r, l in states:
                f = alive & r & l
                first_fail[delta] |= f
                alive &= ~f
            stats["injected_pairs"] += len(fam)
            stats["injected_fail"] += (batch.full & ~alive).bit_count()
            replay.append((m1, states))
        for delta, mask in sorted(first_fail.items()):
            while mask:
                b = _lowest_bit(mask)
                mask &= mask - 1
                m2 = fam[b]
                lp = extract_linked_pair(delta, m2)
                ok = (lp is not None and linked(lp.first, lp.second)
                      and _members(m2, (lp.first, lp.second)))
                stats["extractions"] += 1
                if lp is not None:
                    stats[f"extractor_{lp.route}"] += 1
                report.record(ok, lambda: {"delta": str(delta), "m2": _ms_json(m2),
                                           "problem": "no linked pair extracted"})
                report.tally("LINKED_PAIR" if ok else "EXTRACTION_FAILED")
        _replay(report, batch, replay, rng, sample, stats, strict=False)


def _members(m: Multisegment, segs) -> bool:
    pool = list(m.segments)
    for s in segs:
        if s not in pool:
            return False
        pool.remove(s)
    return True


def delta_choice_evidence(m1: Multisegment, m2: Multisegment) -> dict[str, str]:
    """Outcome of forcing each admissible root Delta: CERTIFIED, FAIL or NONGENERIC."""
    lines = m2.lines()
    shortest = choose_delta(m1, m2)
    out = {}
    for delta in sorted(set(s for s in m1 if s.line in lines)):
        tag = ("shortest " if delta == shortest else "") + str(delta)
        try:
            cert = ext_vanishing_certificate(m1, m2, first_delta=delta)
        except DomainError:
            out[tag] = "NONGENERIC"
            continue
        out[tag] = "FAIL" if cert.has_fail() else "CERTIFIED"
    return out


_RUNNERS = {
    "duality": _run_duality,
    "truncation-lemma": _run_truncation,
    "confluence": _run_confluence,
    "quotient": _run_quotient,
    "ep": _run_ep,
    "hecke": _run_hecke,
    "ext": _run_ext,
}


def log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)
