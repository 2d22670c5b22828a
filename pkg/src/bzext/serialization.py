"""
JSON encoding of the domain types.

Rationals are ``[num, den]`` in lowest terms (integers and ``"n/d"`` strings
are accepted on input).  Every document carries ``"schema": 1`` and may
declare lines as ``[{"id", "degree", "dual"}]``; undeclared ids are
self-dual lines of degree 1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .branching import (
    Certificate, LinkedPair, QuotientCertificate, SpectrumWitness, VariantCheck, point_key,
)
from .recombination import recombine
from .segments import (
    CuspidalLine, CuspidalPoint, DomainError, Flavor, FormalSum, InducedRep, Multisegment,
    Segment, Side,
)

__all__ = [
    "SCHEMA", "SchemaError", "LineRegistry", "Encoder", "Decoder", "dumps", "document",
    "load_document", "encode_rational", "decode_rational",
]

SCHEMA = 1


class SchemaError(ValueError):
    """Malformed input; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '$'}: {message}")
        self.path = path or "$"


def encode_rational(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def decode_rational(obj: Any, path: str = "$") -> Fraction:
    if isinstance(obj, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"cannot parse {obj!r} as a rational") from None
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in obj)):
        if obj[1] == 0:
            raise SchemaError(path, "zero denominator")
        return Fraction(obj[0], obj[1])
    raise SchemaError(path, f"expected [num, den], an integer or 'n/d', got {obj!r}")


class LineRegistry:
    def __init__(self, lines: list[CuspidalLine] = ()):
        self._lines: dict[str, CuspidalLine] = {}
        for ln in lines:
            self._lines[ln.id] = ln

    @classmethod
    def from_json(cls, obj: Any, path: str = "$.lines") -> "LineRegistry":
        if obj is None:
            return cls()
        if not isinstance(obj, list):
            raise SchemaError(path, "expected a list of line declarations")
        reg = cls()
        for n, item in enumerate(obj):
            p = f"{path}[{n}]"
            if not isinstance(item, dict) or not isinstance(item.get("id"), str):
                raise SchemaError(p, "a line needs a string 'id'")
            degree = item.get("degree", 1)
            if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
                raise SchemaError(f"{p}.degree", "expected a positive integer")
            dual = item.get("dual", item["id"])
            if not isinstance(dual, str):
                raise SchemaError(f"{p}.dual", "expected a line id")
            if item["id"] in reg._lines:
                raise SchemaError(p, f"line {item['id']!r} declared twice")
            reg._lines[item["id"]] = CuspidalLine(item["id"], degree, dual)
        for ln in reg._lines.values():
            partner = reg._lines.get(ln.dual_id)
            if partner is not None and (partner.dual_id != ln.id or partner.degree != ln.degree):
                raise SchemaError(path, f"duality of {ln.id!r} and {ln.dual_id!r} is not an involution")
        return reg

    def get(self, line_id: str) -> CuspidalLine:
        if line_id not in self._lines:
            self._lines[line_id] = CuspidalLine(line_id)
        return self._lines[line_id]

    def to_json(self, used: set[CuspidalLine]) -> list[dict]:
        return [{"id": ln.id, "degree": ln.degree, "dual": ln.dual_id}
                for ln in sorted(used, key=lambda ln: ln.id)]


class Encoder:
    """Turns domain values into JSON-ready data, remembering the lines used."""

    def __init__(self):
        self.lines: set[CuspidalLine] = set()

    def rational(self, x) -> list[int]:
        return encode_rational(x)

    def line(self, ln: CuspidalLine) -> str:
        self.lines.add(ln)
        return ln.id

    def point(self, p: CuspidalPoint) -> dict:
        return {"line": self.line(p.line), "e": encode_rational(p.exponent)}

    def support(self, pts) -> list[dict]:
        return [self.point(p) for p in pts]

    def segment(self, s: Segment | None) -> dict | None:
        if s is None:
            return None
        return {"line": self.line(s.line), "a": encode_rational(s.a), "b": encode_rational(s.b)}

    def multisegment(self, m: Multisegment) -> dict:
        return {"segments": [self.segment(s) for s in m]}

    def rep(self, r: InducedRep) -> dict:
        return {"flavor": r.flavor.value, "m": self.multisegment(r.m), "twist": encode_rational(r.twist)}

    def formal_sum(self, f: FormalSum) -> dict:
        return {"terms": [self.rep(t) for t in f]}

    def spectrum(self, pts) -> dict:
        generic = recombine(Multisegment(tuple(Segment(p.line, p.exponent, p.exponent) for p in pts)))
        return {"support": self.support(pts), "generic": self.multisegment(generic)}

    def witness(self, w: SpectrumWitness) -> dict:
        return {
            "i": w.i,
            "twist": encode_rational(w.twist),
            "lhs": [self.spectrum(s) for s in w.lhs],
            "rhs": [self.spectrum(s) for s in w.rhs],
            "collision": None if w.collision is None else self.spectrum(w.collision),
        }

    def variant_check(self, c: VariantCheck) -> dict:
        return {
            "variant": c.variant.value,
            "delta": self.segment(c.delta),
            "passed": c.passed,
            "witnesses": [self.witness(w) for w in c.witnesses],
        }

    def certificate(self, c: Certificate) -> dict:
        out = {
            "kind": c.kind,
            "m1": self.multisegment(c.m1),
            "m2": self.multisegment(c.m2),
            "m_count": c.m_count,
            "delta": self.segment(c.delta),
            "variant": c.variant.value if c.variant else None,
            "checks": [self.variant_check(v) for v in c.checks],
            "fresh_line": self.line(c.fresh_line) if c.fresh_line else None,
            "children": [self.certificate(ch) for ch in c.children],
        }
        if c.kind == "FAIL":
            lp = c.linked_pair
            out["linked_pair"] = None if lp is None else {
                "first": self.segment(lp.first), "second": self.segment(lp.second), "route": lp.route}
        return out

    def quotient_certificate(self, c: QuotientCertificate) -> dict:
        def matches(ms):
            return [{"i": i, "subquotient": self.multisegment(g)} for i, g in ms]
        return {
            "kind": "QUOTIENT",
            "delta": self.segment(c.delta),
            "m2": self.multisegment(c.m2),
            "degenerate": c.degenerate,
            "right_matches": matches(c.right_matches),
            "left_matches": matches(c.left_matches),
            "verdict": c.verdict,
        }


class Decoder:
    def __init__(self, registry: LineRegistry | None = None):
        self.reg = registry or LineRegistry()

    def _obj(self, obj, path, keys) -> dict:
        if not isinstance(obj, dict):
            raise SchemaError(path, f"expected an object with keys {sorted(keys)}")
        missing = [k for k in keys if k not in obj]
        if missing:
            raise SchemaError(path, f"missing key {missing[0]!r}")
        return obj

    def _list(self, obj, path) -> list:
        if not isinstance(obj, list):
            raise SchemaError(path, "expected a list")
        return obj

    def line(self, obj, path="$") -> CuspidalLine:
        if not isinstance(obj, str):
            raise SchemaError(path, "expected a line id")
        return self.reg.get(obj)

    def point(self, obj, path="$") -> CuspidalPoint:
        o = self._obj(obj, path, ("line", "e"))
        return CuspidalPoint(self.line(o["line"], f"{path}.line"), decode_rational(o["e"], f"{path}.e"))

    def support(self, obj, path="$") -> tuple[CuspidalPoint, ...]:
        return tuple(sorted(self.point(p, f"{path}[{n}]") for n, p in enumerate(self._list(obj, path))))

    def segment(self, obj, path="$") -> Segment | None:
        if obj is None:
            return None
        o = self._obj(obj, path, ("line", "a", "b"))
        a = decode_rational(o["a"], f"{path}.a")
        b = decode_rational(o["b"], f"{path}.b")
        try:
            return Segment(self.line(o["line"], f"{path}.line"), a, b)
        except DomainError as e:
            raise SchemaError(path, str(e)) from None

    def multisegment(self, obj, path="$") -> Multisegment:
        o = self._obj(obj, path, ("segments",))
        segs = self._list(o["segments"], f"{path}.segments")
        out = []
        for n, s in enumerate(segs):
            if s is None:
                raise SchemaError(f"{path}.segments[{n}]", "empty segments are not stored")
            out.append(self.segment(s, f"{path}.segments[{n}]"))
        return Multisegment(tuple(out))

    def rep(self, obj, path="$") -> InducedRep:
        o = self._obj(obj, path, ("flavor", "m"))
        if o["flavor"] not in ("ZEL", "ST"):
            raise SchemaError(f"{path}.flavor", "expected 'ZEL' or 'ST'")
        twist = decode_rational(o.get("twist", 0), f"{path}.twist")
        return InducedRep(Flavor(o["flavor"]), self.multisegment(o["m"], f"{path}.m"), twist)

    def formal_sum(self, obj, path="$") -> FormalSum:
        o = self._obj(obj, path, ("terms",))
        return FormalSum(tuple(self.rep(t, f"{path}.terms[{n}]")
                               for n, t in enumerate(self._list(o["terms"], f"{path}.terms"))))

    def side(self, obj, path="$") -> Side:
        try:
            return Side(obj)
        except ValueError:
            raise SchemaError(path, "expected 'left' or 'right'") from None

    def witness(self, obj, path="$") -> SpectrumWitness:
        o = self._obj(obj, path, ("i", "twist", "lhs", "rhs", "collision"))
        t = decode_rational(o["twist"], f"{path}.twist")

        def keys(spec, p):
            pts = self.support(self._obj(spec, p, ("support",))["support"], f"{p}.support")
            return tuple(sorted(point_key(CuspidalPoint(q.line, q.exponent - t)) for q in pts))

        lhs = frozenset(keys(x, f"{path}.lhs[{n}]") for n, x in enumerate(self._list(o["lhs"], f"{path}.lhs")))
        rhs = frozenset(keys(x, f"{path}.rhs[{n}]") for n, x in enumerate(self._list(o["rhs"], f"{path}.rhs")))
        col = None if o["collision"] is None else keys(o["collision"], f"{path}.collision")
        lines = tuple(sorted({self.reg.get(k[0]) for s in lhs | rhs for k in s}))
        return SpectrumWitness(o["i"], t, lhs, rhs, col, lines)

    def variant_check(self, obj, path="$") -> VariantCheck:
        o = self._obj(obj, path, ("variant", "delta", "witnesses"))
        return VariantCheck(self.side(o["variant"], f"{path}.variant"), self.segment(o["delta"], f"{path}.delta"),
                            tuple(self.witness(w, f"{path}.witnesses[{n}]")
                                  for n, w in enumerate(self._list(o["witnesses"], f"{path}.witnesses"))))

    def certificate(self, obj, path="$") -> Certificate:
        o = self._obj(obj, path, ("kind", "m1", "m2", "m_count"))
        if o["kind"] not in ("BASE", "STEP", "FAIL"):
            raise SchemaError(f"{path}.kind", "expected BASE, STEP or FAIL")
        lp = o.get("linked_pair")
        if lp is not None:
            lp = LinkedPair(self.segment(lp["first"], f"{path}.linked_pair.first"),
                            self.segment(lp["second"], f"{path}.linked_pair.second"), lp["route"])
        return Certificate(
            o["kind"],
            self.multisegment(o["m1"], f"{path}.m1"),
            self.multisegment(o["m2"], f"{path}.m2"),
            o["m_count"],
            self.segment(o.get("delta"), f"{path}.delta"),
            None if o.get("variant") is None else self.side(o["variant"], f"{path}.variant"),
            tuple(self.variant_check(c, f"{path}.checks[{n}]") for n, c in enumerate(o.get("checks", []))),
            None if o.get("fresh_line") is None else self.line(o["fresh_line"], f"{path}.fresh_line"),
            tuple(self.certificate(c, f"{path}.children[{n}]") for n, c in enumerate(o.get("children", []))),
            lp,
        )

    def quotient_certificate(self, obj, path="$") -> QuotientCertificate:
        o = self._obj(obj, path, ("delta", "m2", "degenerate", "right_matches", "left_matches"))

        def matches(key):
            return tuple((x["i"], self.multisegment(x["subquotient"], f"{path}.{key}[{n}].subquotient"))
                         for n, x in enumerate(self._list(o[key], f"{path}.{key}")))
        return QuotientCertificate(self.segment(o["delta"], f"{path}.delta"),
                                   self.multisegment(o["m2"], f"{path}.m2"), o["degenerate"],
                                   matches("right_matches"), matches("left_matches"))


def document(payload: dict, enc: Encoder) -> dict:
    """Wrap an encoded payload with the schema tag and line declarations."""
    out = {"schema": SCHEMA}
    nontrivial = {ln for ln in enc.lines if ln.degree != 1 or not ln.self_dual}
    if nontrivial:
        out["lines"] = LineRegistry().to_json(nontrivial)
    out.update(payload)
    return out


def dumps(doc: Any) -> str:
    """Byte-stable JSON."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_document(text: str, source: str = "$") -> tuple[dict, Decoder]:
    """Parse JSON text, check the schema tag, and set up the line registry."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(source, f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise SchemaError(source, "expected a JSON object")
    if "schema" in obj and obj["schema"] != SCHEMA:
        raise SchemaError(f"{source}.schema", f"unsupported schema {obj['schema']!r}, expected {SCHEMA}")
    return obj, Decoder(LineRegistry.from_json(obj.get("lines"), f"{source}.lines"))
