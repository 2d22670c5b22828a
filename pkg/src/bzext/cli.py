"""Command-line interface.  Exit codes: 0 ok, 1 usage or schema error, 2 counterexample."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .branching import bz_filtration, ep_pairing, ext_vanishing_certificate, quotient_obstruction
from .derivatives import derive_product
from .harness import MODES, UniverseSpec, enumerate_multisegments, log, run_suite
from .recombination import recombine_trace, verify_truncation_lemma
from .segments import CuspidalLine, DomainError, Side
from .serialization import Encoder, SchemaError, document, dumps, load_document

EXIT_OK, EXIT_USAGE, EXIT_COUNTEREXAMPLE = 0, 1, 2
JOBS_ENV = "BZEXT_JOBS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.lstrip().startswith("{"):
        return arg
    try:
        return Path(arg).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {arg}: {e.strerror}") from None


def _load(arg: str, kind: str):
    src = "<inline>:$" if arg.lstrip().startswith("{") else f"{arg}:$"
    obj, dec = load_document(_read(arg), source=src)
    return getattr(dec, kind)(obj, src)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}") from None


def _tuple(text: str, convert=_rational) -> tuple:
    body = text.strip().strip("()[]")
    if not body:
        return ()
    return tuple(convert(p.strip()) for p in body.split(","))


def _window(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"window must look like a..b, got {text!r}")
    return _rational(lo), _rational(hi)


def _jobs(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(JOBS_ENV)
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise UsageError(f"{JOBS_ENV} must be an integer, got {env!r}") from None


# commands return (payload, text lines, exit code)

def cmd_derive(args):
    rep = _load(args.rep, "rep")
    side = Side(args.side)
    enc = Encoder()
    result = derive_product(rep, args.i, side)
    payload = {"command": "derive", "input": enc.rep(rep), "i": args.i, "side": side.value,
               "derivative": enc.formal_sum(result)}
    text = [f"{'right' if side is Side.RIGHT else 'left'} derivative of order {args.i} of {rep!r}:"]
    text += [f"  {t!r}" for t in result] or ["  0"]
    return document(payload, enc), text, EXIT_OK


def cmd_recombine(args):
    m = _load(args.multisegment, "multisegment")
    enc = Encoder()
    canonical, steps = recombine_trace(m)
    payload = {
        "command": "recombine",
        "input": enc.multisegment(m),
        "canonical": enc.multisegment(canonical),
        "steps": [{"pair": [enc.segment(x) for x in st.pair], "union": enc.segment(st.union),
                   "intersection": enc.segment(st.intersection), "result": enc.multisegment(st.result)}
                  for st in steps],
    }
    text = [f"{m!r} -> {canonical!r} in {len(steps)} step(s)"]
    text += [f"  {st.pair[0]} + {st.pair[1]} -> {st.result!r}" for st in steps]
    return document(payload, enc), text, EXIT_OK


def cmd_truncation_lemma(args):
    m = _load(args.multisegment, "multisegment")
    if not args.all_i and args.i is None:
        raise UsageError("truncation-lemma needs --i or --all-i")
    orders = range(m.degree + 1) if args.all_i else [args.i]
    enc = Encoder()
    results = []
    holds = True
    for i in orders:
        res = verify_truncation_lemma(m, i)
        holds &= res.holds
        results.append({
            "i": i, "lemma_holds": res.holds, "checked": res.checked,
            "witness": None if res.witness is None else enc.multisegment(res.witness),
            "recombined": None if res.recombined is None else enc.multisegment(res.recombined),
            "depth": res.depth,
        })
    first_bad = next((r for r in results if not r["lemma_holds"]), None)
    payload = {"command": "truncation-lemma", "input": enc.multisegment(m), "lemma_holds": holds,
               "witness": first_bad, "results": results}
    text = [f"i={r['i']}: {'holds' if r['lemma_holds'] else 'VIOLATED'} ({r['checked']} truncations)"
            for r in results]
    return document(payload, enc), text, EXIT_OK if holds else EXIT_COUNTEREXAMPLE


def cmd_restrict(args):
    rep = _load(args.rep, "rep")
    side = Side(args.side)
    enc = Encoder()
    layers = bz_filtration(rep, side)
    payload = {"command": "restrict", "input": enc.rep(rep), "side": side.value, "layers": [
        {"index": L.index, "bottom": L.bottom, "degree": L.degree, "payload": enc.formal_sum(L.payload),
         "supports": [enc.support(s) for s in L.payload.supports()]} for L in layers]}
    text = [f"layer {L.index}{' (bottom)' if L.bottom else ''}: "
            + (" + ".join(repr(t) for t in L.payload) or "0") for L in layers]
    return document(payload, enc), text, EXIT_OK


def cmd_quotient_check(args):
    delta = _load(args.delta, "segment")
    m2 = _load(args.m2, "multisegment")
    cert = quotient_obstruction(delta, m2, require_degenerate=args.require_degenerate)
    enc = Encoder()
    payload = {"command": "quotient-check", "certificate": enc.quotient_certificate(cert)}
    counterexample = cert.degenerate and not cert.obstructed
    text = [f"St({delta}) -> <{m2!r}>: {cert.verdict}",
            f"  right matches: {len(cert.right_matches)}, left matches: {len(cert.left_matches)}"]
    return document(payload, enc), text, EXIT_COUNTEREXAMPLE if counterexample else EXIT_OK


def cmd_ext_certify(args):
    m1 = _load(args.m1, "multisegment")
    m2 = _load(args.m2, "multisegment")
    cert = ext_vanishing_certificate(m1, m2, strict=not args.allow_nongeneric)
    enc = Encoder()
    tree = enc.certificate(cert)
    fail = cert.fail_node()
    path = [n.kind if n.kind != "STEP" else f"STEP({n.delta}, {n.variant.value})" for n in cert.nodes()]
    payload = {
        "command": "ext-certify",
        "m1": enc.multisegment(m1), "m2": enc.multisegment(m2),
        "verdict": "FAIL" if fail else "CERTIFIED",
        "depth": cert.depth(),
        "path": path,
        "fail": None if fail is None else tree_node(enc, fail),
    }
    if args.emit_tree:
        Path(args.emit_tree).write_text(dumps(document({"certificate": tree}, enc)))
        payload["tree_file"] = args.emit_tree
    else:
        payload["certificate"] = tree
    text = [f"{payload['verdict']} (depth {cert.depth()})"] + [f"  {p}" for p in path]
    return document(payload, enc), text, EXIT_COUNTEREXAMPLE if fail else EXIT_OK


def tree_node(enc: Encoder, node) -> dict:
    out = enc.certificate(node)
    out.pop("children", None)
    return out


def cmd_ep(args):
    r1, r2 = _load(args.rep1, "rep"), _load(args.rep2, "rep")
    enc = Encoder()
    value = ep_pairing(r1, r2)
    payload = {"command": "ep", "rep1": enc.rep(r1), "rep2": enc.rep(r2), "ep": value}
    return document(payload, enc), [f"EP = {value}"], EXIT_OK


def _laurent_vector(v) -> list:
    return [{"lambda": list(lam), "coeff": c.to_json()} for lam, c in v.items()]


def _matrix(mat) -> list:
    return [[[int(x.p), int(x.q)] for x in mat.row(r)] for r in range(mat.rows)]


def cmd_hecke(args):
    from .hecke import modules as hm
    if args.hecke_cmd is None:
        raise UsageError("hecke needs a subcommand: verify, sign-module, principal-series, central-quotient")
    if args.m < 1 or args.m > 3:
        raise DomainError("rank must be 1, 2 or 3")
    if args.hecke_cmd == "verify":
        rep = hm.verify_relations(args.m, args.trials, args.seed)
        payload = {"command": "hecke verify", "m": args.m, "trials": args.trials, "seed": args.seed,
                   "checks": rep.checks, "violations": rep.violations, "ok": rep.ok}
        text = [f"{name}: {n} checked" for name, n in rep.checks.items()]
        text += [f"VIOLATION {v}" for v in rep.violations] or ["all relations hold"]
        return {"schema": 1, **payload}, text, EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE
    if args.hecke_cmd == "sign-module":
        mod = hm.SignInducedModule(args.m)
        lam = _tuple(args.lam, int)
        out = mod.act_generator(args.action, mod.basis(lam))
        payload = {"command": "hecke sign-module", "m": args.m, "action": args.action,
                   "lambda": list(lam), "result": _laurent_vector(out)}
        text = [f"{args.action} . theta^{lam} (x) 1 = "
                + (" + ".join(f"({c}) theta^{mu}" for mu, c in out.items()) or "0")]
        return {"schema": 1, **payload}, text, EXIT_OK
    q = _rational(args.q)
    if args.hecke_cmd == "principal-series":
        chi = _tuple(args.chi)
        mod = hm.principal_series(args.m, chi, q)
        sd = hm.sign_isotypic_dim(mod)
        payload = {"command": "hecke principal-series", "m": args.m, "chi": [[c.numerator, c.denominator] for c in chi],
                   "q": [q.numerator, q.denominator], "dim": mod.dim, "sign_isotypic_dim": sd,
                   "basis": [list(w) for w in mod.labels], "T": [_matrix(t) for t in mod.T],
                   "theta": [_matrix(t) for t in mod.theta], "relation_violations": mod.relation_violations()}
        text = [f"dimension {mod.dim}, sign-isotypic dimension {sd}"]
        return {"schema": 1, **payload}, text, EXIT_OK
    orbit = _tuple(args.orbit)
    cq = hm.central_quotient(args.m, orbit, q)
    payload = {"command": "hecke central-quotient", "m": args.m,
               "orbit": [[c.numerator, c.denominator] for c in orbit], "q": [q.numerator, q.denominator],
               "dim": cq.dim, "sign_isotypic_dim": cq.sign_dim, "regular": cq.regular,
               "basis": [list(lam) for lam in cq.module.labels], "submodules": cq.submodules,
               "irreducible_quotients": cq.irreducible_quotients, "sign_quotients": cq.sign_quotients,
               "unique_sign_quotient": cq.unique_sign_quotient,
               "T": [_matrix(t) for t in cq.module.T], "theta": [_matrix(t) for t in cq.module.theta]}
    text = [f"dimension {cq.dim}, sign-isotypic dimension {cq.sign_dim}",
            "degenerate orbit: lattice not analysed" if not cq.regular
            else f"unique irreducible quotient containing the sign type: {cq.unique_sign_quotient}"]
    return {"schema": 1, **payload}, text, EXIT_OK


def _spec_from(args, max_degree: int) -> UniverseSpec:
    lo, hi = _window(args.window)
    lines = tuple(CuspidalLine(name) for name in args.lines.split(",")) if args.lines else None
    kw = {"lo": lo, "hi": hi, "step": _rational(args.step), "max_degree": max_degree}
    if lines:
        kw["lines"] = lines
    if getattr(args, "max_segments", None) is not None:
        kw["max_segments"] = args.max_segments
    return UniverseSpec(**kw)


def cmd_enumerate(args):
    n = args.degree_sum
    if n < 0:
        raise UsageError("--degree-sum must be non-negative")
    if args.mode == "list":
        spec = _spec_from(args, n)
        ms = enumerate_multisegments(spec)
        enc = Encoder()
        payload = {"command": "enumerate", "mode": "list", "spec": spec.to_json(), "digest": spec.digest(),
                   "count": len(ms), "multisegments": [enc.multisegment(m) for m in ms]}
        return document(payload, enc), [f"{len(ms)} multisegments"] + [repr(m) for m in ms], EXIT_OK
    # deg(m1) + deg(m2) = 2n + 1 <= N, so the larger datum has degree <= (N + 1) // 2
    spec = _spec_from(args, (n + 1) // 2)
    return _suite(args, args.mode, spec)


def cmd_suite(args):
    max_degree = args.max_degree
    if args.mode == "confluence" and args.max_segments is None:
        args.max_segments = 4
    if max_degree is None:
        max_degree = {"confluence": 4 * 9, "hecke": 0, "ep": 4}.get(args.mode, 6)
    return _suite(args, args.mode, _spec_from(args, max_degree))


def _suite(args, mode, spec):
    options = {"trials": args.trials, "sample": args.sample}
    report = run_suite(mode, spec, seed=args.seed, command=sys.argv[1:] if args.echo_argv else args.command_echo,
                       options=options, progress=log if args.verbose else None)
    report.details["jobs"] = _jobs(args.jobs)
    log(f"{mode}: {report.checked} cases in {report.wall_time:.2f}s")
    text = [f"mode {mode}: checked {report.checked}, certified {report.certified}, failed {report.failed}"]
    text += [f"  {k}: {v}" for k, v in sorted(report.verdicts.items())]
    return report.to_json(timing=args.timing), text, report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bzext", description="Segments, derivatives, branching certificates and Hecke checks.")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None, help=f"worker count (default from ${JOBS_ENV}, else 1)")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    d = sub.add_parser("derive", help="BZ derivative of an InducedRep")
    d.add_argument("rep")
    d.add_argument("--i", type=int, required=True)
    d.add_argument("--side", choices=("left", "right"), required=True)
    d.set_defaults(func=cmd_derive)

    r = sub.add_parser("recombine", help="canonical generic form")
    r.add_argument("multisegment")
    r.set_defaults(func=cmd_recombine)

    t = sub.add_parser("truncation-lemma", help="check the right-truncation lemma")
    t.add_argument("multisegment")
    t.add_argument("--i", type=int)
    t.add_argument("--all-i", action="store_true")
    t.set_defaults(func=cmd_truncation_lemma)

    rs = sub.add_parser("restrict", help="BZ filtration of the restriction to GL(n)")
    rs.add_argument("rep")
    rs.add_argument("--side", choices=("left", "right"), required=True)
    rs.set_defaults(func=cmd_restrict)

    qc = sub.add_parser("quotient-check", help="quotient obstruction for St(delta)")
    qc.add_argument("--delta", required=True)
    qc.add_argument("--m2", required=True)
    qc.add_argument("--require-degenerate", action="store_true", help="refuse a generic m2")
    qc.set_defaults(func=cmd_quotient_check)

    e = sub.add_parser("ext-certify", help="Ext-vanishing certificate")
    e.add_argument("--m1", required=True)
    e.add_argument("--m2", required=True)
    e.add_argument("--emit-tree", metavar="OUT")
    e.add_argument("--allow-nongeneric", action="store_true", help="accept a non-generic m2")
    e.set_defaults(func=cmd_ext_certify)

    ep = sub.add_parser("ep", help="Euler-Poincare pairing")
    ep.add_argument("rep1")
    ep.add_argument("rep2")
    ep.set_defaults(func=cmd_ep)

    h = sub.add_parser("hecke", help="affine Hecke algebra checks")
    hs = h.add_subparsers(dest="hecke_cmd", parser_class=_Parser)
    hv = hs.add_parser("verify")
    hv.add_argument("--m", type=int, required=True)
    hv.add_argument("--trials", type=int, default=1000)
    hm_ = hs.add_parser("sign-module")
    hm_.add_argument("--m", type=int, required=True)
    hm_.add_argument("--action", required=True, help="T<k>, theta<i> or theta<i>^-1")
    hm_.add_argument("--lambda", dest="lam", required=True)
    hp = hs.add_parser("principal-series")
    hp.add_argument("--m", type=int, required=True)
    hp.add_argument("--chi", required=True)
    hp.add_argument("--q", required=True)
    hc = hs.add_parser("central-quotient")
    hc.add_argument("--m", type=int, required=True)
    hc.add_argument("--orbit", required=True)
    hc.add_argument("--q", required=True)
    h.set_defaults(func=cmd_hecke, hecke_cmd=None)

    def harness_flags(x, window="0..4"):
        x.add_argument("--window", default=window)
        x.add_argument("--step", default="1/2")
        x.add_argument("--lines", help="comma-separated degree-1 line ids")
        x.add_argument("--trials", type=int, default=1000)
        x.add_argument("--sample", type=int, default=200, help="pairs replayed through full certificates")
        x.add_argument("--timing", action="store_true", help="include wall time in the report")
        x.add_argument("--verbose", action="store_true")
        x.set_defaults(echo_argv=True, command_echo=None)

    en = sub.add_parser("enumerate", help="exhaustive harness over a window")
    en.add_argument("--degree-sum", type=int, required=True)
    en.add_argument("--mode", choices=("ext", "quotient", "list"), default="list")
    harness_flags(en)
    en.set_defaults(func=cmd_enumerate, max_segments=None)

    su = sub.add_parser("suite", help="run one suite mode")
    su.add_argument("--mode", choices=MODES, required=True)
    su.add_argument("--max-degree", type=int)
    su.add_argument("--max-segments", type=int)
    harness_flags(su)
    su.set_defaults(func=cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    fmt = "json"
    try:
        args = parser.parse_args(argv)
        fmt = args.format
        if args.cmd is None:
            raise UsageError("a subcommand is required")
        payload, text, code = args.func(args)
    except (UsageError, SchemaError, DomainError) as e:
        err = {"schema": 1, "error": str(e), "kind": type(e).__name__}
        if isinstance(e, SchemaError):
            err["path"] = e.path
        if fmt == "json":
            sys.stdout.write(dumps(err))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "json":
        sys.stdout.write(dumps(payload))
    else:
        print("\n".join(text))
    return code


if __name__ == "__main__":
    sys.exit(main())
