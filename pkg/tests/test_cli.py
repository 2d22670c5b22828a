import json
import subprocess
import sys

import pytest

from bzext.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def js(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


SEG = lambda a, b: {"line": "rho", "a": a, "b": b}  # noqa: E731


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


def test_derive(capsys, files):
    rep = files("r.json", {"schema": 1, "flavor": "ST", "m": {"segments": [SEG([-1, 2], [1, 2])]}})
    code, out = js(capsys, "derive", rep, "--i", "1", "--side", "right")
    assert code == 0 and out["schema"] == 1
    assert out["derivative"]["terms"] == [
        {"flavor": "ST", "m": {"segments": [SEG([1, 2], [1, 2])]}, "twist": [0, 1]}]


def test_recombine(capsys, files):
    m = files("m.json", {"segments": [SEG(0, 1), SEG(1, 2)]})
    code, out = js(capsys, "recombine", m)
    assert code == 0
    assert out["canonical"] == {"segments": [SEG([0, 1], [2, 1]), SEG([1, 1], [1, 1])]}
    assert len(out["steps"]) == 1


def test_truncation_lemma(capsys, files):
    m = files("m.json", {"segments": [SEG(0, 3), SEG(2, 2)]})
    code, out = js(capsys, "truncation-lemma", m, "--i", "2")
    assert code == 0 and out["lemma_holds"] is True and out["witness"] is None
    code, out = js(capsys, "truncation-lemma", m, "--all-i")
    assert [r["i"] for r in out["results"]] == list(range(6))


def test_restrict_text(capsys, files):
    rep = files("r.json", {"flavor": "ST", "m": {"segments": [SEG([-1, 2], [1, 2])]}})
    code, out = run(capsys, "--format", "text", "restrict", rep, "--side", "left")
    assert code == 0
    assert out.splitlines()[0] == "layer 0: St{rho[-1/2, -1/2]} nu^-1/2"


def test_quotient_check(capsys, files):
    d = files("d.json", SEG(-1, 1))
    m2 = files("m2.json", {"segments": [SEG([1, 2], [3, 2])]})
    code, out = js(capsys, "quotient-check", "--delta", d, "--m2", m2, "--require-degenerate")
    assert code == 0
    assert out["certificate"]["verdict"] == "OBSTRUCTED"
    assert out["certificate"]["right_matches"] and not out["certificate"]["left_matches"]


def test_ext_certify_and_tree(capsys, files, tmp_path):
    m1 = files("m1.json", {"segments": [SEG(-1, 1)]})
    m2 = files("m2.json", {"segments": [SEG([1, 2], [3, 2])]})
    tree = tmp_path / "tree.json"
    code, out = js(capsys, "ext-certify", "--m1", m1, "--m2", m2, "--emit-tree", str(tree))
    assert code == 0 and out["verdict"] == "CERTIFIED" and out["depth"] == 3
    doc = json.loads(tree.read_text())
    assert doc["schema"] == 1 and doc["certificate"]["kind"] == "STEP"


def test_ext_certify_fail_exit_code(capsys, files):
    m1 = files("m1.json", {"segments": [SEG(0, 2)]})
    m2 = files("m2.json", {"segments": [SEG("3/2", "3/2"), SEG("5/2", "5/2")]})
    code, _ = run(capsys, "ext-certify", "--m1", m1, "--m2", m2)
    assert code == 1  # non-generic m2 is refused by default
    code, out = js(capsys, "ext-certify", "--m1", m1, "--m2", m2, "--allow-nongeneric")
    assert code == 2 and out["verdict"] == "FAIL"
    assert out["fail"]["linked_pair"]["route"] in ("spectral", "direct")


def test_ep(capsys, files):
    a = files("a.json", {"flavor": "ST", "m": {"segments": [SEG(0, 1)]}})
    b = files("b.json", {"flavor": "ZEL", "m": {"segments": [SEG(0, 1)]}})
    assert js(capsys, "ep", a, a)[1]["ep"] == 1
    assert js(capsys, "ep", a, b)[1]["ep"] == 0


def test_hecke_commands(capsys):
    code, out = js(capsys, "hecke", "verify", "--m", "2", "--trials", "10")
    assert code == 0 and out["ok"]
    code, out = js(capsys, "hecke", "sign-module", "--m", "2", "--action", "T1", "--lambda", "(1,0)")
    assert out["result"] == [{"lambda": [0, 1], "coeff": [[0, [-1, 1]]]},
                             {"lambda": [1, 0], "coeff": [[0, [-1, 1]], [1, [1, 1]]]}]
    code, out = js(capsys, "hecke", "central-quotient", "--m", "2", "--orbit", "1,3", "--q", "4")
    assert (out["dim"], out["sign_isotypic_dim"], out["unique_sign_quotient"]) == (2, 1, True)
    code, out = js(capsys, "hecke", "principal-series", "--m", "3", "--chi", "1,2,5", "--q", "4")
    assert out["dim"] == 6 and out["sign_isotypic_dim"] == 1 and out["relation_violations"] == []


def test_enumerate_list_and_suite(capsys):
    code, out = js(capsys, "enumerate", "--degree-sum", "2", "--window", "0..1", "--step", "1")
    assert code == 0 and out["count"] == 7
    code, out = js(capsys, "--jobs", "3", "enumerate", "--degree-sum", "5", "--window", "0..2", "--mode", "ext")
    assert code == 0 and out["counts"]["failed"] == 0 and out["details"]["jobs"] == 3
    code, out = js(capsys, "suite", "--mode", "duality", "--window", "0..1", "--max-degree", "3")
    assert code == 0 and out["mode"] == "duality"


def test_jobs_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BZEXT_JOBS", "4")
    _, out = js(capsys, "suite", "--mode", "quotient", "--window", "0..1", "--max-degree", "3")
    assert out["details"]["jobs"] == 4


def test_suite_output_is_byte_stable(capsys):
    argv = ("suite", "--mode", "truncation-lemma", "--window", "0..2", "--max-degree", "4")
    assert run(capsys, *argv) == run(capsys, *argv)


@pytest.mark.parametrize("argv", [
    (),
    ("frobnicate",),
    ("derive",),
    ("hecke",),
    ("enumerate", "--degree-sum", "3", "--window", "0-2"),
    ("hecke", "sign-module", "--m", "2", "--action", "T5", "--lambda", "0,0"),
])
def test_usage_errors_exit_one(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 1
    assert json.loads(out)["schema"] == 1


def test_schema_error_reports_path(capsys, files):
    bad = files("bad.json", {"flavor": "ST", "m": {"segments": [{"line": "rho", "a": 0.5, "b": 1}]}})
    code, out = js(capsys, "derive", bad, "--i", "1", "--side", "left")
    assert code == 1
    assert out["path"].endswith(":$.m.segments[0].a")


def test_inline_json_and_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bzext", "--format", "text", "recombine",
         '{"segments": [{"line": "rho", "a": 0, "b": 1}, {"line": "rho", "a": 2, "b": 3}]}'],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("{rho[0, 1], rho[2, 3]} -> {rho[0, 3]}")
