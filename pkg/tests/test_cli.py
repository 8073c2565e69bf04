from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from weightk.cli import main
from weightk.corpus import builtin_corpus_dir

EXPR = builtin_corpus_dir() / "expressions"
CX = builtin_corpus_dir() / "complexes"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_class(capsys):
    code, out, _ = run(capsys, "class", EXPR / "Gm.json", "--mode", "c")
    assert code == 0 and "-1[Z@0] +1[Z@2]" in out
    code, out, _ = run(capsys, "class", EXPR / "P1.json", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "motive"


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", EXPR / "E.json", "--n", "2", "--ell", "2")
    assert code == 0 and "+10[Z] +1[Z/2]" in out
    code, out, _ = run(capsys, "euler", EXPR / "P2.json")
    assert code == 0 and "5 passed" in out


def test_wss(capsys):
    code, out, _ = run(capsys, "wss", CX / "Gm.json", "--rational")
    assert code == 0
    assert "E2[-1,2] = Q" in out and "H^1 = Q" in out
    code, out, _ = run(capsys, "wss", CX / "Gm.json", "--format", "json")
    assert json.loads(out)["degenerate"] is True


def test_check_thm234(capsys):
    code, out, _ = run(capsys, "check", "thm234", builtin_corpus_dir())
    assert code == 0 and "0 failed" in out


def test_count(capsys):
    code, out, _ = run(capsys, "count", EXPR / "Gm.json", "--q", "5")
    assert code == 0 and "4" in out
    code, out, _ = run(capsys, "count", EXPR / "C1.json", "--q", "3")
    assert code == 2


def test_khom(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"ring": "Z", "support": [0, 1], "terms": {"0": 1, "1": 1}, "diffs": {"0": [[2]]}}))
    code, out, _ = run(capsys, "khom", p, "--functor", "id", "--functor", "Z/2")
    assert code == 0
    assert "H(id) 0:0 1:Z/2" in out and "H((x)Z/2) 0:Z/2 1:Z/2" in out
    code, out, _ = run(capsys, "khom", p, "--format", "json")
    data = json.loads(out)
    assert data["homology"]["id"] == {"0": "0", "1": "Z/2"} and data["contractible"] is False
    p.write_text(json.dumps({"ring": "Z", "terms": {"0": 1, "1": 1}, "diffs": {"0": [[1]]}}))
    code, out, _ = run(capsys, "khom", p)
    assert code == 0 and "contractible yes" in out


def test_suite_exit_codes(capsys):
    code, out, _ = run(capsys, "suite", "k0", "--cases", "5")
    assert code == 0 and "k0.triangle_additivity" in out
    code, _, err = run(capsys, "suite", "bogus")
    assert code == 2 and "unknown suite" in err
    code, _, _ = run(capsys, "suite", "k0", "--cases", "0")
    assert code == 2


def test_suite_json_and_timings(capsys):
    code, out, _ = run(capsys, "suite", "measures", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and "seconds" not in data["entries"][0]
    code, out, _ = run(capsys, "suite", "measures", "--format", "json", "--timings")
    assert "seconds" in json.loads(out)["entries"][0]


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "class", tmp_path / "missing.json")
    assert code == 2 and "missing.json" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "atom", "name": "X", "ell": 2, "dim": 1, "components": 1,
                               "H": {"0": "Z", "1": "Z/2", "2": "Z"}}))
    code, _, err = run(capsys, "class", bad)
    assert code == 2 and "H1-torsion-free" in err
    code, _, _ = run(capsys, "wss", EXPR / "Gm.json")
    assert code == 2
    bad.write_text(json.dumps({"ring": "Z", "terms": {"0": 1, "1": 1, "2": 1}, "diffs": {"0": [[1]], "1": [[1]]}}))
    code, _, _ = run(capsys, "khom", bad)
    assert code == 2


def test_identity_failure_exit_code(capsys, tmp_path):
    # a Brauer input that disagrees with F^3 makes the corpus check fail
    d = tmp_path / "corpus"
    shutil.copytree(builtin_corpus_dir(), d)
    (d / "brauer" / "pt.json").write_text(json.dumps(
        {"kind": "brauer", "name": "pt", "motive": {"expr": {"kind": "atom", "name": "pt"}}, "input": "Z/2"}))
    code, out, _ = run(capsys, "check", "thm234", d)
    assert code == 1 and "FAIL  thm234.brauer.pt" in out


@pytest.mark.skipif(shutil.which("weightk") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["weightk", "class", str(EXPR / "A3.json"), "--mode", "c"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "+1[Z@6]" in res.stdout
