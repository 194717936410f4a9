import json
import shutil
import subprocess
import sys

import pytest

import codepth3.toralg
from codepth3.cli import (
    EXIT_INPUT,
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_UNCLASSIFIED,
    default_expectations,
    main,
)
from codepth3.toralg import ClassLabel, ClassificationReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_b4(capsys):
    code, out, _ = run(capsys, "classify", "b4", "--json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["class"] == {"name": "B", "param": None}
    assert d["type"] == 3 and d["mu"] == 7 and d["ranks"] == [7, 9, 3]


def test_classify_text_output(capsys):
    code, out, _ = run(capsys, "classify", "g1")
    assert code == EXIT_OK
    assert "class:   G(2)" in out and "mu(I):   5" in out


def test_classify_tables(capsys):
    code, out, _ = run(capsys, "classify", "b1", "--tables")
    assert code == EXIT_OK
    assert "H1 representatives:" in out and "products H1*H2" in out
    assert out.count("  e") >= 4


def test_classify_rejected(capsys):
    code, out, err = run(capsys, "classify", "--ideal", "(x)")
    assert code == EXIT_REJECTED
    assert "EmbeddingDimDrop" in err and "EmbeddingDimDrop" in out
    code, _, err = run(capsys, "classify", "--ideal", "x^3, y^3", "--quiet")
    assert code == EXIT_REJECTED and "PositiveDepth" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--ideal", "x^2 + y"],
    ["classify", "--ideal", "x^2 +"],
    ["classify", "--ideal", "w^2"],
    ["classify", "--ideal", "x^2", "--char", "4"],
    ["classify", "--ideal", "a^2, b^2", "--vars", "a,b"],
    ["classify", "no/such/file.ideal"],
    ["classify"],
])
def test_classify_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.startswith("error:")


def test_classify_across_characteristics(capsys):
    reports = []
    for p in ("101", "32003"):
        code, out, _ = run(capsys, "classify", "g1", "--json", "--char", p)
        assert code == EXIT_OK
        reports.append(json.loads(out))
    a, b = reports
    assert a["char"] == 101 and b["char"] == 32003
    for key in ("class", "type", "mu", "ranks", "pqr", "hilbert"):
        assert a[key] == b[key]


def test_classify_unclassified(capsys, monkeypatch):
    monkeypatch.setattr(codepth3.toralg, "classify", lambda inv: ClassLabel("UNCLASSIFIED", inv.as_tuple()))
    code, _, err = run(capsys, "classify", "g1", "--quiet")
    assert code == EXIT_UNCLASSIFIED
    assert "unclassified" in err


def test_classify_truncated_bound_is_invariant_violation(capsys):
    code, out, err = run(capsys, "classify", "g1", "--max-degree", "7", "--json")
    assert code == EXIT_INVARIANT
    assert json.loads(out)["checks"]["euler"] == "fail"


def test_classify_file(capsys, tmp_path):
    f = tmp_path / "ci.ideal"
    f.write_text("ring: a, b, c\nchar: 101\nideal: a^3, b^3, c^3\n")
    code, out, _ = run(capsys, "classify", str(f), "--json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["class"] == {"name": "C", "param": 3} and d["char"] == 101


def test_corpus_default(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == EXIT_OK
    assert "8/8 pass" in out


def test_corpus_perturbed_expectations(capsys, tmp_path):
    exp = default_expectations()
    exp["g3"]["mu"] = 99
    exp["b2"]["hilbert"][3] += 1
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(exp))
    code, out, err = run(capsys, "corpus", "--expectations", str(f))
    assert code != EXIT_OK
    assert "g3: mu" in err and "b2: hilbert" in err
    assert "6/8 pass" in out


def test_corpus_json_schema(capsys):
    code, out, _ = run(capsys, "corpus", "--json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["passed"] == d["total"] == 8
    assert [r["name"] for r in d["results"]] == ["g1", "g2", "g3", "g4", "b1", "b2", "b3", "b4"]
    for r in d["results"]:
        assert r["pass"] and r["mismatches"] == []
        rep = ClassificationReport.from_json(r["report"])
        assert rep.to_json() == r["report"]
        assert {"char", "mu", "type", "ranks", "hilbert", "pqr", "class", "gate", "checks"} <= set(r["report"])


def test_corpus_in_other_characteristic(capsys):
    code, out, _ = run(capsys, "corpus", "--char", "65537", "--quiet")
    assert code == EXIT_OK and out == ""


def test_verify_g2(capsys):
    code, out, _ = run(capsys, "verify", "g2")
    assert code == EXIT_OK
    assert "1 - 6 + 7 - 2 = 0" in out
    assert "FAIL" not in out


def test_verify_b1(capsys):
    code, out, _ = run(capsys, "verify", "b1", "--json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["euler_sum"] == "1 - 4 + 4 - 1 = 0"
    assert all(v == "pass" for v in d["checks"].values())


def test_verify_truncated_bound(capsys):
    code, out, err = run(capsys, "verify", "g1", "--max-degree", "7")
    assert code == EXIT_INVARIANT
    assert "InvariantViolation" in err and "euler" in err
    assert "1 - 5 + 6 - 0 = 2" in out


def test_verify_rejected(capsys):
    code, _, _ = run(capsys, "verify", "--ideal", "x^3, y^3")
    assert code == EXIT_REJECTED


def test_output_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "classify", "g4", "--json", "--tables")
        outs.append(out)
    assert outs[0] == outs[1]


def test_console_script():
    exe = shutil.which("codepth3")
    cmd = [exe] if exe else [sys.executable, "-m", "codepth3.cli"]
    res = subprocess.run(cmd + ["classify", "b2", "--json"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["class"]["name"] == "B"
    res = subprocess.run(cmd + ["classify", "--ideal", "(x)"], capture_output=True, text=True)
    assert res.returncode == 2
