"""Command-line front end: exit codes, report schema, determinism, dumps."""
import io
import json

import pytest

from yso5.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from yso5.report import SCHEMA, CheckResult, RunReport


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_so5_json(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = _run("verify", "so5", "--format", "json", "--out", str(path))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data == json.loads(path.read_text())
    assert data["schema"] == SCHEMA
    assert data["summary"]["total"] == {"pass": 180, "fail": 0, "measured": 0}
    assert all(set(r) >= {"suite", "check", "ref", "status"} for r in data["results"])


def test_markdown_output():
    code, out, _ = _run("verify", "ybe", "--N", "3")
    assert code == EXIT_OK
    assert out.startswith("# yso5 report") and out.rstrip().endswith("Result: PASS")
    assert "| ybe | 2 | 0 | 0 |" in out


def test_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert _run("verify", "so5", "--out", str(p))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    (),
    ("verify",),
    ("verify", "nope"),
    ("verify", "ybe", "--grid", "3"),
    ("verify", "ybe", "--x", "abc"),
    ("verify", "rtt", "--sites", "2", "--thetas", "0"),
    ("verify", "drinfeld", "--tables", "99"),
    ("verify", "fock", "--L", "0"),
])
def test_usage_errors(argv):
    assert _run(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize("L", ["4", "9"])
def test_budget_exceeded(L):
    code, _, err = _run("verify", "fock", "--L", L)
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("YSO5_MEM_BUDGET_MB", "1")
    assert _run("verify", "fock", "--L", "2")[0] == EXIT_BUDGET


def test_failing_report_exit_code():
    rep = RunReport({"command": "synthetic"})
    rep.add([CheckResult("x", "c", "r", "fail", {"row": 0})])
    assert not rep.ok
    assert "Result: FAIL" in rep.to_markdown()
    with pytest.raises(ValueError):
        CheckResult("x", "c", "r", "fail", None)
    with pytest.raises(ValueError):
        CheckResult("x", "c", "r", "maybe")
    assert EXIT_FAIL == 1


def test_dump_gens():
    code, out, _ = _run("dump", "gens", "--rep", "vector")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["dim"] == 5 and len(data["generators"]) == 10
    code, md, _ = _run("dump", "gens", "--format", "md")
    assert code == EXIT_OK and md.startswith("# spinor generators (dim 4)")


def test_dump_relations():
    code, out, _ = _run("dump", "relations", "--imax", "1", "--jmax", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["relations"]) == 3691
    code, md, _ = _run("dump", "relations", "--format", "md")
    assert code == EXIT_OK and md.startswith("# 3691 relations")
