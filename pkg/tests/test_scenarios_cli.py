import json
import subprocess
import sys

import pytest

from supergc import scenarios as SC
from supergc.cli import curvature_document, main, verify_document
from supergc.report import Check, IoError, Report, emit, to_json, to_text
from supergc.solutions import solution_text


def test_unknown_scenario():
    with pytest.raises(SC.UnknownScenario):
        SC.run_scenario("nope")


def test_reports_are_deterministic():
    a = to_json(SC.run_all(["tables", "bch", "solutions"]))
    b = to_json(SC.run_all(["tables", "bch", "solutions"]))
    assert a == b


def test_json_schema_fields():
    doc = json.loads(to_json([SC.run_scenario("geometry")]))
    assert doc["schema"] == "supergc-report" and doc["version"] == 1
    rep = doc["reports"][0]
    assert rep["scenario"] == "geometry" and rep["status"] == "pass"
    assert {"name", "status"} <= set(rep["checks"][0])


def test_failing_check_carries_forms():
    rep = Report("x", [Check("c", False, expected="1", actual="2", witness="1")])
    doc = json.loads(to_json([rep]))
    c = doc["reports"][0]["checks"][0]
    assert c["expected"] == "1" and c["actual"] == "2"
    assert "FAIL c" in to_text([rep])


def test_emit_exit_codes(tmp_path):
    good = Report("g", [Check("a", True)])
    bad = Report("b", [Check("a", False)])
    assert emit(good, "json", str(tmp_path / "g.json")) == 0
    assert emit([good, bad], "text", str(tmp_path / "b.txt")) == 1
    with pytest.raises(IoError):
        emit(good, "text", str(tmp_path / "missing" / "x.txt"))


def test_verify_document_goals():
    rep = verify_document(solution_text("g41", 1))
    assert rep.ok and len(rep.checks) == 4
    rep = verify_document("even a; goal a;")
    assert not rep.ok


def test_curvature_document():
    rep = curvature_document(solution_text("g35", 1))
    assert rep.checks[0].actual == "0" and rep.ok


def test_cli_run_and_catalog(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "geometry", "--format", "json", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"
    assert main(["catalog", "g41"]) == 0
    assert "g41: C0 + eps*P+" in capsys.readouterr().out
    assert main(["catalog", "g999"]) == 2


def test_cli_verify_file(tmp_path):
    p = tmp_path / "g14.sgc"
    p.write_text(solution_text("g14", 1))
    assert main(["verify", str(p)]) == 0
    assert main(["curvature", str(p)]) == 0
    p.write_text("even a; goal b;")
    assert main(["verify", str(p)]) == 2


def test_cli_bch(capsys):
    assert main(["bch", "--x", "alpha*K1", "--y", "P+", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reports"][0]["checks"][0]["name"] == "closed form"


def test_cli_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "supergc.cli", "run", "exp-expansion"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "[PASS] exp-expansion" in r.stdout
