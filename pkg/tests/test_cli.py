from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path


from walkerry.cli import EXIT_CONDITIONAL, EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_USAGE, run
from walkerry.scenario import parse_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def walkerry(*argv, **kw):
    return subprocess.run(
        [sys.executable, "-m", "walkerry", *argv], capture_output=True, text=True, env={**os.environ, "NO_COLOR": "1", **kw}
    )


def test_check_e1_passes(capsys):
    assert run(["check", str(FIXTURES / "ex-E1.json"), "--samples", "16"]) == EXIT_PASS
    report = json.loads(capsys.readouterr().out)
    assert report["overall"] == "pass"
    assert report["name"] == "ex-E1"
    assert set(report["checks"]["ry"]["components"]) == {"11", "12", "13", "22", "23", "33"}


def test_check_c1_is_conditional_then_fails_numerically(capsys):
    path = str(FIXTURES / "ex-C1.json")
    assert run(["check", path]) == EXIT_CONDITIONAL
    assert run(["check", path, "--numeric"]) == EXIT_FAIL
    capsys.readouterr()


def test_check_text_format_and_quiet(capsys):
    path = str(FIXTURES / "ex-C2.json")
    assert run(["check", path, "--format", "text"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "pass" in out and "\x1b[" not in out
    assert run(["check", path, "--quiet"]) == EXIT_PASS
    assert capsys.readouterr().out == ""


def test_check_input_errors(tmp_path, capsys):
    assert run(["check", str(tmp_path / "missing.json")]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(["check", str(bad)]) == EXIT_INPUT
    doc = json.loads((FIXTURES / "ex-E1.json").read_text())
    doc["f"] = "x+*y"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert run(["check", str(bad)]) == EXIT_INPUT
    assert "parse error" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run(["check"]) == EXIT_USAGE
    assert run(["check", "x.json", "--samples", "0"]) == EXIT_USAGE
    assert run(["reproduce", "nope"]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    capsys.readouterr()


def test_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["check", str(FIXTURES / "ex-C2.json"), "--out", str(out)]) == EXIT_PASS
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["overall"] == "pass"


def test_seed_override_changes_only_sampling(capsys):
    path = str(FIXTURES / "ex-E1.json")
    run(["check", path, "--seed", "7"])
    a = json.loads(capsys.readouterr().out)
    assert a["sampling"]["seed"] == 7


def test_list(capsys):
    assert run(["list", "--format", "text"]) == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 8 and lines[0].startswith("ex-thm1-plus\t")


def test_reproduce_single_entry(capsys):
    assert run(["reproduce", "ex-fin"]) == EXIT_PASS
    doc = json.loads(capsys.readouterr().out)
    assert doc["matched"] == doc["total"] == 1
    assert doc["entries"][0]["diagnostics"][0]["matches_closed_form"]


def test_reproduce_all_subprocess_is_byte_identical():
    first = walkerry("reproduce", "all")
    second = walkerry("reproduce", "all")
    assert first.returncode == second.returncode == EXIT_PASS, first.stderr
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    assert (doc["matched"], doc["total"]) == (8, 8)


def test_reproduce_text(capsys):
    assert run(["reproduce", "all", "--format", "text"]) == EXIT_PASS
    assert capsys.readouterr().out.rstrip().endswith("8/8 expected verdicts matched")


def test_build_writes_scenario_and_constraints(tmp_path, capsys):
    spec = tmp_path / "c2.json"
    spec.write_text(
        json.dumps(
            {
                "name": "my-c2",
                "epsilon": 1,
                "beta": "free",
                "lambda": "1",
                "mu": "0",
                "inputs": {"Z1": "1", "Z2": "0", "Z3": "z^2", "xi": "2*z*y + 2*z^2 + b0"},
            }
        ),
        encoding="utf-8",
    )
    out = tmp_path / "built.json"
    assert run(["build", "c2", str(spec), "--out", str(out)]) == EXIT_PASS
    sc = parse_scenario(out.read_bytes())
    assert sc.name == "my-c2"
    cons = json.loads((tmp_path / "built.constraints.json").read_text())
    assert [c["name"] for c in cons["constraints"]] == ["l6"]
    assert cons["constraints"][0]["expr"] == "0"
    # the built document verifies
    assert run(["check", str(out)]) == EXIT_PASS
    capsys.readouterr()


def test_build_errors(tmp_path, capsys):
    spec = tmp_path / "t2.json"
    spec.write_text(json.dumps({"mu": "0", "inputs": {"a": "0", "b": "0", "c": "0", "v": "0", "xi": "0"}}))
    assert run(["build", "t2", str(spec)]) == EXIT_INPUT
    assert "mu" in capsys.readouterr().err
    spec.write_text(json.dumps({"inputs": {"a": "0"}}))
    assert run(["build", "t2", str(spec)]) == EXIT_INPUT
    spec.write_text(json.dumps({"gamma": "1"}))
    assert run(["build", "t2", str(spec)]) == EXIT_INPUT
    assert run(["build", "no-such-family", str(spec)]) == EXIT_USAGE
    capsys.readouterr()


def test_console_entry_point_runs():
    proc = walkerry("--version")
    assert proc.returncode == 0
    assert proc.stdout.startswith("walkerry ")
