from __future__ import annotations

import json
import subprocess
import sys
from collections import Counter

import jsonschema
import pytest

from veronese_braid.cli import main, render_markdown, run_verify
from veronese_braid.pipeline import RunResult, _schema, default_config_path
from veronese_braid.report import ClaimReport


def read(path):
    return json.loads(path.read_text())


def test_full_run_passes_and_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--out", str(a)]) == 0
    assert main(["verify", "--out", str(b)]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "report.md").read_bytes() == (b / "report.md").read_bytes()
    report = read(a / "report.json")
    jsonschema.validate(report, _schema("report.schema.json"))
    ids = [c["id"] for c in report["claims"]]
    assert len(ids) == len(set(ids))
    for q in ("q1", "q2", "q3", "q4"):
        assert next(c for c in report["claims"] if c["id"] == f"thm5.0.{q}")["status"] == "PASS"
    assumed = {c["id"] for c in report["claims"] if c["status"] == "ASSUMED"}
    assert assumed == {"5.4"} | {c for c in ids if c.startswith("5.5.")}


def test_filter(tmp_path):
    assert run_verify(filter="5.6.*", out=tmp_path) == 0
    claims = read(tmp_path / "report.json")["claims"]
    assert [c["id"] for c in claims] == [f"5.6.{r}" for r in
                                         ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")]


def test_filter_matching_nothing(tmp_path):
    assert run_verify(filter="nothing*", out=tmp_path) == 0
    assert read(tmp_path / "report.json")["claims"] == []


def test_invalid_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"tsystem": 1, "extra": True}))
    assert main(["verify", "--config", str(bad), "--out", str(tmp_path)]) != 0
    err = capsys.readouterr().err
    assert "axioms" in err and "tsystem" in err
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) != 0
    bad.write_text("{not json")
    assert main(["verify", "--config", str(bad)]) != 0


def test_relative_paths_and_overrides(tmp_path):
    data = default_config_path().parent
    for name in ("tsystem.json", "axioms.json"):
        (tmp_path / name).write_text((data / name).read_text())
    (tmp_path / "broken.json").write_text(json.dumps(
        {"rules": [{"target": 3, "actor": 1, "sign": 1, "rule": "fix"}]}))
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"tsystem": "tsystem.json", "axioms": "axioms.json"}))
    assert run_verify(cfg, filter="4.*", out=tmp_path / "ok") == 0
    cfg.write_text(json.dumps({"tsystem": "tsystem.json", "axioms": "axioms.json",
                               "action_overrides": "broken.json"}))
    assert run_verify(cfg, filter="4.6", out=tmp_path / "bad") == 1


def test_literal_convention_fails_honestly(tmp_path):
    assert run_verify(convention="literal-4.13", out=tmp_path) == 1
    statuses = {c["id"]: c["status"] for c in read(tmp_path / "report.json")["claims"]}
    assert statuses["5.7"] == "FAIL"


def test_exit_code_contract():
    def result(*pairs):
        return RunResult([ClaimReport(i, s) for i, s in pairs])

    assert result(("5.9", "DISCREPANCY")).exit_code() == 0
    assert result(("5.9", "DISCREPANCY")).exit_code(strict=True) == 1
    assert result(("5.6.i", "DISCREPANCY")).exit_code() == 1
    assert result(("5.6.i", "PASS_MOD_C")).exit_code() == 0
    assert result(("5.6.i", "PASS_MOD_C")).exit_code(strict=True) == 1
    assert result(("5.4", "ASSUMED")).exit_code(strict=True) == 0
    assert result(("4.4", "FAIL")).exit_code() == 1


def test_markdown_lists_every_claim():
    reps = [ClaimReport("5.1", "PASS", {"a": 1}, "n/a", ["step"])]
    md = render_markdown(reps, {"convention": "zeta-primary"})
    assert "| 5.1 | PASS |" in md and "## 5.1: PASS" in md and "step" in md


@pytest.mark.parametrize("argv, expected", [
    (["braid", "equal", "[1,2,1]", "[2,1,2]", "--n", "3"], "true"),
    (["braid", "equal", "[1,2]", "[2,1]", "--n", "3"], "false"),
    (["braid", "perm", "[1]", "--n", "2"], "(1 2)"),
    (["braid", "reduce", "[1,-1]", "--n", "2"], "[]"),
    (["braid", "reduce", '{"n": 4, "word": [1, 2, -2, 3]}'], "[1, 3]"),
    (["braid", "delta2", "--n", "3"], "[1, 2, 1, 2, 1, 2]"),
])
def test_braid_commands(argv, expected, capsys):
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == expected


def test_malformed_word(capsys):
    assert main(["braid", "perm", "[1,"]) == 2
    assert main(["braid", "perm", "[5]", "--n", "3"]) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "veronese_braid", "braid", "perm", "[2]", "--n", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "(2 3)"


def test_claim_ids_unique_in_full_run(full_run):
    counts = Counter(r.claim_id for r in full_run.reports)
    assert max(counts.values()) == 1
    for cid in ("5.1", "5.2", "5.3.ii", "5.3.iii", "5.4", "5.7", "5.8.i", "5.8.ii",
                "5.9", "5.10", "5.10.subst"):
        assert cid in counts
