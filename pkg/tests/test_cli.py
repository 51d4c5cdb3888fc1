import json
import subprocess
import sys

import pytest

from sigmaheat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_text(capsys):
    code, out, _ = run(capsys, "gen", "--genus", "1")
    assert code == 0
    assert "H_0 = z1 d1 - 1" in out
    assert "H_2 = 1/2 d1^2 - 1/6 l4 z1^2" in out


def test_gen_json_only(capsys):
    code, out, _ = run(capsys, "gen", "--genus", "2", "--format", "json", "--only", "1,3")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["k"] for r in rows] == [1, 3]
    assert set(rows[0]) == {"k", "L", "H", "Q"}


def test_verify_genus_two(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "2", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    status = {}
    for r in rows:
        status.setdefault(r["check"], set()).add(r["status"])
    assert status["lemma33"] == {"pass"}
    assert status["q-structure"] == {"pass"}
    assert status["golden"] == {"pass"}
    assert rows[-1]["check"] == "summary"


def test_verify_reports_typos(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "4", "--format", "json", "--checks", "golden,derivations")
    summary = json.loads(out.splitlines()[-1])
    assert code == 0
    assert len(summary["typo_candidates"]) == 4
    assert summary["reported"] == 1


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "--genus", "2", "1", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass"
    assert data["expansion"] == {"Q0": "8/5*l6", "Q2": "-8/5*l4", "Q6": "2"}


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "--genus", "4", "--only", "0")
    assert code == 0
    assert "scriptL_0 = L0 - z1 d1 - 3 z3 d3 - 5 z5 d5 - 7 z7 d7" in out
    assert "w_{0,3} = 3 psi{3}" in out


def test_fixtures_verb(capsys, tmp_path):
    out_file = tmp_path / "report.jsonl"
    code, out, _ = run(capsys, "fixtures", "--genus", "3", "--format", "json", "--out", str(out_file))
    rows = [json.loads(line) for line in out_file.read_text().splitlines()]
    assert code == 0 and out == ""
    assert rows[0]["check"] == "fixtures" and rows[0]["blocks"] == 6


def test_failure_exit_code(capsys, tmp_path):
    (tmp_path / "g1").mkdir()
    (tmp_path / "g1" / "H.txt").write_text("genus 1, H_{0}\nz1 d1 + 1\n")
    code, out, _ = run(capsys, "fixtures", "--genus", "1", "--root", str(tmp_path), "--format", "json")
    assert code == 1
    assert json.loads(out.splitlines()[-1])["failed"] == 1


def exit_code(argv):
    """``main``'s return value, or the code argparse exits with."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.mark.parametrize("argv", [
    ["gen", "--genus", "0"],
    ["gen", "--genus", "2", "--only", "4"],
    ["bracket", "--genus", "2", "0", "9"],
    ["verify", "--genus", "1", "--checks", "nope"],
    ["fixtures", "--genus", "7"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert exit_code(argv) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sigmaheat", "gen", "--genus", "1", "--only", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "H_0 = z1 d1 - 1" in proc.stdout
