from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from zjones import acceptance
from zjones.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_series_json(capsys):
    code, out = run(capsys, "series", "--knot", "fig8", "--order", "4")
    assert code == 0
    d = json.loads(out)
    assert d["exact"] and d["text"][2] == "25/24*s^2 - 25/24"


def test_series_csv(capsys):
    code, out = run(capsys, "series", "--knot", "trefoil", "--order", "3", "--colour", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["n", "coefficient"] and rows[1] == ["0", "1"] and len(rows) == 5


def test_diagnose_csv_columns(capsys):
    code, out = run(capsys, "diagnose", "--knot", "torus(2,3)", "--colour", "1/2", "--order", "12",
                    "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["n", "coefficient", "float_value", "borel_coefficient", "root_test"]
    assert len(rows) == 14


def test_weight(capsys):
    code, out = run(capsys, "weight", "--diagram", "1 2 1 2", "--oracle")
    from zjones.chords import casimir_to_s, cv_weight, parse_canonicalize
    d = json.loads(out)
    assert code == 0
    assert d["oracle"] == str(casimir_to_s(cv_weight(parse_canonicalize("1 2 1 2"))))


def test_resum_compare(capsys):
    code, out = run(capsys, "resum", "--knot", "torus(2,3)", "--colour", "1/2", "--h", "0.3", "--compare")
    d = json.loads(out)
    v = d["resum"]["value"]["re"]
    assert code == 0 and abs(v - d["reference"]["quadrature"]["value"]["re"]) < 1e-9


def test_resum_branches(capsys):
    code, out = run(capsys, "resum", "--knot", "torus(2,3)", "--colour", "1/2", "--h=-0.15", "--branches")
    d = json.loads(out)
    a, b = (complex(r["value"]["re"], r["value"]["im"]) for r in d["branches"])
    assert code == 0 and [r["branch"] for r in d["branches"]] == [0, 1]
    assert abs(a - b.conjugate()) < 1e-12


def test_lorentz_rep(capsys):
    code, out = run(capsys, "lorentz", "--rep", "sl2r:principal:s=2i:eps=0")
    assert code == 0 and json.loads(out)["colour"]["s"] == {"re": 0.0, "im": 2.0}


def test_oracle_compare(capsys):
    code, out = run(capsys, "oracle", "--knot", "trefoil", "--order", "8", "--compare")
    assert code == 0 and json.loads(out)["matches_habiro"] is True


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "z.cfg"
    cfg.write_text("# settings\norder = 3\n")
    code, out = run(capsys, "series", "--knot", "trefoil", "--config", str(cfg))
    assert code == 0 and json.loads(out)["order"] == 3
    cfg.write_text("colour = 3\n")
    code, _ = run(capsys, "series", "--knot", "trefoil", "--config", str(cfg))
    assert code == 3


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("ZJONES_THREADS", "4")
    _, out = run(capsys, "series", "--knot", "unknot", "--order", "2")
    assert json.loads(out)["config"]["threads"] == 4


@pytest.mark.parametrize("argv, code", [
    (["frobnicate"], 2),
    ([], 2),
    (["series"], 3),
    (["series", "--knot", "torus(2,4)"], 3),
    (["series", "--knot", "trefoil", "--order", "-1"], 3),
    (["weight", "--diagram", "1 2 1"], 3),
    (["resum", "--knot", "torus(2,3)", "--colour", "1/2", "--h", "0.3", "--theta", "1.5"], 3),
    (["resum", "--knot", "fig8", "--colour", "1/2", "--h", "0.3"], 3),
    (["diagnose", "--knot", "trefoil", "--colour", "1/2", "--order", "5"], 3),
    (["lorentz", "--rep", "sl2r:discrete:m=2"], 3),
    (["weight", "--diagram", "1 2 3 4 5 6 1 2 3 4 5 6", "--oracle"], 4),
])
def test_exit_codes(capsys, argv, code):
    got, out = run(capsys, *argv)
    assert got == code
    if out.strip():
        assert json.loads(out)["code"] == code


def test_selftest_failure_exit(monkeypatch, capsys):
    monkeypatch.setattr(acceptance, "run", lambda cid: acceptance.Criterion(cid, "forced", False, {"x": 1}, 0.0))
    code, out = run(capsys, "selftest", "--only", "A1")
    assert code == 5 and "FAIL" in out


def test_deterministic_output():
    cmd = [sys.executable, "-m", "zjones", "diagnose", "--knot", "torus(2,5)", "--colour", "1/2", "--order", "20"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
