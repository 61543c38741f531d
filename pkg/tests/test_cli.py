from __future__ import annotations

import json

from qsa.circuit_io import dumps, load
from qsa.cli import main


def test_build_phimac(tmp_path, capsys):
    out = tmp_path / "m.txt"
    assert main(["build", "phimac", "--n", "3", "--a", "5", "--out", str(out)]) == 0
    c = load(out)
    assert len(c.gates) == 48 and all(len(g.qubits) == 2 for g in c.gates)
    assert dumps(c) == out.read_text()


def test_build_qft_stdout(capsys):
    assert main(["build", "qft", "--width", "1"]) == 0
    assert "\nh 0\n" in capsys.readouterr().out


def test_build_divider_width(tmp_path):
    out = tmp_path / "d.txt"
    assert main(["build", "gmphidiv", "--n", "4", "--d", "5", "--mode", "constrained", "--out", str(out)]) == 0
    assert load(out).width == 29


def test_verify_commands(capsys):
    assert main(["verify", "phimulmod", "--n", "4", "--N", "15", "--a", "7", "--exhaustive"]) == 0
    assert main(["verify", "phiadd", "--width", "2", "--k", "0", "--exhaustive"]) == 0
    assert main(["verify", "gmphidiv", "--n", "4", "--d", "5", "--exhaustive"]) == 0
    assert "80 cases" in capsys.readouterr().out


def test_verify_jobs_deterministic(capsys):
    assert main(["verify", "phimac", "--n", "2", "--a", "3", "--random", "40", "--jobs", "2", "--seed", "4"]) == 0
    first = capsys.readouterr().out
    main(["verify", "phimac", "--n", "2", "--a", "3", "--random", "40", "--jobs", "2", "--seed", "4"])
    assert capsys.readouterr().out == first


def test_verify_failure_exit(capsys):
    # the approximate adder is not exact, so the sweep reports counterexamples
    code = main(["verify", "phiadd", "--width", "4", "--k", "5", "--cutoff", "1", "--engine", "dense", "--exhaustive"])
    assert code == 1
    assert "input" in capsys.readouterr().out


def test_dense_resource_limit(monkeypatch):
    monkeypatch.setenv("QSA_DENSE_CAP", "10")
    assert main(["verify", "gmphidiv", "--n", "4", "--d", "5", "--engine", "dense", "--random", "1"]) == 3


def test_usage_errors():
    assert main(["build", "nope"]) == 2
    assert main(["build", "phimac", "--n", "3"]) == 2
    assert main(["resources", "--n", "9..4"]) == 2
    assert main(["build", "phimulmod", "--n", "4", "--a", "6", "--N", "15"]) == 2


def test_resources(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["resources", "--version", "2", "--n", "4..5", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert [r["width"] for r in rows if r["unit"] == "total"] == [38, 47]


def test_resources_v1_target(capsys):
    assert main(["resources", "--version", "1", "--n", "4"]) == 0
    assert str(488 * 4 - 8) in capsys.readouterr().out


def test_shor(capsys):
    assert main(["shor", "--N", "15", "--seed", "1"]) == 0
    assert "factors 3 5" in capsys.readouterr().out
    assert main(["shor", "--N", "21"]) == 0
    assert "factors 3 7" in capsys.readouterr().out
    assert main(["shor", "--N", "21", "--a", "6"]) == 0
    assert "gcd" in capsys.readouterr().out
    assert main(["shor", "--N", "13"]) == 1
