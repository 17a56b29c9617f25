import json

import pytest

from darbouxlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_potential_flags_pole(capsys):
    code, out, _ = run(capsys, "potential", "--family", "10", "--mu", "1", "--range=-2,1",
                       "--samples", "31")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,V,piece,flag"
    pole = [l for l in lines if l.endswith(",pole")]
    assert pole == ["-1.00000000000e+00,inf,-1,pole"]
    assert len(lines) == 32
    assert lines[10].split(",")[2] == "0" and lines[12].split(",")[2] == "1"


def test_potential_near_pole(capsys):
    _, out, _ = run(capsys, "potential", "--family", "10", "--range=-2,1.1", "--samples", "20")
    flags = [l.split(",")[3] for l in out.splitlines()[1:]]
    assert flags.count("pole") == 1 and flags.count("near-pole") == 1


def test_potential_deterministic(capsys):
    args = ("potential", "--family", "32", "--n", "2", "--mu", "1", "--samples", "50")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_usage_errors(capsys):
    assert run(capsys, "potential", "--family", "99")[0] == 2
    assert run(capsys, "potential", "--family", "10", "--mu", "-1")[0] == 2
    assert run(capsys, "potential", "--family", "10", "--range", "3,1")[0] == 2
    assert run(capsys, "spectrum", "--n", "1")[0] == 2
    assert run(capsys, "kdv-check", "--candidate", "nope")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_boundstate(capsys):
    code, out, _ = run(capsys, "boundstate", "--family", "10", "--mu", "1")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(-1, abs=1e-6)


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "2", "--count", "3", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 3
    assert all(r["rel_diff"] < 1e-6 for r in rows)


def test_phaseshift(capsys, monkeypatch):
    monkeypatch.setenv("DARBOUX_THREADS", "2")
    code, out, _ = run(capsys, "phaseshift", "--family", "32", "--n", "2", "--mu", "1",
                       "--samples", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,Re S,Im S,delta_unwrapped,piece_id"
    assert all(float(l.split(",")[1]) == pytest.approx(-1, abs=1e-3) for l in lines[1:])


def test_kdv_check(capsys, tmp_path):
    code, out, _ = run(capsys, "kdv-check", "--candidate", "eqB3")
    assert code == 0 and json.loads(out)["exact"] is True
    code, out, _ = run(capsys, "kdv-check", "--candidate", "inverse-linear")
    assert code == 1 and json.loads(out)["exact"] is False
    target = tmp_path / "v.json"
    assert main(["kdv-check", "--candidate", "soliton", "--out", str(target)]) == 1
    assert json.loads(target.read_text())["candidate"] == "soliton"


def test_verify_all_report(capsys, tmp_path):
    target = tmp_path / "report.json"
    code = main(["verify-all", "--out", str(target)])
    err = capsys.readouterr().err
    report = json.loads(target.read_text())
    assert len(report["summary"]) == 11 and len(err.splitlines()) == 11
    assert code == (0 if report["passed"] else 1)
