import json
from pathlib import Path

import pytest

from northshield.cli import main
from northshield.linrep import builtin_stern_rep, load_rep

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    assert run(capsys, "eval", "northshield", "5")[:2] == (0, "3 (3.000)\n")
    assert run(capsys, "eval", "northshield", "0")[:2] == (0, "0 (0.000)\n")
    assert run(capsys, "eval", "northshield", "2")[:2] == (0, "√2 (1.414)\n")
    code, out, _ = run(capsys, "eval", "stern", "122")
    assert code == 0 and out.split()[0] == "9"
    code, out, _ = run(capsys, "eval", str(FIXTURES / "northshield.json"), "122")
    assert code == 0 and out.startswith("29√2")
    code, out, _ = run(capsys, "eval", "northshield", "122", "--format", "json")
    assert json.loads(out)["value"] == {"num": [0, 29], "den": 1}


def test_eval_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "northshield", "five"])
    assert exc.value.code == 2
    assert run(capsys, "eval", "northshield", "-1")[0] == 2
    assert run(capsys, "eval", str(FIXTURES / "bad_base.json"), "3")[0] == 2


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "northshield", "2", "6561", "--workers", "1")
    assert code == 0 and "at m=4 " in out
    code, out, _ = run(capsys, "scan", "stern", "2", "4")
    assert code == 0 and "running max 0.932808345167 at m=3" in out
    code, out, _ = run(capsys, "scan", "northshield", "5", "5")
    assert code == 0 and "0.945998479071 at m=5" in out


def test_scan_csv_is_deterministic(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    argv = ["scan", "northshield", "2", "3000", "--decimation", "100", "--format", "csv", "--out", str(target)]
    code, _, err = run(capsys, *argv)
    first = target.read_bytes()
    assert code == 0 and "running max" in err
    assert first.startswith(b"index,ratio\n2,")
    assert b"\r" not in first
    assert first.count(b"\n") == 1 + 30
    run(capsys, *argv, "--workers", "2")
    assert target.read_bytes() == first


def test_scan_cap(capsys):
    code, _, err = run(capsys, "scan", "northshield", "2", "20000")
    assert code == 3 and "cap 19683" in err
    code, _, _ = run(capsys, "scan", "northshield", "2", "20000", "--cap", "20000", "--workers", "1")
    assert code == 0
    assert run(capsys, "scan", "stern", "1", "20")[0] == 2


def test_verify_envelope_bound(capsys):
    code, out, _ = run(capsys, "verify", "2.2", "--hi", "19683", "--workers", "1")
    assert code == 0 and "0 violations" in out
    code, out, _ = run(capsys, "verify", "2.2", "--hi", "500", "--coefficient", "both", "--format", "json")
    assert code == 0 and [r["status"] for r in json.loads(out)] == ["pass", "pass"]
    assert run(capsys, "verify", "2.2", "--lo", "1", "--hi", "10")[0] == 2


def test_verify_table1(capsys):
    code, out, _ = run(capsys, "verify", "table1")
    assert code == 0
    assert "c=1" in out and "c=√2+1" in out
    assert "m=[5, 6, 7, 8, 9]" in out


def test_verify_hmn_and_grid(capsys):
    code, out, _ = run(capsys, "verify", "2.3")
    assert code == 0 and out.rstrip().endswith("PASS")
    code, out, _ = run(capsys, "verify", "2.4", "--grid", "10000")
    assert code == 0 and out.rstrip().endswith("PASS")
    code, out, _ = run(capsys, "verify", "2.4", "--grid", "50", "--format", "csv")
    assert code == 0 and out.startswith("x,H\n")


def test_verify_eq24_reports_discrepancy(capsys):
    code, out, _ = run(capsys, "verify", "eq2.4", "--n-hi", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "fail"
    assert all(c["sign"] == -1 and c["magnitude_below_one"] for c in doc["checks"])
    assert not any(c["matches_stated"] for c in doc["checks"])


def test_max(capsys):
    code, out, _ = run(capsys, "max", "1", "5", "both", "--format", "csv")
    assert code == 0
    assert [line.split(",")[-1] for line in out.splitlines()[1:]] == ["2", "5", "14", "41", "122"]
    code, out, _ = run(capsys, "max", "2", "2", "closed")
    assert code == 0 and "max=3 " in out and "first_argmax=5" in out
    code, out, _ = run(capsys, "max", "1", "1", "brute")
    assert code == 0 and "max=√2" in out and "first_argmax=2" in out
    assert run(capsys, "max", "10", "10", "brute")[0] == 3


def test_jsr(capsys):
    code, out, _ = run(capsys, "jsr", "northshield", "1", "1", "--format", "json", "--witness", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["lower"] == pytest.approx(2.41421356, abs=1e-8) and doc["upper"] == pytest.approx(2.41421356, abs=1e-8)
    assert doc["lower_witness"] == [1] and doc["finiteness"]["certified"]
    code, out, _ = run(capsys, "jsr", "stern", "2", "16", "--format", "json")
    doc = json.loads(out)
    assert doc["lower"] == pytest.approx(1.61803, abs=1e-5) and doc["upper"] <= 1.65
    code, out, _ = run(capsys, "jsr", "stern", "1", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["lower"] == 1.0 and doc["upper"] == 2.0
    code, out, _ = run(capsys, "jsr", "stern", "1", "4", "--table", "--format", "csv")
    assert out.splitlines()[0] == "len,upper" and len(out.splitlines()) == 5
    assert run(capsys, "jsr", "stern", "1", "30")[0] == 3


def test_rep(capsys, tmp_path):
    path = str(FIXTURES / "northshield.json")
    code, out, _ = run(capsys, "rep", path, "--oracle", "northshield", "--limit", "500")
    assert code == 0 and out.startswith("pass")
    code, out, _ = run(capsys, "rep", path, "--oracle", "stern", "--limit", "10")
    assert code == 1 and "first mismatch at n=2" in out
    code, out, _ = run(capsys, "rep", path, "--dump")
    assert load_rep(out) == load_rep(Path(path).read_text())

    stern_file = tmp_path / "stern.json"
    stern_file.write_text(builtin_stern_rep().dumps())
    code, out, _ = run(capsys, "rep", str(stern_file), "--dump")
    assert load_rep(out) == builtin_stern_rep()
    assert run(capsys, "rep", str(stern_file), "--oracle", "stern")[0] == 0
    assert run(capsys, "rep", str(tmp_path / "missing.json"))[0] == 2
