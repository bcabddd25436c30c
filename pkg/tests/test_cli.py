import csv
import io
import json
import subprocess
import sys

import pytest

from meritds import cli


def run(args, capsys, env_threads=None, monkeypatch=None):
    if monkeypatch is not None:
        if env_threads is None:
            monkeypatch.delenv(cli.THREADS_ENV, raising=False)
        else:
            monkeypatch.setenv(cli.THREADS_ENV, str(env_threads))
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_paley(capsys):
    code, out, _ = run(["construct", "--family", "paley", "--p", "13", "--r", "0", "--t", "13"], capsys)
    assert code == 0
    line = out.strip()
    squares = {x * x % 13 for x in range(1, 13)}
    assert line == "".join("+" if j in squares else "-" for j in range(13))


def test_construct_gmw(capsys):
    code, out, _ = run(["construct", "--family", "gmw", "--q", "64", "--s", "8", "--inner", "singer"], capsys)
    assert code == 0
    line = out.strip()
    assert len(line) == 63 and line.count("+") == 32


def test_construct_not_prime(capsys):
    code, _, err = run(["construct", "--family", "paley", "--p", "12"], capsys)
    assert code == 2 and "NotPrime" in err


def test_construct_missing_param(capsys):
    code, _, err = run(["construct", "--family", "singer"], capsys)
    assert code == 2 and "--q" in err


def test_construct_file_and_mf(tmp_path, capsys):
    path = tmp_path / "sid.txt"
    code, _, _ = run(["construct", "--family", "sidelnikov", "--q", "103", "--out", str(path)], capsys)
    assert code == 0
    assert (tmp_path / "sid.txt.json").exists()
    code, out, _ = run(["mf", "--in", str(path)], capsys)
    rep = json.loads(out)
    assert rep["t"] == 102 and rep["family"] == "sidelnikov"
    code, out2, _ = run(["mf", "--family", "sidelnikov", "--q", "103"], capsys)
    assert json.loads(out2)["merit_factor"] == rep["merit_factor"]


def test_sweep_paley(capsys):
    code, out, _ = run(["sweep", "--family", "paley", "--p", "10007", "--R", "0.25", "--T", "1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert list(rows[0]) == ["R", "T", "r", "t", "F", "phi_pred", "abs_err"]
    assert float(rows[0]["phi_pred"]) == pytest.approx(6.0)
    assert float(rows[0]["abs_err"]) < 0.15
    assert rows[0]["r"] == "2502" and rows[0]["t"] == "10007"


def test_sweep_gmw_reports_error_vs_three(capsys):
    code, out, _ = run(["sweep", "--family", "gmw", "--q", "4096", "--s", "2", "--R", "0", "--T", "1"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["phi_pred"]) == pytest.approx(3.0)
    assert float(row["abs_err"]) == pytest.approx(abs(float(row["F"]) - 3.0), abs=1e-9)


def test_sweep_twelve_digits(capsys):
    _, out, _ = run(["sweep", "--family", "hall", "--p", "43", "--R", "0.1", "--T", "1.3"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    digits = row["F"].replace(".", "").lstrip("0")
    assert len(digits) <= 12


def test_sweep_empty_grid(capsys):
    code, _, err = run(["sweep", "--family", "paley", "--p", "13", "--R", "", "--T", "1"], capsys)
    assert code == 2


def test_sweep_threads_byte_identical(tmp_path, capsys, monkeypatch):
    args = ["sweep", "--family", "paley", "--p", "1019", "--R", "0,0.1,0.2,0.25,0.3", "--T", "0.5,1,1.5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(args + ["--out", str(a), "--threads", "1"], capsys, monkeypatch=monkeypatch)
    run(args + ["--out", str(b)], capsys, env_threads=4, monkeypatch=monkeypatch)
    assert a.read_bytes() == b.read_bytes()


def test_env_threads_override(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    ns = cli.build_parser().parse_args(["predict", "--nu", "1", "--max", "--threads", "1"])
    assert cli.config_from_args(ns).threads == 3


def test_predict(capsys):
    _, out, _ = run(["predict", "--nu", "1", "--max"], capsys)
    assert json.loads(out)["phi_max"] == pytest.approx(6.342061719763943)
    _, out, _ = run(["predict", "--nu", "1", "--R", "0.25", "--T", "1"], capsys)
    assert json.loads(out)["phi"] == pytest.approx(6.0)
    code, _, err = run(["predict", "--nu", "2", "--max"], capsys)
    assert code == 2 and "OutOfRange" in err


def test_diagnose(capsys):
    code, out, _ = run(["diagnose", "--family", "paley", "--p", "13"], capsys)
    d = json.loads(out)
    assert d["spectral"]["within_bound"] is True
    assert d["periodic_profile"]["class_values"] == [-3, 1]
    code, out, _ = run(["diagnose", "--family", "sidelnikov", "--q", "27"], capsys)
    d = json.loads(out)
    assert d["spectral"]["model"] == "I+K" and "periodic_profile" not in d


def test_verify_tables(capsys):
    code, out, _ = run(["verify", "--suite", "tables", "--m", "4", "--primes", "17,29,37"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["checks"]) == 3


def test_verify_tables_bad_prime(capsys):
    code, out, _ = run(["verify", "--suite", "tables", "--m", "6", "--primes", "13"], capsys)
    assert code == 1


def test_verify_spectral_sidelnikov(capsys):
    code, out, _ = run(["verify", "--suite", "spectral", "--family", "sidelnikov", "--q", "27"], capsys)
    rep = json.loads(out)
    assert code == 0
    detail = rep["checks"][0]["detail"]
    assert detail["max_dev"] <= detail["bound"]


def test_verify_charsums(capsys):
    code, out, _ = run(["verify", "--suite", "charsums", "--qmax", "64"], capsys)
    assert code == 0 and json.loads(out)["passed"]


def test_verify_sets(capsys):
    code, out, _ = run(["verify", "--suite", "sets", "--qmax", "256"], capsys)
    assert code == 0


def test_config_roundtrip(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    run(
        ["sweep", "--family", "cyclotomic", "--p", "37", "--m", "6", "--S", "0,1,3", "--R", "0.1,0.2", "--T", "1",
         "--save-config", str(path)],
        capsys,
    )
    text = path.read_text().strip()
    cfg = cli.RunConfig.from_json(text)
    assert cfg.to_json() == text
    assert cfg.S == [0, 1, 3] and cfg.R_grid == [0.1, 0.2] and cfg.format == "csv"


def test_config_rejects_unknown_key():
    with pytest.raises(cli.ConfigError):
        cli.RunConfig.from_json('{"subcommand": "mf", "bogus": 1}')


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "meritds", "predict", "--nu", "0", "--max", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    header, values = res.stdout.strip().splitlines()
    assert header == "nu,phi_max,T_opt,R_opt"
    assert values.split(",")[1] == "3.34206531015"
