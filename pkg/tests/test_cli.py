import csv
import json
import subprocess
import sys

import pytest

from fh_gauss.cli import main

BASE = 'ts = [-0.6, 0.8]\ngammas = [0.5, 1.5]\nn_max = 4\n'


def _cfg(tmp_path, extra="", body=BASE):
    p = tmp_path / "run.toml"
    p.write_text(body + extra)
    return str(p)


def _run(tmp_path, command, extra="", fmt="json", body=BASE):
    out = tmp_path / "out"
    code = main([command, "--config", _cfg(tmp_path, extra, body), "--out", str(out),
                 "--format", fmt])
    path = out / f"{command}.{fmt}"
    return code, path


def test_compute_rows(tmp_path):
    code, path = _run(tmp_path, "compute")
    assert code == 0
    doc = json.loads(path.read_text())
    assert len(doc["rows"]) == 5
    assert doc["rows"][0]["n"] == 0 and "R2" in doc["rows"][0]
    assert doc["config_echo"]["ts"] == ["-0.6", "0.8"]


def test_verify_filtered_suite(tmp_path):
    code, path = _run(tmp_path, "verify", 'suite = "identities"\n')
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["summary"]["failed"] == 0
    assert {r["identity"].split(".")[0] for r in doc["reports"]} == {"section3"}


def test_output_is_deterministic(tmp_path):
    _, path = _run(tmp_path, "verify", 'suite = "ladder"\n')
    first = path.read_bytes()
    _, path = _run(tmp_path, "verify", 'suite = "ladder"\n')
    assert path.read_bytes() == first


def test_zero_tolerance_fails_numerically(tmp_path, capsys):
    code, path = _run(tmp_path, "verify", 'suite = "identities"\ntolerance = 0\n')
    assert code == 2
    assert json.loads(path.read_text())["summary"]["failed"] > 0
    assert "FAIL" in capsys.readouterr().out


def test_iterate(tmp_path):
    code, path = _run(tmp_path, "iterate")
    assert code == 0
    names = {r["identity"] for r in json.loads(path.read_text())["reports"]}
    assert names == {"iteration.deviation", "iteration.alpha", "iteration.beta"}


def test_sweep_and_csv(tmp_path, monkeypatch):
    monkeypatch.setenv("FH_GAUSS_THREADS", "1")
    extra = 'suite = "orthopoly"\n[sweep.t1]\nstart = -0.8\nstop = -0.4\nsteps = 3\n'
    code, path = _run(tmp_path, "verify", extra, fmt="csv")
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert {r["ts"] for r in rows} == {"-0.8 0.8", "-0.6 0.8", "-0.4 0.8"}


def test_thread_count_does_not_change_output(tmp_path, monkeypatch):
    extra = 'suite = "identities"\n[sweep.t2]\nstart = 0.7\nstop = 0.9\nsteps = 2\n'
    monkeypatch.setenv("FH_GAUSS_THREADS", "1")
    _, path = _run(tmp_path, "verify", extra)
    serial = path.read_bytes()
    monkeypatch.setenv("FH_GAUSS_THREADS", "2")
    _, path = _run(tmp_path, "verify", extra)
    assert path.read_bytes() == serial


@pytest.mark.parametrize("body", [
    'ts = [0.8, -0.6]\ngammas = [0.5, 1.5]\n',
    'ts = [0.5]\ngammas = [-1]\n',
    'ts = [0.5]\ngammas = [1]\nbogus = 1\n',
    'ts = [0.5]\ngammas = [1]\nsuite = "nope"\n',
    'ts = [0.5]\ngammas = [1, 2]\n',
    'ts = [0.5\n',
    'ts = [-0.6, 0.8]\ngammas = [1, 1]\n[sweep.t1]\nstart = 0.5\nstop = 1\nsteps = 2\n',
])
def test_bad_config(tmp_path, body):
    code, _ = _run(tmp_path, "compute", body=body)
    assert code == 1


def test_bad_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("FH_GAUSS_THREADS", "many")
    code, _ = _run(tmp_path, "compute")
    assert code == 1


def test_missing_config(tmp_path):
    assert main(["compute", "--config", str(tmp_path / "absent.toml")]) == 3


def test_numerical_failure(tmp_path):
    body = 'ts = [0.5]\ngammas = [1]\nprecision_bits = 64\nquad_tol = "1e-30"\n'
    code, _ = _run(tmp_path, "compute", body=body)
    assert code == 2


def test_override_flags(tmp_path):
    out = tmp_path / "o"
    code = main(["compute", "--config", _cfg(tmp_path), "--out", str(out), "--n-max", "2",
                 "--precision-bits", "128"])
    assert code == 0
    doc = json.loads((out / "compute.json").read_text())
    assert len(doc["rows"]) == 3 and doc["config_echo"]["precision_bits"] == 128


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fh_gauss.cli", "compute", "--config",
                           _cfg(tmp_path), "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "wrote 5 rows" in proc.stdout
