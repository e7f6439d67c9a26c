from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bgdc import numerators
from bgdc.cli import main
from bgdc.kinematics import config_to_json, k3_fixture
from bgdc.numerators import KinElement


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.json"
    path.write_text(json.dumps(config_to_json(k3_fixture())))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_is_deterministic_and_valid(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "gen", "--n", "4", "--seed", "7", "-o", str(a))[0] == 0
    assert run(capsys, "gen", "--n", "4", "--seed", "7", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "validate", "-i", str(a))
    assert code == 0 and json.loads(out)["passed"]


def test_gen_rejects_small_n(capsys):
    code, _, err = run(capsys, "gen", "--n", "2")
    assert code == 1 and "at least 3" in err


def test_bad_flags_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen"])
    assert exc.value.code == 1


def test_generation_failure_exit_two(monkeypatch, capsys):
    from bgdc import cli
    from bgdc.kinematics import GenerationError

    def fail(*a, **kw):
        raise GenerationError("no valid configuration")

    monkeypatch.setattr(cli, "random_kinematics", fail)
    code, _, err = run(capsys, "gen", "--n", "4")
    assert code == 2 and "no valid configuration" in err


def test_currents(k3_file, capsys):
    code, out, _ = run(capsys, "compute", "currents", "--theory", "cs", "--word", "12", "-i", k3_file)
    assert code == 0 and json.loads(out) == {"12": ["0", "0", "1/2"]}
    code, out, _ = run(capsys, "compute", "currents", "--theory", "cd", "--word", "12", "-i", k3_file, "--mode", "factorized")
    assert json.loads(out)["12"][2] == ["0", "0", {"re": "0", "im": "-1"}]
    code, out, _ = run(capsys, "compute", "currents", "--theory", "double", "--word", "21", "--word2", "12", "-i", k3_file)
    assert json.loads(out) == {"21|12": "-1/2"}
    code, out, _ = run(capsys, "compute", "currents", "--theory", "cs", "--word", "12", "-i", k3_file, "--all")
    assert set(json.loads(out)) == {"1", "2", "12"}


def test_currents_float_mode_from_env(k3_file, capsys, monkeypatch):
    monkeypatch.setenv("BGDC_MODE", "float")
    code, out, _ = run(capsys, "compute", "currents", "--theory", "cs", "--word", "12", "-i", k3_file)
    assert code == 0 and json.loads(out)["12"][2] == 0.5


def test_amplitude(k3_file, capsys):
    code, out, _ = run(capsys, "compute", "amplitude", "--i", k3_file)
    assert code == 0
    data = json.loads(out)
    assert data == {
        "n": 3,
        "orderings": {"123": "1"},
        "full": "1",
        "tensor": {"direct": "1/2", "master": "1/2", "klt": "1/2", "sigma": 1},
    }


def test_missing_input_exit_one(tmp_path, capsys):
    code, _, err = run(capsys, "compute", "amplitude", "-i", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in err


def test_degenerate_exit_three(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "conserve_momentum": False,
        "particles": [
            {"k": [1, 0, 0], "eps": [0, 1, 0]},
            {"k": [0, 1, 0], "eps": [0, 0, 1]},
            {"k": [1, 1, 1], "eps": [1, -1, 0]},
        ],
    }))
    code, _, err = run(capsys, "compute", "currents", "--word", "123", "-i", str(path))
    assert code == 3 and "s_12" in err
    code, _, _ = run(capsys, "validate", "-i", str(path))
    assert code == 3


def test_verify_passes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "jacobi-kinematic,kk", "--suite", "kernel-inverse", "--nmax", "4", "--seeds", "2")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert [s["name"] for s in report["suites"]] == ["jacobi-kinematic", "kk", "kernel-inverse"]
    assert all("wall_time_s" in s["details"] for s in report["suites"])
    assert "PASS kk" in err


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 1


@pytest.mark.parametrize("bug", ["sign-flip", "dropped-term"])
def test_injected_bracket_bug_fails_verify(monkeypatch, capsys, bug):
    def broken(x, y):
        a = sum(p * q for p, q in zip(x.cov, y.mom))
        b = sum(p * q for p, q in zip(y.cov, x.mom))
        if bug == "sign-flip":
            cov = tuple(a * q + b * p for p, q in zip(x.cov, y.cov))
        else:
            cov = tuple(a * q for q in y.cov)
        return KinElement(cov, tuple(p + q for p, q in zip(x.mom, y.mom)))

    monkeypatch.setattr(numerators, "kin_bracket", broken)
    code, out, err = run(capsys, "verify", "--suite", "jacobi-kinematic", "--nmax", "4", "--seeds", "1")
    assert code == 4
    assert not json.loads(out)["passed"] and "FAIL jacobi-kinematic" in err


def test_audit_prints_table(capsys):
    code, out, err = run(capsys, "verify", "--suite", "audit", "--nmax", "4", "--seeds", "2")
    assert code == 0
    assert "rho_zc = 1/2 printed 1/4" in err
    assert "3  +1     -1" in err
    rho = json.loads(out)["suites"][0]["details"]["rho"]["zc"]
    assert rho["measured"] == "1/2"


def test_console_script_entry_point(k3_file):
    proc = subprocess.run(
        [sys.executable, "-m", "bgdc.cli", "compute", "currents", "--word", "21", "-i", k3_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"21": ["0", "0", "-1/2"]}
