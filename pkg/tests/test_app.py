import csv
import io
import json
import logging

import numpy as np
import pytest

from spinlab import app
from spinlab.errors import NumericError


@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    root.setLevel(logging.WARNING)


def run(capsys, *argv):
    code = app.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def run_csv(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return list(csv.DictReader(io.StringIO(out)))


def test_moments(capsys):
    record = run_json(capsys, "moments", "--state", "fock:4:1", "--dir", "1,0,0")
    assert record["command"] == "moments"
    out = record["outputs"]
    assert out["oracle"]["variance"] == pytest.approx(2.5)
    assert out["closed_form"]["variance"] == pytest.approx(2.5)
    assert out["difference"] < 1e-10
    assert out["separability"] == "(A,B)-separable"
    record = run_json(capsys, "moments", "--state", "fock:4:1", "--dir", "0,0,1")
    assert record["outputs"]["oracle"]["variance"] == pytest.approx(0.0, abs=1e-12)


def test_moments_of_superposition_has_no_closed_form(capsys):
    out = run_json(capsys, "moments", "-s", "gauss:4:2:0.3")["outputs"]
    assert out["closed_form"] == "undefined"
    assert out["separability"] == "(A,B)-entangled"


def test_squeeze(capsys):
    out = run_json(capsys, "squeeze", "--state", "fock:4:2")["outputs"]
    assert out["toth"]["lhs3"] == pytest.approx(4.0)
    assert out["toth"]["satisfied3"] is False
    assert out["ineq3_threshold"] == pytest.approx(4 / 6)
    out = run_json(capsys, "squeeze", "-s", "gauss:4:2:0.3", "--triplet", "z,y,x")
    assert out["outputs"]["xi"]["xi_w_squared"] == pytest.approx(1 / 3, abs=1e-3)
    out = run_json(capsys, "squeeze", "-s", "fock:4:2", "--triplet", "z,y,x")
    assert out["outputs"]["xi"]["xi_w_squared"] == "undefined"


def test_qfi(capsys):
    out = run_json(capsys, "qfi", "--state", "fock:4:2")["outputs"]
    assert out["spectral"]["value"] == pytest.approx(12.0)
    assert out["closed_form"]["value"] == pytest.approx(12.0)
    assert out["closed_form"]["method"] == "closed-form"
    out = run_json(capsys, "qfi", "--state", "fock:4:2", "--dir", "0,0,1")["outputs"]
    assert out["spectral"]["value"] == pytest.approx(0.0, abs=1e-12)
    out = run_json(capsys, "qfi", "-s", "mixture:2:uniform", "--dir", "1,0,0")["outputs"]
    assert out["difference"] < 1e-10


def test_state_file(capsys, tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"v": 1, "n": 4, "kind": "fock", "params": {"k": 2}}))
    out = run_json(capsys, "qfi", "--state-file", str(path))["outputs"]
    assert out["spectral"]["value"] == pytest.approx(12.0)


def test_missing_state_file(capsys, tmp_path):
    code, out, err = run(capsys, "qfi", "--state-file", str(tmp_path / "nope.json"))
    assert code == 2 and out == ""
    assert "cannot read state file" in err


def test_scan_ineq3_sign_change(capsys):
    rows = run_csv(
        capsys,
        "scan",
        "--state",
        "fock:4:2",
        "--param",
        "n3z2",
        "--range",
        "0.5:0.9:0.01",
    )
    assert len(rows) == 41
    signs = [float(r["lhs3"]) > 0 for r in rows]
    flip = signs.index(True)
    assert not any(signs[:flip]) and all(signs[flip:])
    assert float(rows[flip - 1]["n3z2"]) < 4 / 6 < float(rows[flip]["n3z2"])


def test_scan_heisenberg_scaling(capsys, tmp_path):
    ns = [4, 8, 16, 32, 64, 128]
    output = tmp_path / "scan.csv"
    code, _, err = run(
        capsys,
        "scan",
        "--state",
        "fock:{N}:{N_half}",
        "--param",
        "N",
        "--values",
        ",".join(map(str, ns)),
        "--measure",
        "qfi",
        "--output",
        str(output),
    )
    assert code == 0, err
    with open(output, newline="") as f:
        rows = list(csv.DictReader(f))
    fisher = np.array([float(r["qfi_spectral"]) for r in rows])
    n = np.array([float(r["n"]) for r in rows])
    np.testing.assert_allclose(fisher, n + n**2 / 2, rtol=1e-8)
    # The part of F beyond the shot-noise limit scales exactly as N².
    slope, _ = np.polyfit(np.log(n), np.log(fisher - n), 1)
    assert slope == pytest.approx(2.0, abs=0.05)
    # The local slope of F itself approaches 2.
    local = np.diff(np.log(fisher)) / np.diff(np.log(n))
    assert np.all(np.diff(local) > 0)
    assert local[-1] == pytest.approx(2.0, abs=0.05)


def test_scan_errors(capsys):
    code, _, err = run(
        capsys, "scan", "-s", "fock:{M}:1", "-p", "N", "--values", "4", "-m", "qfi"
    )
    assert code == 2
    assert "placeholder" in err
    code, _, _ = run(capsys, "scan", "-s", "fock:4:2", "-p", "n3z2", "--range", "1:0:0.1")
    assert code == 2
    code, out, err = run(
        capsys, "scan", "-s", "fock:{N}:1", "-p", "N", "--values", "4,abc", "-m", "qfi"
    )
    assert code == 2 and out == ""
    assert "--values" in err


def test_estimate_is_reproducible(capsys):
    argv = [
        "estimate",
        "-s",
        "fock:4:2",
        "--rot-dir",
        "0,1,0",
        "--theta",
        "0.4",
        "-M",
        "20",
        "-R",
        "5",
        "--seed",
        "7",
    ]
    a = run_json(capsys, *argv)
    b = run_json(capsys, *argv)
    assert a == b
    assert a["seed"] == 7
    assert len(a["outputs"]["estimates"]) == 5


def test_estimate_echoes_drawn_seed(capsys):
    record = run_json(
        capsys, "estimate", "-s", "fock:4:2", "--theta", "0.4", "-M", "10", "-R", "2"
    )
    assert isinstance(record["seed"], int)


def test_oracle(capsys):
    a = run_json(capsys, "oracle", "--n", "3", "--trials", "10", "--seed", "5")
    assert a["outputs"]["passed"] is True
    assert a == run_json(capsys, "oracle", "--n", "3", "--trials", "10", "--seed", "5")
    code, _, _ = run(capsys, "oracle", "--n", "9", "--seed", "1")
    assert code == 2


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["moments", "-s", "fock:4:1", "--dir", "1,0"], "--dir"),
        (["moments", "-s", "fock:4:x"], "column 8"),
        (["squeeze", "-s", "fock:4:1", "--triplet", "x,x,z"], "orthogonal"),
        (["estimate", "-s", "fock:4:2", "--theta", "2.0"], "theta"),
        (["qfi", "-s", "fock:4:9"], "occupation"),
    ],
)
def test_usage_errors(capsys, argv, flag):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert flag in err


def test_argparse_errors(capsys):
    assert run(capsys, "moments")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_numeric_failure(capsys, monkeypatch):
    def fail(args):
        raise NumericError("Jacobi eigensolver did not converge", residual=1.0, sweeps=100)

    monkeypatch.setattr(app, "run_command", fail)
    code, _, err = run(capsys, "qfi", "-s", "fock:4:2")
    assert code == 3
    assert "did not converge" in err


def test_verbose_logs_to_stderr(capsys):
    code, out, err = run(capsys, "-v", "qfi", "-s", "gauss:4:2:0.3")
    assert code == 0
    json.loads(out)
    assert "Jacobi" in err
