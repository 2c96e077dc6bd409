"""End-to-end runs of the command-line interface on small configurations."""

import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from liouville_pathint.cli.main import main
from liouville_pathint.core.gates4 import read_gate_csv

DAMPED_QUBIT = {
    "representation": {"fock": {"dim": 2}},
    "generator": {
        "hamiltonian": {"pauli": "z", "scale": 0.5},
        "lindblad": [{"pauli": "minus"}],
    },
    "time": {"t": 1.0, "slices": 10, "mode": "exponential"},
    "initial_state": {"fock": 0},
    "outputs": ["trajectory", "final_state", "operation"],
}

OSCILLATOR = {
    "generator": {"oscillator": {"mass": 1.0, "omega": 1.0, "lambda": 0.1, "d_qq": 0.1, "d_pp": 0.1}},
    "time": {"t": 0.1},
}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def run(runner, tmp_path):
    def invoke(command, config, *args):
        path = tmp_path / f"{command}.json"
        path.write_text(json.dumps(config), encoding="utf-8")
        out = tmp_path / "out"
        result = runner.invoke(main, [command, "--config", str(path), "--out", str(out), *args])
        return result, out
    return invoke


def test_propagate_damped_qubit(run):
    result, out = run("propagate", DAMPED_QUBIT)
    assert result.exit_code == 0, result.output
    assert "✅ Propagation finished" in result.output
    assert (out / "trajectory.csv").read_text(encoding="utf-8").startswith("t,trace,purity,rho_ee\n")
    trajectory = pd.read_csv(out / "trajectory.csv")
    assert len(trajectory) == 11
    assert trajectory["rho_ee"].iloc[-1] == pytest.approx(np.exp(-1.0), abs=1e-9)
    assert trajectory["trace"].to_numpy() == pytest.approx(np.ones(11), abs=1e-12)
    final = json.loads((out / "final_state.json").read_text(encoding="utf-8"))
    assert final["dim"] == 2
    assert (out / "operation.json").exists()


def test_choi(run):
    result, out = run("choi", DAMPED_QUBIT)
    assert result.exit_code == 0, result.output
    assert "✅ Ранг Крауса: 2" in result.output
    for name in ("choi.json", "choi_eigenvalues.csv", "kraus.json"):
        assert (out / name).exists()
    eigenvalues = pd.read_csv(out / "choi_eigenvalues.csv")["eigenvalue"].to_numpy()
    assert np.all(np.diff(eigenvalues) <= 0)
    assert eigenvalues[-1] > -1e-10
    assert '"completely_positive": true' in result.output


def test_choi_of_euler_slicing_reports_negative_eigenvalue(run):
    """(I + tau L) products of the damped qubit leave the CP cone; the run still writes the Choi data."""
    config = dict(DAMPED_QUBIT, time={"t": 1.0, "slices": 512})
    result, out = run("choi", config)
    assert result.exit_code == 0, result.output
    assert "⚠️  Операция не вполне положительна" in result.output
    assert '"completely_positive": false' in result.output
    assert (out / "choi.json").exists()
    assert not (out / "kraus.json").exists()
    eigenvalues = pd.read_csv(out / "choi_eigenvalues.csv")["eigenvalue"].to_numpy()
    assert eigenvalues[-1] < -1e-5


def test_gate_matrix_of_x_hamiltonian(run):
    config = {
        "representation": {"fock": {"dim": 2}},
        "generator": {"hamiltonian": {"pauli": "X"}},
        "time": {"t": 0.8, "slices": 4, "mode": "exponential"},
    }
    result, out = run("gate-matrix", config)
    assert result.exit_code == 0, result.output
    assert "✅ Матрица гейта: кубитов 1" in result.output
    gate = read_gate_csv(out / "gate_matrix.csv")
    assert gate.matrix[0, 0] == pytest.approx(1.0)
    assert gate.trace_preserving
    # rotation about X leaves the X component alone
    assert gate.matrix[1, 1] == pytest.approx(1.0)


def test_moments_on_fock_basis(run):
    config = dict(OSCILLATOR, representation={"fock": {"dim": 8}}, time={"t": 2.0, "slices": 20})
    result, out = run("moments", config)
    assert result.exit_code == 0, result.output
    moments = pd.read_csv(out / "moments.csv")
    assert list(moments.columns) == ["t", "mean_q", "mean_p", "var_qq", "var_pp", "cov_qp", "energy"]
    assert len(moments) == 21
    assert moments["var_qq"].iloc[0] == pytest.approx(0.5)


def test_kernel_gaussian_slice(run):
    config = dict(OSCILLATOR, representation={"grid": {"points": 8, "length": 8.0}})
    result, out = run("kernel", config)
    assert result.exit_code == 0, result.output
    assert "✅ Ядро записано (gaussian)" in result.output
    for name in ("kernel_slice.csv", "symbol_slice.csv", "symbol_form.json", "kernel.json"):
        assert (out / name).exists()
    assert len(pd.read_csv(out / "kernel_slice.csv")) == 64
    symbol_form = json.loads((out / "symbol_form.json").read_text(encoding="utf-8"))
    assert symbol_form["reducible"] is False


def test_kernel_sliced_for_quartic_potential(run):
    config = {
        "representation": {"grid": {"points": 8, "length": 8.0}},
        "generator": {"hamiltonian": {"polynomial": [{"p": 2, "coeff": 0.5}, {"q": 4, "coeff": 0.1}]}},
        "time": {"t": 0.05},
    }
    result, out = run("kernel", config)
    assert result.exit_code == 0, result.output
    assert "✅ Ядро записано (sliced)" in result.output
    assert not (out / "symbol_form.json").exists()


def test_kernel_needs_grid(run):
    result, _ = run("kernel", DAMPED_QUBIT)
    assert result.exit_code == 1
    assert "Ошибка kernel" in result.output


def test_check_algebra(runner, tmp_path):
    out = tmp_path / "algebra"
    result = runner.invoke(main, ["check-algebra", "--out", str(out), "--trials", "6", "--seed", "3"])
    assert result.exit_code == 0, result.output
    assert "✅" in result.output and "❌" not in result.output
    residuals = pd.read_csv(out / "algebra_residuals.csv")
    assert list(residuals.columns) == ["trial", "dim", "hbar", "relation", "residual"]


def test_bad_config_reports_field(run):
    result, _ = run("propagate", dict(DAMPED_QUBIT, seed=1))
    assert result.exit_code == 1
    assert "Ошибка propagate" in result.output
    assert "seed" in result.output


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(main, ["choi", "--config", str(tmp_path / "absent.json")])
    assert result.exit_code == 2
