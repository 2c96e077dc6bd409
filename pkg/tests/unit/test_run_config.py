"""Tests for run configuration parsing and validation."""

import json

import pytest
from pydantic import ValidationError

from liouville_pathint.exceptions import RejectedInputError
from liouville_pathint.models.run_config import (
    OscillatorSpec,
    OutputKind,
    RunConfig,
    SliceMode,
    load_config,
    to_complex,
)


def qubit_config(**overrides):
    config = {
        "representation": {"fock": {"dim": 2}},
        "generator": {
            "hamiltonian": {"pauli": "z", "scale": 0.5},
            "lindblad": [{"pauli": "minus"}],
        },
        "time": {"t": 1.0, "slices": 10},
        "initial_state": {"fock": 0},
    }
    config.update(overrides)
    return config


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_valid_config(tmp_path):
    config = load_config(write_config(tmp_path, qubit_config()))
    assert config.hbar == 1.0
    assert config.representation.fock.dim == 2
    assert config.generator.form == "explicit"
    assert config.time.mode == SliceMode.EULER
    assert config.time.tau == pytest.approx(0.1)
    assert config.outputs == [OutputKind.TRAJECTORY]


def test_extra_key_rejected():
    with pytest.raises(ValidationError):
        RunConfig.model_validate(qubit_config(seed=3))


def test_generator_needs_exactly_one_form():
    both = qubit_config(generator={"hamiltonian": {"pauli": "z"}, "oscillator": {}})
    with pytest.raises(ValidationError, match="exactly one form"):
        RunConfig.model_validate(both)
    with pytest.raises(ValidationError, match="exactly one form"):
        RunConfig.model_validate(qubit_config(generator={}))


def test_lindblad_operators_need_a_hamiltonian():
    with pytest.raises(ValidationError, match="explicit hamiltonian"):
        RunConfig.model_validate(qubit_config(generator={"oscillator": {}, "lindblad": [{"pauli": "minus"}]}))


@pytest.mark.parametrize("points", [12, 128, 2])
def test_grid_points_must_be_small_power_of_two(points):
    config = qubit_config(representation={"grid": {"points": points, "length": 8.0}})
    with pytest.raises(ValidationError):
        RunConfig.model_validate(config)


def test_representation_needs_exactly_one_kind():
    with pytest.raises(ValidationError, match="exactly one of 'fock' or 'grid'"):
        RunConfig.model_validate(qubit_config(representation={}))


def test_operator_forms():
    base = qubit_config()
    base["generator"]["hamiltonian"] = {"pauli": "z", "matrix": [[1, 0], [0, -1]]}
    with pytest.raises(ValidationError, match="exactly one of pauli/matrix/polynomial"):
        RunConfig.model_validate(base)
    base["generator"]["hamiltonian"] = {"matrix": [[1, 0, 0], [0, -1, 0]]}
    with pytest.raises(ValidationError, match="square"):
        RunConfig.model_validate(base)
    base["generator"]["hamiltonian"] = {"polynomial": [{"p": 2, "coeff": 0.5}, {"q": 2, "coeff": [0.5, 0.0]}]}
    assert RunConfig.model_validate(base).generator.hamiltonian.polynomial[1].q == 2


def test_time_must_not_run_backwards():
    with pytest.raises(ValidationError, match="precedes"):
        RunConfig.model_validate(qubit_config(time={"t0": 1.0, "t": 0.5}))


def test_bloch_vector_inside_unit_ball():
    with pytest.raises(ValidationError, match="unit ball"):
        RunConfig.model_validate(qubit_config(initial_state={"bloch": [1.0, 1.0, 0.0]}))
    config = RunConfig.model_validate(qubit_config(initial_state={"bloch": [0.0, 0.6, 0.8]}))
    assert config.initial_state.bloch == [0.0, 0.6, 0.8]


def test_lambda_alias():
    assert OscillatorSpec.model_validate({"lambda": 0.2}).lam == 0.2
    assert OscillatorSpec.model_validate({"lam": 0.3}).lam == 0.3


def test_complex_values():
    assert to_complex(2) == 2
    assert to_complex([1.0, -2.0]) == 1 - 2j
    with pytest.raises(ValueError):
        to_complex([1.0, 2.0, 3.0])


def test_json_error_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "hbar": 1.0,\n  oops\n}\n', encoding="utf-8")
    with pytest.raises(RejectedInputError, match=r"broken\.json:3:3:"):
        load_config(path)


def test_schema_error_reports_field_path(tmp_path):
    config = qubit_config(representation={"grid": {"points": 12, "length": 8.0}})
    with pytest.raises(RejectedInputError, match=r"representation\.grid\.points"):
        load_config(write_config(tmp_path, config))
