import json
import math

import numpy as np
import pytest

from src.cli.ensemble_file import (
    EnsembleFileError,
    QubitFamilySpec,
    SpinFamilySpec,
    decode_matrix,
    encode_matrix,
    load_ensemble,
    read_ensemble_file,
    same_ensemble,
)
from src.states.operators import Ensemble
from src.states.spin import equal_angles, spin_family


def _doc(states, dim=2, **extra):
    return {"dim": dim, "states": states, **extra}


def _state(prior, diag):
    return {
        "prior": prior,
        "matrix": [[[diag[i] if i == j else 0.0, 0.0] for j in range(len(diag))] for i in range(len(diag))],
    }


class TestRoundTrip:
    def test_trine_file(self, trine_file, trine):
        ensemble_id, ensemble, doc = load_ensemble(trine_file)
        assert ensemble_id == "trine-mixed"
        assert same_ensemble(ensemble, trine, 1e-15)
        assert isinstance(doc.family, QubitFamilySpec)
        assert doc.family.r == pytest.approx(1 / 3)

    def test_spin_declaration(self, write_ensemble, spin1):
        family = SpinFamilySpec(two_j=2, alpha=0.3, thetas=list(equal_angles(3)))
        path = write_ensemble("spin", spin_family(spin1, 0.3, equal_angles(3)), family=family)
        _, _, doc = load_ensemble(path)
        assert isinstance(doc.family, SpinFamilySpec)

    def test_id_defaults_to_file_stem(self, write_ensemble, orthogonal_pair):
        path = write_ensemble("pair", orthogonal_pair)
        assert load_ensemble(path)[0] == "pair"

    def test_encode_decode(self):
        m = np.array([[0.5, 0.25 - 0.1j], [0.25 + 0.1j, 0.5]])
        np.testing.assert_array_equal(decode_matrix(encode_matrix(m)), m)

    def test_encode_rounds(self):
        assert encode_matrix(np.array([[1 / 3]]), digits=4) == [[(0.3333, 0.0)]]


class TestErrors:
    def _write(self, tmp_path, data):
        path = tmp_path / "doc.json"
        path.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return path

    def test_missing_file(self, tmp_path):
        with pytest.raises(EnsembleFileError) as excinfo:
            read_ensemble_file(tmp_path / "absent.json")
        assert excinfo.value.invariant == "file"

    def test_invalid_json(self, tmp_path):
        with pytest.raises(EnsembleFileError) as excinfo:
            read_ensemble_file(self._write(tmp_path, "{not json"))
        assert excinfo.value.invariant == "json"

    def test_missing_field(self, tmp_path):
        with pytest.raises(EnsembleFileError) as excinfo:
            read_ensemble_file(self._write(tmp_path, {"states": []}))
        assert excinfo.value.invariant == "schema"

    def test_wrong_shape(self, tmp_path):
        data = _doc([_state(0.5, [0.5, 0.5]), _state(0.5, [0.2, 0.3, 0.5])])
        with pytest.raises(EnsembleFileError, match="expected 2x2"):
            read_ensemble_file(self._write(tmp_path, data))

    def test_trace_violation_names_state(self, tmp_path):
        data = _doc([_state(0.5, [0.5, 0.5]), _state(0.5, [1.0, 0.5])])
        with pytest.raises(EnsembleFileError) as excinfo:
            load_ensemble(self._write(tmp_path, data))
        assert excinfo.value.invariant == "unit_trace"
        assert excinfo.value.index == 1

    def test_prior_sum(self, tmp_path):
        data = _doc([_state(0.5, [0.5, 0.5]), _state(0.6, [1.0, 0.0])])
        with pytest.raises(EnsembleFileError) as excinfo:
            load_ensemble(self._write(tmp_path, data))
        assert excinfo.value.invariant == "prior_sum"

    def test_unknown_family_kind(self, tmp_path):
        data = _doc([_state(0.5, [0.5, 0.5]), _state(0.5, [1.0, 0.0])], family={"kind": "qutrit"})
        with pytest.raises(EnsembleFileError):
            read_ensemble_file(self._write(tmp_path, data))

    def test_bad_family_range(self, tmp_path):
        family = {"kind": "qubit", "n": 2, "theta": math.pi / 2, "r": 1.5}
        data = _doc([_state(0.5, [0.5, 0.5]), _state(0.5, [1.0, 0.0])], family=family)
        with pytest.raises(EnsembleFileError):
            read_ensemble_file(self._write(tmp_path, data))

    def test_errors_are_value_errors(self, tmp_path):
        with pytest.raises(ValueError):
            read_ensemble_file(tmp_path / "absent.json")


class TestSameEnsemble:
    def test_order_matters(self, trine):
        shuffled = Ensemble.uniform([trine.states[1], trine.states[0], trine.states[2]])
        assert not same_ensemble(trine, shuffled, 1e-12)
        assert same_ensemble(trine, trine, 0.0)
