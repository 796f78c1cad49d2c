import math
from pathlib import Path

import numpy as np
import pytest

from src.cli.ensemble_file import QubitFamilySpec, write_ensemble_file
from src.states.families import trine_mixed_ensemble
from src.states.operators import BlochVector, Ensemble, density_from_bloch
from src.states.spin import spin_generators

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def trine():
    return trine_mixed_ensemble("z")


@pytest.fixture
def trine_y():
    return trine_mixed_ensemble("y")


@pytest.fixture(scope="session")
def spin1():
    return spin_generators(2)


@pytest.fixture
def orthogonal_pair():
    return Ensemble.uniform([
        density_from_bloch(BlochVector(1.0, 0.0, 0.0)),
        density_from_bloch(BlochVector(-1.0, 0.0, 0.0)),
    ])


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def trine_file(tmp_path):
    return write_ensemble_file(
        tmp_path / "trine.json",
        trine_mixed_ensemble("z"),
        ensemble_id="trine-mixed",
        family=QubitFamilySpec(n=3, theta=math.pi / 2, r=1.0 / 3.0),
    )


@pytest.fixture
def write_ensemble(tmp_path):
    """Write an ensemble to tmp_path/<name>.json and return the path."""
    def _write(name, ensemble, **kwargs):
        return write_ensemble_file(tmp_path / f"{name}.json", ensemble, **kwargs)
    return _write

