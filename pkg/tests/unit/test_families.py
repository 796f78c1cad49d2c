import math

import numpy as np
import pytest

from src.linalg import StateError
from src.linalg.matcore import frobenius
from src.states.families import (
    match_symmetric_pure,
    match_symmetric_qubit,
    reduce_polar_angle,
    symmetric_kets,
    symmetric_pure_family,
    symmetric_qubit_family,
    trine_mixed_ensemble,
    z_rotation,
)
from src.states.operators import Ensemble, bloch_from_density
from tests.helpers import random_density


class TestSymmetricQubitFamily:
    def test_bloch_vectors(self):
        family = symmetric_qubit_family(4, math.pi / 3, 0.5)
        for j, state in enumerate(family.states):
            phi = 2 * math.pi * j / 4
            expected = 0.5 * np.array([
                math.sin(math.pi / 3) * math.cos(phi),
                math.sin(math.pi / 3) * math.sin(phi),
                math.cos(math.pi / 3),
            ])
            np.testing.assert_allclose(bloch_from_density(state).vector, expected, atol=1e-12)

    def test_rotation_symmetry(self):
        family = symmetric_qubit_family(5, 1.1, 0.8)
        v = z_rotation(2 * math.pi / 5)
        for a, b in zip(family.states, family.states[1:]):
            assert frobenius(a.conjugate(v).matrix, b.matrix) <= 1e-12

    def test_range_checks(self):
        with pytest.raises(StateError):
            symmetric_qubit_family(1, 1.0, 0.5)
        with pytest.raises(StateError):
            symmetric_qubit_family(3, 1.0, 1.5)


class TestTrine:
    def test_two_frames_agree_on_purity_and_average(self, trine, trine_y):
        for a, b in zip(trine.states, trine_y.states):
            assert a.purity() == pytest.approx(5.0 / 9.0, abs=1e-12)
            assert b.purity() == pytest.approx(5.0 / 9.0, abs=1e-12)
        assert frobenius(sum(trine_y.weighted()), np.eye(2) / 2) <= 1e-12

    def test_y_frame_seed(self, trine_y):
        n = bloch_from_density(trine_y.states[0])
        assert (n.x, n.y, n.z) == pytest.approx((0.0, 0.0, -1.0 / 3.0), abs=1e-15)

    def test_unknown_frame(self):
        with pytest.raises(ValueError):
            trine_mixed_ensemble("x")


class TestSymmetricPure:
    def test_kets_are_normalized(self):
        for ket in symmetric_kets(5, (0.6, 0.8j)):
            assert np.linalg.norm(ket) == pytest.approx(1.0)

    def test_dimension_cannot_exceed_n(self):
        with pytest.raises(StateError):
            symmetric_kets(2, np.ones(3) / math.sqrt(3))

    def test_unnormalized_coefficients(self):
        with pytest.raises(StateError):
            symmetric_pure_family(3, (1.0, 1.0))

    def test_states_are_pure(self):
        for state in symmetric_pure_family(4, (0.5, 0.5, 0.5, 0.5)).states:
            assert state.is_pure()


class TestReducePolarAngle:
    @pytest.mark.parametrize("theta,expected", [
        (0.3, 0.3),
        (-0.3, 0.3),
        (math.pi + 0.2, math.pi - 0.2),
        (2 * math.pi + 0.5, 0.5),
    ])
    def test_values(self, theta, expected):
        assert reduce_polar_angle(theta) == pytest.approx(expected, abs=1e-12)


class TestMatchers:
    @pytest.mark.parametrize("n,theta,r", [(3, math.pi / 2, 1 / 3), (4, 0.7, 0.9), (5, 2.5, 1.0)])
    def test_recognizes_canonical_family(self, n, theta, r):
        match = match_symmetric_qubit(symmetric_qubit_family(n, theta, r))
        assert match is not None
        # the axis is taken along the mean Bloch vector, so theta comes back in [0, pi/2]
        assert match == pytest.approx((min(theta, math.pi - theta), r), abs=1e-9)

    def test_recognizes_rotated_frame(self, trine_y):
        match = match_symmetric_qubit(trine_y)
        assert match == pytest.approx((math.pi / 2, 1 / 3), abs=1e-9)

    def test_recognizes_reversed_order(self):
        family = symmetric_qubit_family(4, 0.7, 0.9)
        reversed_ = Ensemble.uniform([family.states[0], *reversed(family.states[1:])])
        assert match_symmetric_qubit(reversed_) == pytest.approx((0.7, 0.9), abs=1e-9)

    def test_rejects_shuffled_order(self):
        family = symmetric_qubit_family(5, 1.0, 0.9)
        s = family.states
        assert match_symmetric_qubit(Ensemble.uniform([s[0], s[2], s[1], s[3], s[4]])) is None

    def test_rejects_non_uniform_priors(self):
        family = symmetric_qubit_family(3, 1.0, 0.5)
        assert match_symmetric_qubit(Ensemble((0.5, 0.25, 0.25), family.states)) is None

    def test_rejects_qutrits(self, rng):
        states = [random_density(rng, 3) for _ in range(3)]
        assert match_symmetric_qubit(Ensemble.uniform(states)) is None

    def test_pure_match(self):
        c = np.array([0.6, 0.8j])
        found = match_symmetric_pure(symmetric_pure_family(5, c))
        assert found is not None
        assert np.abs(found) == pytest.approx(np.abs(c), abs=1e-12)

    def test_pure_match_rejects_mixed(self, trine):
        assert match_symmetric_pure(trine) is None
