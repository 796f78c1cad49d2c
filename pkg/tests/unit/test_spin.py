import math

import numpy as np
import pytest

from src.linalg import StateError
from src.linalg.matcore import frobenius, min_eigenvalue
from src.states.operators import PAULI_X, PAULI_Y, PAULI_Z
from src.states.spin import equal_angles, spin_family, spin_generators, spin_seed


class TestSpinGenerators:
    @pytest.mark.parametrize("two_j", [1, 2, 3, 4, 6])
    def test_commutation_relations(self, two_j):
        assert spin_generators(two_j).commutator_residual() <= 1e-12

    @pytest.mark.parametrize("two_j", [1, 2, 3, 4])
    def test_casimir(self, two_j):
        sys_ = spin_generators(two_j)
        casimir = sum(g @ g for g in sys_.generators)
        j = sys_.j
        assert frobenius(casimir, j * (j + 1) * np.eye(sys_.dim)) <= 1e-12

    def test_spin_half_is_half_paulis(self):
        sys_ = spin_generators(1)
        for g, s in zip(sys_.generators, (PAULI_X, PAULI_Y, PAULI_Z)):
            assert frobenius(g, 0.5 * s) <= 1e-15

    def test_spin1_j3(self, spin1):
        np.testing.assert_allclose(np.diag(spin1.j3).real, [1.0, 0.0, -1.0])
        assert spin1.dim == 3
        assert spin1.j == 1.0

    def test_rejects_zero(self):
        with pytest.raises(StateError):
            spin_generators(0)

    def test_generators_are_read_only(self, spin1):
        with pytest.raises(ValueError):
            spin1.j1[0, 0] = 1.0


class TestSpinFamily:
    def test_members_are_rotations_of_the_seed(self, spin1):
        thetas = (0.0, 0.9, 2.1)
        family = spin_family(spin1, 0.3, thetas)
        rho0 = family.states[0].matrix
        for t, state in zip(thetas, family.states):
            u = spin1.rotation(t)
            assert frobenius(state.matrix, u @ rho0 @ u.conj().T) <= 1e-12

    def test_seed_has_the_requested_generator_mix(self, spin1):
        family = spin_family(spin1, 0.3, (0.0, 1.0))
        expected = (np.eye(3) + 0.3 * (-spin1.j1 + spin1.j3)) / 3.0
        assert frobenius(family.states[0].matrix, expected) <= 1e-15

    def test_alpha_zero_is_maximally_mixed(self, spin1):
        family = spin_family(spin1, 0.0, equal_angles(3))
        for state in family.states:
            assert frobenius(state.matrix, np.eye(3) / 3) <= 1e-15

    def test_spin1_positivity_edge(self, spin1):
        # min eigenvalue of (I + a(-J1 + J3))/3 is (1 - sqrt(2) a)/3
        edge = 1.0 / math.sqrt(2.0)
        assert abs(min_eigenvalue(spin_seed(spin1, (-edge, 0.0, edge)))) <= 1e-12
        with pytest.raises(StateError) as excinfo:
            spin_family(spin1, edge + 1e-3, (0.0, 1.0))
        assert excinfo.value.invariant == "positive"

    def test_needs_two_angles(self, spin1):
        with pytest.raises(StateError):
            spin_family(spin1, 0.3, (0.0,))

    def test_equal_angles(self):
        assert equal_angles(3) == pytest.approx((0.0, 2 * math.pi / 3, 4 * math.pi / 3))
