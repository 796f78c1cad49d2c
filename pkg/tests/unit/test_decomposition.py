import math

import numpy as np
import pytest

from src.linalg import DecompositionError, StateError
from src.linalg.matcore import frobenius, min_eigenvalue
from src.nosignal.decomposition import (
    Decomposition,
    DecompositionFamily,
    alpha_max,
    beta_max,
    build_qubit_family,
    build_spin_family,
    qubit_delta_states,
    spin_sigma_states,
)
from src.states.families import z_rotation
from src.states.operators import DensityOperator, bloch_from_density
from src.states.spin import equal_angles, spin_generators, spin_seed


def _mixed(dim):
    return DensityOperator(np.eye(dim) / dim)


class TestDecomposition:
    def test_average(self):
        up = DensityOperator(np.diag([1.0, 0.0]))
        down = DensityOperator(np.diag([0.0, 1.0]))
        d = Decomposition(weights=(0.25, 0.75), states=(up, down))
        np.testing.assert_allclose(d.average, np.diag([0.25, 0.75]))
        assert d.target_weight == 0.25

    @pytest.mark.parametrize("weights", [(0.5, 0.6), (-0.1, 1.1), (1.0,)])
    def test_rejects_bad_weights(self, weights):
        with pytest.raises(DecompositionError):
            Decomposition(weights=weights, states=(_mixed(2), _mixed(2)))

    def test_rejects_target_out_of_range(self):
        with pytest.raises(DecompositionError):
            Decomposition(weights=(0.5, 0.5), states=(_mixed(2), _mixed(2)), target_index=2)

    def test_family_rejects_different_averages(self):
        up = DensityOperator(np.diag([1.0, 0.0]))
        a = Decomposition(weights=(1.0,), states=(up,))
        b = Decomposition(weights=(1.0,), states=(_mixed(2),))
        with pytest.raises(DecompositionError, match="averages differ"):
            DecompositionFamily((a, b))

    def test_family_needs_two(self):
        with pytest.raises(DecompositionError):
            DecompositionFamily((Decomposition(weights=(1.0,), states=(_mixed(2),)),))


class TestQubitDelta:
    def test_trine_first_delta(self):
        deltas = qubit_delta_states(3, math.pi / 2)
        n = bloch_from_density(deltas[0])
        assert (n.x, n.y, n.z) == pytest.approx((-1.0, 0.0, 0.0), abs=1e-15)

    def test_all_pure(self):
        for theta in (0.3, 2.0, -1.0):
            for delta in qubit_delta_states(5, theta):
                assert delta.is_pure()

    def test_negative_sine_flips(self):
        n = bloch_from_density(qubit_delta_states(4, -math.pi / 2)[0])
        assert n.x == pytest.approx(1.0)

    def test_rotation_symmetric(self):
        deltas = qubit_delta_states(4, 1.0)
        v = z_rotation(2 * math.pi / 4)
        for a, b in zip(deltas, deltas[1:]):
            assert frobenius(a.conjugate(v).matrix, b.matrix) <= 1e-12

    @pytest.mark.parametrize("theta", [0.0, math.pi])
    def test_degenerate_angle(self, theta):
        with pytest.raises(DecompositionError, match="degenerate"):
            qubit_delta_states(3, theta)


class TestBuildQubitFamily:
    def test_trine_weight(self):
        family = build_qubit_family(3, math.pi / 2, 1 / 3)
        assert family.target_weights == pytest.approx([0.75] * 3, abs=1e-15)
        assert family.construction == "qubit-delta"

    def test_pure_equatorial_weight(self):
        family = build_qubit_family(4, math.pi / 2, 1.0)
        assert family.target_weights == pytest.approx([0.5] * 4)

    @pytest.mark.parametrize("n", [2, 3, 6])
    @pytest.mark.parametrize("theta", [0.2, 1.3, 2.9])
    def test_averages_on_z_axis(self, n, theta):
        family = build_qubit_family(n, theta, 0.7)
        assert family.average_spread() <= 1e-12
        avg = bloch_from_density(DensityOperator(family.average))
        assert abs(avg.x) <= 1e-12 and abs(avg.y) <= 1e-12

    def test_shorter_delta_costs_weight(self):
        canonical = build_qubit_family(3, 1.0, 0.5)
        mixed = build_qubit_family(3, 1.0, 0.5, delta_length=0.5)
        assert mixed.target_weights[0] < canonical.target_weights[0]
        assert mixed.average_spread() <= 1e-12


class TestSpinConstruction:
    def test_beta_max_spin1(self, spin1):
        assert beta_max(spin1) == pytest.approx(1 / math.sqrt(2), abs=1e-9)

    def test_beta_max_spin_half(self):
        assert beta_max(spin_generators(1)) == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_alpha_max_matches_beta_max(self, spin1):
        # (-a, 0, a) and (b, 0, b) have the same length
        assert alpha_max(spin1) == pytest.approx(beta_max(spin1), abs=1e-9)

    def test_sigma_at_beta_max_is_boundary(self, spin1):
        sigma0 = spin_seed(spin1, (beta_max(spin1), 0.0, beta_max(spin1)))
        assert abs(min_eigenvalue(sigma0)) <= 1e-10

    @pytest.mark.parametrize("beta", [0.1, 0.4, 1 / math.sqrt(2)])
    def test_sigma_purity(self, spin1, beta):
        sigma = spin_sigma_states(spin1, beta, (0.0,))[0]
        assert sigma.purity() == pytest.approx((3 + 4 * beta ** 2) / 9, abs=1e-12)

    def test_sigma_tends_to_mixed(self, spin1):
        sigma = spin_sigma_states(spin1, 1e-9, (0.0, 1.0))
        for s in sigma:
            assert frobenius(s.matrix, np.eye(3) / 3) <= 1e-9

    def test_sigma_rejects_large_beta(self, spin1):
        with pytest.raises(StateError):
            spin_sigma_states(spin1, 0.8, (0.0,))

    def test_identical_averages(self, spin1):
        family = build_spin_family(spin1, 0.3, equal_angles(3))
        assert family.average_spread() <= 1e-10
        p = beta_max(spin1) / (0.3 + beta_max(spin1))
        assert family.target_weights == pytest.approx([p] * 3, abs=1e-12)

    def test_average_along_j3(self, spin1):
        family = build_spin_family(spin1, 0.3, (0.0, 0.8, 2.3))
        avg = family.average
        assert abs(np.trace(avg @ spin1.j1)) <= 1e-12
        assert abs(np.trace(avg @ spin1.j2)) <= 1e-12

    def test_negative_alpha(self, spin1):
        family = build_spin_family(spin1, -0.3, equal_angles(3))
        assert family.average_spread() <= 1e-10
