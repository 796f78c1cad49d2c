import math

import numpy as np
import pytest

from src.discrim.closed_form import helstrom_two_state, symmetric_pure_success
from src.discrim.l4 import l4_bound
from src.oracle import optimizer
from src.oracle.optimizer import optimize_povm, random_restarts, random_start
from src.states.families import symmetric_pure_family, symmetric_qubit_family
from src.states.operators import DensityOperator, Ensemble
from src.states.spin import equal_angles, spin_family
from tests.helpers import random_density, random_two_state_qubit


class TestOptimizePOVM:
    def test_trine(self, trine):
        result = optimize_povm(trine)
        assert result.converged
        assert result.success == pytest.approx(4 / 9, abs=1e-6)
        assert result.certificate_gap >= -1e-8

    def test_orthogonal_pair(self, orthogonal_pair):
        result = optimize_povm(orthogonal_pair)
        assert result.success == pytest.approx(1.0, abs=1e-6)

    def test_symmetric_pure(self):
        theta = math.pi / 3
        family = symmetric_qubit_family(4, theta, 1.0)
        result = optimize_povm(family)
        assert result.converged
        assert result.success == pytest.approx((1 + math.sin(theta)) / 4, abs=1e-6)

    def test_symmetric_pure_qutrit(self):
        c = np.array([0.5, 0.5, math.sqrt(0.5)])
        result = optimize_povm(symmetric_pure_family(5, c))
        assert result.success == pytest.approx(symmetric_pure_success(5, c), abs=1e-6)

    def test_history_is_monotone(self, rng):
        ensemble = Ensemble.uniform([random_density(rng, 3) for _ in range(4)])
        history = optimize_povm(ensemble, max_iters=200).history
        assert all(b >= a - 1e-10 for a, b in zip(history, history[1:]))

    def test_identical_states_stop_immediately(self):
        rho = DensityOperator(np.eye(2) / 2)
        result = optimize_povm(Ensemble.uniform([rho, rho, rho]))
        assert result.iterations == 0
        assert result.success == pytest.approx(1 / 3)

    def test_duplicated_pure_state(self):
        rho = DensityOperator(np.diag([1.0, 0.0]))
        result = optimize_povm(Ensemble.uniform([rho] * 4))
        assert result.converged
        assert result.success == pytest.approx(0.25, abs=1e-9)

    def test_helstrom(self, rng):
        for _ in range(20):
            ensemble = random_two_state_qubit(rng)
            expected = helstrom_two_state(ensemble.states[0], ensemble.states[1], ensemble.priors[0])
            assert optimize_povm(ensemble).success == pytest.approx(expected, abs=1e-6)

    def test_non_uniform_priors(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            dim = int(rng.choice([2, 3]))
            priors = rng.dirichlet(np.ones(n))
            ensemble = Ensemble(tuple(priors / priors.sum()), tuple(random_density(rng, dim) for _ in range(n)))
            result = optimize_povm(ensemble, max_iters=100)
            assert result.success >= 1 / n - 1e-12
            assert result.success <= 1 - l4_bound(ensemble) + 1e-9
            if result.converged:
                assert result.certificate_gap >= -1e-8

    def test_invalid_iterate_ends_run(self, trine, monkeypatch):
        def inflated(weighted, elements):
            return [1.01 * m for m in elements], False

        monkeypatch.setattr(optimizer, "_step", inflated)
        result = optimize_povm(trine, max_iters=50)
        assert not result.converged
        assert result.iterations == 1
        assert result.success == pytest.approx(1 / 3)
        assert len(result.history) == 1

    def test_iteration_cap(self, trine):
        result = optimize_povm(trine, max_iters=1, tol=1e-15)
        assert result.iterations == 1
        assert not result.converged

    def test_rejects_zero_iterations(self, trine):
        with pytest.raises(ValueError):
            optimize_povm(trine, max_iters=0)

    def test_custom_start(self, trine, rng):
        start = random_start(3, 2, rng)
        result = optimize_povm(trine, initial=start, start=7)
        assert result.start == 7
        assert result.success == pytest.approx(4 / 9, abs=1e-6)


class TestRandomStart:
    def test_complete_and_positive(self, rng):
        elements = random_start(4, 3, rng)
        assert np.linalg.norm(sum(elements) - np.eye(3)) <= 1e-10
        for m in elements:
            assert np.linalg.eigvalsh(m).min() > 0


class TestRandomRestarts:
    def test_single_restart_is_uniform_start(self, trine):
        single = random_restarts(trine, restarts=1, seed=3)
        direct = optimize_povm(trine)
        assert single.start == 0
        assert single.success == direct.success
        assert single.iterations == direct.iterations

    def test_seed_determinism(self, rng):
        ensemble = Ensemble.uniform([random_density(rng, 3) for _ in range(3)])
        a = random_restarts(ensemble, restarts=4, seed=11, max_iters=300)
        b = random_restarts(ensemble, restarts=4, seed=11, max_iters=300, max_workers=1)
        assert a.start == b.start
        assert a.success == b.success

    def test_rejects_zero_restarts(self, trine):
        with pytest.raises(ValueError):
            random_restarts(trine, restarts=0)

    def test_spin1_below_no_signaling_bound(self, spin1):
        result = random_restarts(spin_family(spin1, 0.4, equal_angles(3)), restarts=3, seed=0)
        assert result.success <= (1 + math.sqrt(2) * 0.4) / 3 + 1e-6

    def test_every_trine_start_agrees(self, trine, rng):
        for k in range(1, 5):
            result = optimize_povm(trine, initial=random_start(3, 2, rng), start=k)
            assert result.success == pytest.approx(4 / 9, abs=1e-6)
