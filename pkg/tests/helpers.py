"""Random instances for property tests."""

import numpy as np

from src.states.operators import BlochVector, DensityOperator, Ensemble, density_from_bloch


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_bloch_state(rng, max_length=1.0):
    v = rng.standard_normal(3)
    v *= rng.uniform(0.0, max_length) / np.linalg.norm(v)
    return density_from_bloch(BlochVector(*v))


def random_two_state_qubit(rng):
    mu0 = float(rng.uniform(0.1, 0.9))
    return Ensemble((mu0, 1.0 - mu0), (random_bloch_state(rng), random_bloch_state(rng)))
