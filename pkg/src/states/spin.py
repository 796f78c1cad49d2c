"""Spin-j generators and rotated spin-j state families."""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import StateError
from src.linalg.matcore import min_eigenvalue, readonly, unitary_from_generator
from src.states.operators import DensityOperator, Ensemble

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpinSystem:
    """Generators J1, J2, J3 of the (2j+1)-dimensional irreducible representation."""
    two_j: int
    j1: np.ndarray = field(repr=False)
    j2: np.ndarray = field(repr=False)
    j3: np.ndarray = field(repr=False)

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def generators(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.j1, self.j2, self.j3

    def along(self, v: Sequence[float]) -> np.ndarray:
        """v . J"""
        return sum(c * g for c, g in zip(v, self.generators))

    def commutator_residual(self) -> float:
        """Largest Frobenius norm of [J_a, J_b] - i J_c over cyclic pairs."""
        gens = self.generators
        worst = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            comm = gens[a] @ gens[b] - gens[b] @ gens[a]
            worst = max(worst, float(np.linalg.norm(comm - 1j * gens[c])))
        return worst

    def rotation(self, theta: float) -> np.ndarray:
        """U = exp(-i theta J3)."""
        return unitary_from_generator(theta, self.j3)


def spin_generators(two_j: int) -> SpinSystem:
    """Build J1, J2, J3 from the ladder matrix elements in the |j, m> basis, m = j..-j."""
    if two_j < 1:
        raise StateError(f"two_j must be at least 1, got {two_j}", invariant="spin")

    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    # <j, m+1| J+ |j, m> sits one row above the column of m
    raise_ = np.zeros((two_j + 1, two_j + 1), dtype=np.complex128)
    for col in range(1, two_j + 1):
        mm = m[col]
        raise_[col - 1, col] = math.sqrt((j - mm) * (j + mm + 1))
    lower = raise_.conj().T

    sys_ = SpinSystem(
        two_j=two_j,
        j1=readonly(0.5 * (raise_ + lower)),
        j2=readonly(-0.5j * (raise_ - lower)),
        j3=readonly(np.diag(m).astype(np.complex128)),
    )
    residual = sys_.commutator_residual()
    if residual > settings.hermitian_tol:
        raise StateError(f"commutation residual {residual:.3e}", invariant="commutation")
    return sys_


def rotated_family(sys_: SpinSystem, seed_matrix: np.ndarray, thetas: Sequence[float]):
    """Conjugate one operator by exp(-i theta_k J3) for every angle."""
    return [sys_.rotation(t) @ seed_matrix @ sys_.rotation(t).conj().T for t in thetas]


def spin_seed(sys_: SpinSystem, v: Sequence[float]) -> np.ndarray:
    """(I + v . J)/(2j+1)."""
    return (np.eye(sys_.dim, dtype=np.complex128) + sys_.along(v)) / sys_.dim


def spin_family(sys_: SpinSystem, alpha: float, thetas: Sequence[float]) -> Ensemble:
    """rho_k = U_k rho_0 U_k^dagger with rho_0 = (I + alpha(-J1 + J3))/(2j+1)."""
    if len(thetas) < 2:
        raise StateError("need at least two angles", invariant="ensemble_size")
    rho0 = spin_seed(sys_, (-alpha, 0.0, alpha))
    lowest = min_eigenvalue(rho0)
    if lowest < -settings.state_tol:
        raise StateError(
            f"alpha = {alpha:.6g} gives min eigenvalue {lowest:.3e}; rho_0 is not positive",
            invariant="positive",
        )
    states = [DensityOperator(m) for m in rotated_family(sys_, rho0, thetas)]
    logger.debug("Built spin-%g family alpha=%.6g with %d states", sys_.j, alpha, len(states))
    return Ensemble.uniform(states)


def equal_angles(n: int) -> Tuple[float, ...]:
    return tuple(2.0 * math.pi * k / n for k in range(n))
