"""Density operators, Bloch vectors and ensembles."""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import NotHermitianError, StateError
from src.linalg.matcore import (
    MatrixLike,
    as_matrix,
    eig_hermitian,
    readonly,
    symmetrize,
    trace_positive_part,
)

logger = logging.getLogger(__name__)

IDENTITY_2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _checked_density(data: MatrixLike) -> np.ndarray:
    tol = settings.state_tol
    try:
        m = symmetrize(as_matrix(data), tol=tol)
    except NotHermitianError as e:
        raise StateError(str(e), invariant="hermitian") from e
    except ValueError as e:
        raise StateError(str(e), invariant="shape") from e

    tr = float(np.real(np.trace(m)))
    if abs(tr - 1.0) > tol:
        raise StateError(f"trace is {tr:.12g}, expected 1", invariant="unit_trace")
    lowest = float(eig_hermitian(m).eigenvalues[0])
    if lowest < -tol:
        raise StateError(f"min eigenvalue {lowest:.3e} is below -{tol:.0e}", invariant="positive")
    return m


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix.

    Validated at construction; input within tolerance of Hermitian is
    stored symmetrized.
    """
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", readonly(_checked_density(self.matrix)))

    @classmethod
    def from_matrix(cls, data: MatrixLike, index: Optional[int] = None) -> "DensityOperator":
        """Like the constructor, but errors carry the member index."""
        try:
            return cls(data)
        except StateError as e:
            raise StateError(e.detail, invariant=e.invariant, index=index) from e

    @classmethod
    def from_ket(cls, ket: Sequence[complex]) -> "DensityOperator":
        v = np.asarray(ket, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > settings.state_tol:
            raise StateError(f"ket norm is {norm:.12g}", invariant="normalized")
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def conjugate(self, u: np.ndarray) -> "DensityOperator":
        """U rho U^dagger."""
        return DensityOperator(u @ self.matrix @ u.conj().T)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, tol: float = 1e-12) -> bool:
        return abs(self.purity() - 1.0) <= tol


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector n with rho = (I + n . sigma)/2."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        length = self.length
        if not np.isfinite(length):
            raise StateError("Bloch vector has non-finite components", invariant="bloch_finite")
        if length > 1.0 + settings.state_tol:
            raise StateError(f"|n| = {length:.12g} exceeds 1", invariant="bloch_length")

    @classmethod
    def spherical(cls, radius: float, theta: float, phi: float) -> "BlochVector":
        return cls(
            radius * np.sin(theta) * np.cos(phi),
            radius * np.sin(theta) * np.sin(phi),
            radius * np.cos(theta),
        )

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def length(self) -> float:
        return float(np.linalg.norm([self.x, self.y, self.z]))


def density_from_bloch(n: BlochVector) -> DensityOperator:
    """(I + n . sigma)/2."""
    m = IDENTITY_2 + sum(c * s for c, s in zip(n.vector, PAULIS))
    return DensityOperator(0.5 * m)


def bloch_from_density(rho: DensityOperator) -> BlochVector:
    """n_a = tr(rho sigma_a)."""
    if rho.dim != 2:
        raise StateError(f"Bloch vectors need dimension 2, got {rho.dim}", invariant="dimension")
    comps = [float(np.real(np.trace(rho.matrix @ s))) for s in PAULIS]
    return BlochVector(*comps)


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """(1/2)||rho - sigma||_1, evaluated as tr(rho - sigma)_+."""
    return trace_positive_part(rho.matrix - sigma.matrix)


@dataclass(frozen=True)
class Ensemble:
    """Prior-weighted list of same-dimension states (at least two)."""
    priors: Tuple[float, ...]
    states: Tuple[DensityOperator, ...]

    def __post_init__(self):
        priors = tuple(float(p) for p in self.priors)
        states = tuple(self.states)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)

        if len(priors) != len(states):
            raise StateError(
                f"{len(priors)} priors for {len(states)} states", invariant="ensemble_length"
            )
        if len(states) < 2:
            raise StateError("an ensemble needs at least 2 members", invariant="ensemble_size")
        for i, p in enumerate(priors):
            if not np.isfinite(p) or p < 0:
                raise StateError(f"prior {p} is negative", invariant="prior_nonnegative", index=i)
        total = sum(priors)
        if abs(total - 1.0) > settings.prior_tol:
            raise StateError(f"priors sum to {total:.15g}", invariant="prior_sum")
        dim = states[0].dim
        for i, s in enumerate(states):
            if s.dim != dim:
                raise StateError(
                    f"dimension {s.dim} differs from {dim}", invariant="same_dimension", index=i
                )

    @classmethod
    def uniform(cls, states: Iterable[DensityOperator]) -> "Ensemble":
        states = tuple(states)
        return cls(tuple([1.0 / len(states)] * len(states)), states)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def matrices(self) -> List[np.ndarray]:
        return [s.matrix for s in self.states]

    def weighted(self) -> List[np.ndarray]:
        """mu_k rho_k for every member."""
        return [p * s.matrix for p, s in zip(self.priors, self.states)]

    def conjugate(self, u: np.ndarray) -> "Ensemble":
        return Ensemble(self.priors, tuple(s.conjugate(u) for s in self.states))

    def is_uniform(self, tol: float = 1e-12) -> bool:
        return all(abs(p - 1.0 / self.size) <= tol for p in self.priors)
