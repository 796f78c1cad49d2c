"""Symmetric state families.

Qubit families rotate about the z axis of the Bloch sphere. The three-state
mixed example whose symmetry axis is y is available in both frames through
``trine_mixed_ensemble``; the two frames differ by a fixed global unitary,
so every bound and success probability agrees between them.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import StateError
from src.linalg.matcore import unitary_from_generator
from src.states.operators import (
    PAULI_Y,
    PAULI_Z,
    BlochVector,
    DensityOperator,
    Ensemble,
    bloch_from_density,
    density_from_bloch,
)

logger = logging.getLogger(__name__)


def reduce_polar_angle(theta: float) -> float:
    """Map theta into [0, pi] keeping cos(theta) and |sin(theta)|."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t < 0:
        t += 2.0 * math.pi
    return 2.0 * math.pi - t if t > math.pi else t


def z_rotation(angle: float) -> np.ndarray:
    """exp(-i angle sigma_z / 2): rotates Bloch vectors by angle about z."""
    return unitary_from_generator(angle, 0.5 * PAULI_Z)


def symmetric_qubit_family(n: int, theta: float, r: float) -> Ensemble:
    """N equiprobable qubit states with Bloch vectors
    r (sin t cos 2pi j/N, sin t sin 2pi j/N, cos t).

    theta is used as given; outside [0, pi] the result is a z-rotated or
    reordered copy of the family at reduce_polar_angle(theta).
    """
    if n < 2:
        raise StateError(f"N must be at least 2, got {n}", invariant="ensemble_size")
    if not 0.0 <= r <= 1.0:
        raise StateError(f"r = {r} is outside [0, 1]", invariant="bloch_length")

    states = [
        density_from_bloch(BlochVector.spherical(r, theta, 2.0 * math.pi * j / n))
        for j in range(n)
    ]
    logger.debug("Built symmetric qubit family N=%d theta=%.6g r=%.6g", n, theta, r)
    return Ensemble.uniform(states)


def trine_mixed_ensemble(frame: str = "z") -> Ensemble:
    """Three symmetric mixed qubit states of Bloch length 1/3.

    ``frame="y"`` builds them literally: rho_0 = (I - sigma_z/3)/2 rotated
    by 2pi/3 about the y axis. ``frame="z"`` is the canonical equatorial
    family ``symmetric_qubit_family(3, pi/2, 1/3)``.
    """
    if frame == "z":
        return symmetric_qubit_family(3, math.pi / 2, 1.0 / 3.0)
    if frame != "y":
        raise ValueError(f"frame must be 'z' or 'y', got {frame!r}")

    rho0 = density_from_bloch(BlochVector(0.0, 0.0, -1.0 / 3.0))
    v = unitary_from_generator(2.0 * math.pi / 3.0, 0.5 * PAULI_Y)
    states = [rho0]
    for _ in range(2):
        states.append(states[-1].conjugate(v))
    return Ensemble.uniform(states)


def _coefficients(c: Sequence[complex]) -> np.ndarray:
    coeffs = np.asarray(c, dtype=np.complex128).reshape(-1)
    norm_sq = float(np.sum(np.abs(coeffs) ** 2))
    if abs(norm_sq - 1.0) > settings.state_tol:
        raise StateError(f"sum |c_k|^2 = {norm_sq:.12g}, expected 1", invariant="normalized")
    return coeffs


def symmetric_kets(n: int, c: Sequence[complex]) -> List[np.ndarray]:
    """|phi_j> = sum_k c_k exp(2 pi i j (k-1)/N) |k>, j = 0..N-1."""
    coeffs = _coefficients(c)
    d = len(coeffs)
    if n < 2:
        raise StateError(f"N must be at least 2, got {n}", invariant="ensemble_size")
    if d > n:
        raise StateError(f"D = {d} exceeds N = {n}", invariant="dimension")
    k = np.arange(d)
    return [coeffs * np.exp(2j * math.pi * j * k / n) for j in range(n)]


def symmetric_pure_family(n: int, c: Sequence[complex]) -> Ensemble:
    """Equiprobable pure symmetric states in dimension len(c)."""
    return Ensemble.uniform(DensityOperator.from_ket(ket) for ket in symmetric_kets(n, c))


def _perpendicular(v: np.ndarray) -> np.ndarray:
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(v)))] = 1.0
    w = np.cross(v, helper)
    return w / np.linalg.norm(w)


def match_symmetric_qubit(ensemble: Ensemble, tol: float = 1e-8) -> Optional[Tuple[float, float]]:
    """(theta, r) if the ensemble is a globally rotated symmetric_qubit_family(N, theta, r).

    Members must appear in family order (either sense of rotation). The axis
    is oriented along the mean Bloch vector, so theta is returned in [0, pi/2].
    """
    if ensemble.dim != 2 or not ensemble.is_uniform():
        return None
    n = ensemble.size
    vecs = np.array([bloch_from_density(s).vector for s in ensemble.states])
    r = float(np.linalg.norm(vecs[0]))
    if r <= tol:
        return (0.0, 0.0) if np.all(np.linalg.norm(vecs, axis=1) <= tol) else None

    mean = vecs.mean(axis=0)
    radial = vecs - mean
    spread = float(np.linalg.norm(radial[0]))
    if np.linalg.norm(mean) > tol:
        axis = mean / np.linalg.norm(mean)
    elif spread <= tol:
        return None
    elif n >= 3 and np.linalg.norm(np.cross(radial[0], radial[1])) > tol:
        normal = np.cross(radial[0], radial[1])
        axis = normal / np.linalg.norm(normal)
    else:
        axis = _perpendicular(radial[0])

    theta = math.acos(float(np.clip(np.dot(vecs[0], axis) / r, -1.0, 1.0)))
    x = radial[0] / spread if spread > tol else _perpendicular(axis)
    y = np.cross(axis, x)
    phis = 2.0 * math.pi * np.arange(n) / n
    for yy in (y, -y):
        expected = r * (
            math.sin(theta) * (np.outer(np.cos(phis), x) + np.outer(np.sin(phis), yy))
            + math.cos(theta) * axis
        )
        if float(np.max(np.abs(vecs - expected))) <= tol:
            return theta, r
    return None


def match_symmetric_pure(ensemble: Ensemble, tol: float = 1e-8) -> Optional[np.ndarray]:
    """Coefficients c if the ensemble equals symmetric_pure_family(N, c) in the computational basis."""
    if not ensemble.is_uniform() or ensemble.dim > ensemble.size:
        return None
    if not all(s.is_pure(tol) for s in ensemble.states):
        return None
    rho0 = ensemble.states[0].matrix
    k0 = int(np.argmax(np.real(np.diag(rho0))))
    c = rho0[:, k0] / math.sqrt(float(np.real(rho0[k0, k0])))
    c = c / np.linalg.norm(c)
    try:
        kets = symmetric_kets(ensemble.size, c)
    except StateError:
        return None
    for ket, state in zip(kets, ensemble.states):
        if float(np.max(np.abs(np.outer(ket, ket.conj()) - state.matrix))) > tol:
            return None
    return c
