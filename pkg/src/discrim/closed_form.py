"""Closed-form optimal discrimination for the known cases."""

import logging
import math
from typing import Sequence

import numpy as np

from src.discrim.povm import POVM
from src.linalg.errors import DimensionError, POVMError
from src.linalg.matcore import trace_positive_part
from src.states.families import symmetric_kets
from src.states.operators import DensityOperator, PAULI_X, PAULI_Y

logger = logging.getLogger(__name__)

# |c_k| at or below this has no usable phase
ZERO_COEFF = 1e-15


def helstrom_two_state(rho0: DensityOperator, rho1: DensityOperator, mu0: float) -> float:
    """mu1 + tr(mu0 rho0 - mu1 rho1)_+."""
    if rho0.dim != rho1.dim:
        raise DimensionError(f"dimensions differ: {rho0.dim} vs {rho1.dim}")
    if not 0.0 <= mu0 <= 1.0:
        raise ValueError(f"mu0 = {mu0} outside [0, 1]")
    mu1 = 1.0 - mu0
    value = mu1 + trace_positive_part(mu0 * rho0.matrix - mu1 * rho1.matrix)
    return float(min(1.0, max(value, mu0, mu1)))


def symmetric_pure_success(n: int, c: Sequence[complex]) -> float:
    """(1/N)(sum_k |c_k|)^2."""
    return float(np.sum(np.abs(np.asarray(c, dtype=np.complex128))) ** 2 / n)


def symmetric_pure_optimal_povm(n: int, c: Sequence[complex]) -> POVM:
    """M_j = |mu_j><mu_j|, |mu_j> = N^-1/2 sum_k (c_k/|c_k|) e^{2 pi i j (k-1)/N} |k>.

    Every c_k must be nonzero: the phase c_k/|c_k| is otherwise undefined.
    """
    coeffs = np.asarray(c, dtype=np.complex128).reshape(-1)
    zero = [k for k, v in enumerate(coeffs) if abs(v) <= ZERO_COEFF]
    if zero:
        raise POVMError(
            f"coefficients {zero} vanish; the symmetric measurement needs every c_k != 0"
        )
    phases = coeffs / np.abs(coeffs)
    # unit-modulus "coefficients" scaled by 1/sqrt(D) reuse the ket generator
    d = len(coeffs)
    kets = symmetric_kets(n, phases / math.sqrt(d))
    scale = d / n
    return POVM(tuple(scale * np.outer(k, k.conj()) for k in kets))


def equatorial_projector(phi: float) -> np.ndarray:
    """|e><e| for the pure qubit state with Bloch vector (cos phi, sin phi, 0)."""
    return 0.5 * (np.eye(2) + math.cos(phi) * PAULI_X + math.sin(phi) * PAULI_Y)


def symmetric_qubit_optimal_povm(n: int, theta: float = math.pi / 2) -> POVM:
    """M_j = (2/N)|e_j><e_j| with e_j at azimuth 2 pi j/N.

    When sin(theta) < 0 the family's equatorial components point the other
    way, so the azimuths shift by pi.
    """
    if n < 2:
        raise POVMError(f"N must be at least 2, got {n}")
    offset = math.pi if math.sin(theta) < 0 else 0.0
    return POVM(tuple(
        (2.0 / n) * equatorial_projector(2.0 * math.pi * j / n + offset) for j in range(n)
    ))
