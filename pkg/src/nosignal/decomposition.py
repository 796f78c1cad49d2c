"""Identical-average ensemble decompositions.

A decomposition family holds N convex decompositions of one common
average operator; decomposition k contains the k-th target state with
weight p_k. Any such family bounds the discrimination success of the
targets (see ``src.nosignal.bound``). Families whose averages disagree
are rejected at construction.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import DecompositionError, StateError
from src.linalg.matcore import frobenius, min_eigenvalue, readonly
from src.states.families import symmetric_qubit_family
from src.states.operators import BlochVector, DensityOperator, density_from_bloch
from src.states.spin import SpinSystem, rotated_family, spin_family, spin_seed

logger = logging.getLogger(__name__)

# |sin theta| at or below this makes the delta construction degenerate
DEGENERATE_SIN = 1e-12

BISECTION_TOL = 1e-11
MONOTONE_GRID = 16


@dataclass(frozen=True)
class Decomposition:
    """Convex mixture sum_i w_i rho_i with one designated target member."""
    weights: Tuple[float, ...]
    states: Tuple[DensityOperator, ...]
    target_index: int = 0

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        states = tuple(self.states)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

        if not states or len(weights) != len(states):
            raise DecompositionError(f"{len(weights)} weights for {len(states)} states")
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise DecompositionError(f"weights must be nonnegative: {weights}")
        if abs(sum(weights) - 1.0) > settings.prior_tol:
            raise DecompositionError(f"weights sum to {sum(weights):.15g}")
        if not 0 <= self.target_index < len(states):
            raise DecompositionError(f"target_index {self.target_index} out of range")
        if len({s.dim for s in states}) != 1:
            raise DecompositionError("members have different dimensions")

        average = sum(w * s.matrix for w, s in zip(weights, states))
        object.__setattr__(self, "_average", readonly(average))

    @property
    def average(self) -> np.ndarray:
        return self._average

    @property
    def target(self) -> DensityOperator:
        return self.states[self.target_index]

    @property
    def target_weight(self) -> float:
        return self.weights[self.target_index]

    @property
    def dim(self) -> int:
        return self.states[0].dim


@dataclass(frozen=True)
class DecompositionFamily:
    """N decompositions of a single average operator."""
    decompositions: Tuple[Decomposition, ...]
    construction: str = "custom"

    def __post_init__(self):
        decomps = tuple(self.decompositions)
        object.__setattr__(self, "decompositions", decomps)
        if len(decomps) < 2:
            raise DecompositionError("a decomposition family needs N >= 2 decompositions")
        if len({d.dim for d in decomps}) != 1:
            raise DecompositionError("decompositions have different dimensions")

        spread = self.average_spread()
        if spread > settings.average_tol:
            raise DecompositionError(
                f"averages differ by {spread:.3e} (Frobenius) > {settings.average_tol:.0e}; "
                "decompositions must share one average operator"
            )
        logger.debug("Decomposition family '%s': N=%d, spread %.3e", self.construction, len(decomps), spread)

    @property
    def size(self) -> int:
        return len(self.decompositions)

    @property
    def target_weights(self) -> List[float]:
        return [d.target_weight for d in self.decompositions]

    @property
    def targets(self) -> List[DensityOperator]:
        return [d.target for d in self.decompositions]

    @property
    def average(self) -> np.ndarray:
        return self.decompositions[0].average

    def average_spread(self) -> float:
        """Largest pairwise Frobenius distance between averages."""
        averages = [d.average for d in self.decompositions]
        return max(frobenius(a, b) for a, b in itertools.combinations(averages, 2))


def _sign_of_sin(theta: float) -> float:
    s = math.sin(theta)
    if abs(s) <= DEGENERATE_SIN:
        raise DecompositionError(
            f"sin(theta) = {s:.3e} at theta = {theta:.12g}: the delta construction is degenerate "
            "(the family collapses onto the z axis); use qubit_ns_bound for this case"
        )
    return 1.0 if s > 0 else -1.0


def qubit_delta_states(n: int, theta: float, length: float = 1.0) -> List[DensityOperator]:
    """Equatorial states opposite the targets' azimuths.

    Bloch vectors -sgn(sin theta) * length * (cos 2pi j/N, sin 2pi j/N, 0).
    ``length`` < 1 mixes each delta with I/2.
    """
    if n < 2:
        raise DecompositionError(f"N must be at least 2, got {n}")
    if not 0.0 < length <= 1.0:
        raise DecompositionError(f"delta length {length} outside (0, 1]")
    sign = _sign_of_sin(theta)
    return [
        density_from_bloch(BlochVector(
            -sign * length * math.cos(2.0 * math.pi * j / n),
            -sign * length * math.sin(2.0 * math.pi * j / n),
            0.0,
        ))
        for j in range(n)
    ]


def build_qubit_family(n: int, theta: float, r: float, delta_length: float = 1.0) -> DecompositionFamily:
    """rho_B = p rho_k + (1-p) delta_k, every average on the z axis.

    p = s / (s + r|sin theta|) for delta length s; s = 1 gives
    p = 1/(1 + r|sin theta|).
    """
    if not 0.0 < r <= 1.0:
        raise DecompositionError(f"r = {r} outside (0, 1]")
    deltas = qubit_delta_states(n, theta, delta_length)
    targets = symmetric_qubit_family(n, theta, r).states

    p = delta_length / (delta_length + r * abs(math.sin(theta)))
    decomps = tuple(
        Decomposition(weights=(p, 1.0 - p), states=(rho, delta), target_index=0)
        for rho, delta in zip(targets, deltas)
    )
    label = "qubit-delta" if delta_length == 1.0 else f"qubit-delta(s={delta_length:.6g})"
    family = DecompositionFamily(decomps, construction=label)
    logger.info("Built %s family N=%d theta=%.6g r=%.6g: p=%.12g", label, n, theta, r, p)
    return family


def spin_sigma_states(sys_: SpinSystem, beta: float, thetas: Sequence[float]) -> List[DensityOperator]:
    """sigma_k = U_k sigma_0 U_k^dagger, sigma_0 = (I + beta(J1 + J3))/(2j+1)."""
    sigma0 = spin_seed(sys_, (beta, 0.0, beta))
    lowest = min_eigenvalue(sigma0)
    if lowest < -settings.state_tol:
        raise StateError(
            f"beta = {beta:.6g} gives min eigenvalue {lowest:.3e}; sigma_0 is not positive",
            invariant="positive",
        )
    return [DensityOperator(m) for m in rotated_family(sys_, sigma0, thetas)]


def _positivity_limit(seed: Callable[[float], np.ndarray], label: str) -> float:
    """Supremum of x >= 0 with seed(x) PSD, by bisection on the min eigenvalue."""
    def f(x: float) -> float:
        return min_eigenvalue(seed(x))

    hi = 1.0
    while f(hi) >= 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise DecompositionError(f"{label}: positivity holds without bound")

    grid = np.linspace(0.0, hi, MONOTONE_GRID)
    values = [f(x) for x in grid]
    if any(b > a + 1e-12 for a, b in zip(values, values[1:])):
        raise DecompositionError(f"{label}: min eigenvalue is not monotone on [0, {hi}]")

    lo = 0.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    logger.debug("%s = %.12g", label, lo)
    return lo


def beta_max(sys_: SpinSystem) -> float:
    """Largest beta with sigma_0 = (I + beta(J1 + J3))/(2j+1) positive."""
    return _positivity_limit(lambda b: spin_seed(sys_, (b, 0.0, b)), f"beta_max(j={sys_.j:g})")


def alpha_max(sys_: SpinSystem) -> float:
    """Largest alpha with rho_0 = (I + alpha(-J1 + J3))/(2j+1) positive."""
    return _positivity_limit(lambda a: spin_seed(sys_, (-a, 0.0, a)), f"alpha_max(j={sys_.j:g})")


def build_spin_family(
    sys_: SpinSystem,
    alpha: float,
    thetas: Sequence[float],
    beta: Optional[float] = None,
) -> DecompositionFamily:
    """rho_B = p rho_k + (1-p) sigma_k with p = beta/(|alpha| + beta).

    The J1 components cancel, so every average points along J3. For
    negative alpha the sigma states use -beta so the cancellation still
    holds. ``beta`` defaults to beta_max.
    """
    beta = beta_max(sys_) if beta is None else beta
    if beta <= 0:
        raise DecompositionError(f"beta must be positive, got {beta}")

    targets = spin_family(sys_, alpha, thetas).states
    sigmas = spin_sigma_states(sys_, math.copysign(beta, alpha) if alpha else beta, thetas)
    p = beta / (abs(alpha) + beta)
    decomps = tuple(
        Decomposition(weights=(p, 1.0 - p), states=(rho, sigma), target_index=0)
        for rho, sigma in zip(targets, sigmas)
    )
    family = DecompositionFamily(decomps, construction=f"spin-sigma(beta={beta:.6g})")
    logger.info(
        "Built spin-%g family alpha=%.6g beta=%.6g N=%d: p=%.12g", sys_.j, alpha, beta, len(thetas), p
    )
    return family
