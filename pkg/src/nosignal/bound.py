"""No-signaling upper bounds on discrimination success.

Given a decomposition family with target weights p_k, no-signaling forces
sum_k p_k P(k|rho_k) <= 1 on the detector probabilities. The bound is the
largest average success (1/N) sum_k P_k compatible with that budget and
0 <= P_k <= 1: a one-constraint box LP, solved exactly by filling the
cheapest P_k first (fractional knapsack with unit values).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import DecompositionError
from src.linalg.matcore import frobenius
from src.nosignal.decomposition import (
    DEGENERATE_SIN,
    DecompositionFamily,
    build_qubit_family,
    build_spin_family,
)
from src.states.families import reduce_polar_angle
from src.states.spin import SpinSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoSignalBound:
    """Upper bound on success (and the matching lower bound on error)."""
    success_upper: float
    allocation: Tuple[float, ...] = field(default_factory=tuple)
    construction: str = "custom"
    candidate: int = 0

    @property
    def error_lower(self) -> float:
        return 1.0 - self.success_upper

    @property
    def size(self) -> int:
        return len(self.allocation)


def greedy_allocation(weights: Sequence[float]) -> List[float]:
    """Maximize sum P_k subject to sum p_k P_k <= 1, 0 <= P_k <= 1.

    Ascending p_k, ties by index.
    """
    budget = 1.0
    allocation = [0.0] * len(weights)
    for k in sorted(range(len(weights)), key=lambda i: (weights[i], i)):
        if budget <= 0.0:
            break
        share = min(1.0, budget / weights[k])
        allocation[k] = share
        budget -= weights[k] * share
    return allocation


def lp_bound(family: DecompositionFamily) -> NoSignalBound:
    """Exact optimum of max (1/N) sum P_k s.t. sum p_k P_k <= 1, P in [0,1]^N."""
    weights = family.target_weights
    n = len(weights)
    if any(not (p > 0) for p in weights):
        raise DecompositionError(f"target weights must be positive, got {weights}")

    allocation = greedy_allocation(weights)
    if max(weights) - min(weights) == 0.0:
        # equal weights: closed form (N p)^-1
        success = min(1.0, 1.0 / (n * weights[0]))
    else:
        success = min(1.0, sum(allocation) / n)

    bound = NoSignalBound(
        success_upper=success,
        allocation=tuple(allocation),
        construction=family.construction,
    )
    logger.debug("LP bound for '%s': success <= %.12g", family.construction, success)
    return bound


def _same_targets(a: DecompositionFamily, b: DecompositionFamily, tol: float) -> bool:
    if a.size != b.size:
        return False
    return all(frobenius(x.matrix, y.matrix) <= tol for x, y in zip(a.targets, b.targets))


def min_over_decompositions(
    families: Sequence[DecompositionFamily],
    max_workers: Optional[int] = None,
) -> NoSignalBound:
    """Smallest LP bound over candidate families of the same targets."""
    families = list(families)
    if not families:
        raise DecompositionError("min_over_decompositions needs at least one candidate family")
    tol = settings.average_tol
    for i, fam in enumerate(families[1:], start=1):
        if not _same_targets(families[0], fam, tol):
            raise DecompositionError(f"candidate {i} ('{fam.construction}') targets a different ensemble")

    workers = max_workers or min(len(families), settings.oracle_workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        bounds = list(executor.map(lp_bound, families))

    best = min(range(len(bounds)), key=lambda i: (bounds[i].success_upper, i))
    winner = bounds[best]
    logger.info(
        "Best of %d candidate decompositions: '%s' with success <= %.12g",
        len(bounds), winner.construction, winner.success_upper,
    )
    return NoSignalBound(
        success_upper=winner.success_upper,
        allocation=winner.allocation,
        construction=winner.construction,
        candidate=best,
    )


def qubit_ns_bound(n: int, theta: float, r: float) -> NoSignalBound:
    """(1 + r|sin theta|)/N, clamped to [0, 1]."""
    if n < 2:
        raise DecompositionError(f"N must be at least 2, got {n}")
    if not 0.0 <= r <= 1.0:
        raise DecompositionError(f"r = {r} outside [0, 1]")

    s = math.sin(reduce_polar_angle(theta))
    success = min(1.0, (1.0 + r * s) / n)
    if r > 0 and s > DEGENERATE_SIN:
        p = 1.0 / (1.0 + r * s)
        allocation = tuple(min(1.0, 1.0 / (n * p)) for _ in range(n))
        construction = "qubit-delta"
    else:
        allocation = tuple([1.0] + [0.0] * (n - 1))
        construction = "identical-average"
    return NoSignalBound(success_upper=success, allocation=allocation, construction=construction)


def spin_ns_bound(sys_: SpinSystem, alpha: float, thetas: Sequence[float]) -> NoSignalBound:
    """LP bound of the sigma-state family at beta_max: (|alpha| + beta)/(beta N)."""
    return lp_bound(build_spin_family(sys_, alpha, thetas))


def spin_beta_scan(
    sys_: SpinSystem,
    alpha: float,
    thetas: Sequence[float],
    betas: Sequence[float],
) -> NoSignalBound:
    """min over the given betas; the bound decreases in beta, so beta_max wins."""
    families = [build_spin_family(sys_, alpha, thetas, b) for b in betas]
    return min_over_decompositions(families)


def qubit_candidates(n: int, theta: float, r: float, lengths: Sequence[float] = (1.0,)):
    """Qubit delta families for several delta lengths (1.0 is the canonical one)."""
    return [build_qubit_family(n, theta, r, s) for s in lengths]


def weights_bound(weights: Sequence[float]) -> float:
    """LP optimum for bare weights, without building states."""
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise DecompositionError("weights must be positive")
    return min(1.0, sum(greedy_allocation(list(w))) / len(w))
