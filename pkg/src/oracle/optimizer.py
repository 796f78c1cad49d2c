"""Fixed-point search for minimum-error measurements.

Each step replaces

    M_k <- L^+ (mu_k rho_k) M_k (mu_k rho_k) L^+,
    L = (sum_k mu_k rho_k M_k rho_k mu_k)^(1/2),

with L^+ the inverse square root on the support of L (eigenvalues at or
below EIGEN_REL_FLOOR times the trace dropped). The complement of that
support is split evenly over the outcomes, and completeness is restored
with the symmetric inverse square root of sum_k M_k. Iteration stops once
the optimality certificate holds to ``tol``. An iterate that fails POVM
validation ends the run with the best earlier iterate, reported as not
converged.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.discrim.povm import POVM, certificate, success_probability
from src.linalg.errors import POVMError
from src.linalg.matcore import inverse_sqrt_psd, symmetrize
from src.states.operators import Ensemble

logger = logging.getLogger(__name__)

# eigenvalues below this fraction of the trace count as zero
EIGEN_REL_FLOOR = 1e-13


@dataclass(frozen=True)
class OracleResult:
    povm: POVM
    success: float
    certificate_gap: float
    iterations: int
    converged: bool
    history: Tuple[float, ...] = field(default=(), repr=False)
    start: int = 0


def _pseudo_inverse_root(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    scale = float(np.real(np.trace(m)))
    return inverse_sqrt_psd(m, EIGEN_REL_FLOOR * max(scale, 1e-300))


def _complete(elements: List[np.ndarray]) -> List[np.ndarray]:
    """Restore sum_k M_k = I by S^-1/2 M_k S^-1/2; any kernel of S is shared out."""
    n = len(elements)
    inv_root, support = _pseudo_inverse_root(sum(elements))
    kernel = np.eye(support.shape[0]) - support
    completed = [symmetrize(inv_root @ m @ inv_root + kernel / n, check=False) for m in elements]

    # a near-singular S amplifies rounding; one more pass with S close to I removes it
    residual = np.linalg.norm(sum(completed) - np.eye(support.shape[0]))
    if residual > 0.1 * settings.povm_tol:
        inv_root, _ = _pseudo_inverse_root(sum(completed))
        completed = [symmetrize(inv_root @ m @ inv_root, check=False) for m in completed]
    return completed


def _step(weighted: List[np.ndarray], elements: List[np.ndarray]) -> Tuple[List[np.ndarray], bool]:
    products = [w @ m @ w for w, m in zip(weighted, elements)]
    lam_sq = symmetrize(sum(products), check=False)
    inv_root, support = _pseudo_inverse_root(lam_sq)
    singular = float(np.real(np.trace(support))) < support.shape[0] - 0.5
    updated = [inv_root @ p @ inv_root for p in products]
    return _complete(updated), singular


def random_start(n: int, dim: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Normalized squares of complex Gaussian matrices: strictly positive, complete."""
    squares = []
    for _ in range(n):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        squares.append(g @ g.conj().T)
    return _complete(squares)


def optimize_povm(
    ensemble: Ensemble,
    max_iters: Optional[int] = None,
    tol: Optional[float] = None,
    initial: Optional[List[np.ndarray]] = None,
    start: int = 0,
) -> OracleResult:
    """Iterate from ``initial`` (default: every element I/N) until certified or out of iterations.

    Never raises for non-convergence; the best iterate seen is returned.
    """
    max_iters = settings.oracle_max_iters if max_iters is None else max_iters
    tol = settings.oracle_tol if tol is None else tol
    if max_iters < 1:
        raise ValueError(f"max_iters must be at least 1, got {max_iters}")

    n, dim = ensemble.size, ensemble.dim
    weighted = ensemble.weighted()
    if initial is None:
        elements = [np.eye(dim, dtype=np.complex128) / n for _ in range(n)]
    else:
        elements = [np.asarray(m, dtype=np.complex128) for m in initial]

    povm = POVM(tuple(elements))
    success = success_probability(ensemble, povm)
    gap = certificate(ensemble, povm, tol).gap
    best = (success, gap, povm)
    history = [success]
    warned = False
    iterations = 0

    while gap < -tol and iterations < max_iters:
        elements, singular = _step(weighted, elements)
        iterations += 1
        if singular and not warned:
            logger.warning("Oracle start %d: singular Lambda, using pseudo-inverse on its support", start)
            warned = True

        try:
            povm = POVM(tuple(elements))
        except POVMError as err:
            logger.warning("Oracle start %d: iterate %d is not a valid POVM (%s), stopping", start, iterations, err)
            break
        success = success_probability(ensemble, povm)
        gap = certificate(ensemble, povm, tol).gap
        history.append(success)
        if success >= best[0] or gap >= -tol:
            best = (success, gap, povm)
        logger.debug("Oracle start %d iter %d: success %.15f gap %.3e", start, iterations, success, gap)

    success, gap, povm = best
    converged = gap >= -tol
    if converged:
        logger.info("Oracle start %d converged in %d iterations: success %.12g", start, iterations, success)
    else:
        logger.warning(
            "Oracle start %d did not converge in %d iterations (gap %.3e, success %.12g)",
            start, iterations, gap, success,
        )
    return OracleResult(
        povm=povm,
        success=success,
        certificate_gap=gap,
        iterations=iterations,
        converged=converged,
        history=tuple(history),
        start=start,
    )


def _rank(result: OracleResult) -> Tuple[bool, float, int]:
    return (result.converged, result.success, -result.start)


def random_restarts(
    ensemble: Ensemble,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
    max_iters: Optional[int] = None,
    tol: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> OracleResult:
    """Best certified result over the uniform start plus (restarts - 1) seeded random starts.

    Starts are drawn up front from one seeded generator, so the outcome does
    not depend on thread scheduling.
    """
    restarts = settings.oracle_restarts if restarts is None else restarts
    seed = settings.seed if seed is None else seed
    if restarts < 1:
        raise ValueError(f"restarts must be at least 1, got {restarts}")

    rng = np.random.default_rng(seed)
    starts: List[Optional[List[np.ndarray]]] = [None]
    starts.extend(random_start(ensemble.size, ensemble.dim, rng) for _ in range(restarts - 1))

    def run(idx: int) -> OracleResult:
        return optimize_povm(ensemble, max_iters=max_iters, tol=tol, initial=starts[idx], start=idx)

    workers = max_workers or min(restarts, settings.oracle_workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(run, range(restarts)))

    best = max(results, key=_rank)
    logger.info(
        "Best of %d oracle starts: start %d, success %.12g (converged=%s)",
        restarts, best.start, best.success, best.converged,
    )
    return best
