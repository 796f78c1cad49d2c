"""Measurements, success probability and the optimality certificate.

A POVM {M_k} is minimum-error optimal for an ensemble {mu_k, rho_k} iff
Gamma = sum_k mu_k rho_k M_k is Hermitian and Gamma - mu_k rho_k >= 0 for
every k. ``certificate`` reports the most negative eigenvalue of those
differences; any POVM with gap g also satisfies
P_opt <= success + d * max(0, -g), which is reported as ``dual_upper``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.linalg.errors import DimensionError, NotHermitianError, POVMError
from src.linalg.matcore import MatrixLike, as_matrix, min_eigenvalue, readonly, symmetrize
from src.states.operators import Ensemble

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class POVM:
    """PSD operators summing to the identity."""
    elements: Tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        tol = settings.povm_tol
        if len(self.elements) < 1:
            raise POVMError("a POVM needs at least one element")
        elements = []
        for k, e in enumerate(self.elements):
            try:
                m = symmetrize(as_matrix(e, name=f"POVM element {k}"), tol=settings.hermitian_tol)
            except NotHermitianError as err:
                raise POVMError(f"element {k}: {err}") from err
            lowest = min_eigenvalue(m)
            if lowest < -tol:
                raise POVMError(f"element {k} has eigenvalue {lowest:.3e} < -{tol:.0e}")
            elements.append(readonly(m))
        if len({m.shape for m in elements}) != 1:
            raise DimensionError("POVM elements have different dimensions")

        total = sum(elements)
        residual = float(np.linalg.norm(total - np.eye(total.shape[0])))
        if residual > tol:
            raise POVMError(f"elements sum to identity only within {residual:.3e} (Frobenius)")
        object.__setattr__(self, "elements", tuple(elements))

    @classmethod
    def from_matrices(cls, matrices: Sequence[MatrixLike]) -> "POVM":
        return cls(tuple(np.asarray(m, dtype=np.complex128) for m in matrices))

    @classmethod
    def trivial(cls, n: int, dim: int) -> "POVM":
        """Random guessing: every element I/N."""
        return cls(tuple(np.eye(dim, dtype=np.complex128) / n for _ in range(n)))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class CertificateReport:
    gamma: np.ndarray = field(repr=False)
    gap: float
    optimal: bool
    gaps: Tuple[float, ...] = ()
    success: float = 0.0

    @property
    def dual_upper(self) -> float:
        """Upper bound on the optimal success implied by the gap."""
        return min(1.0, self.success + self.gamma.shape[0] * max(0.0, -self.gap))


def _check_match(ensemble: Ensemble, povm: POVM) -> None:
    if ensemble.size != povm.size:
        raise POVMError(f"{povm.size} POVM elements for {ensemble.size} states")
    if ensemble.dim != povm.dim:
        raise DimensionError(f"POVM dimension {povm.dim} differs from state dimension {ensemble.dim}")


def success_probability(ensemble: Ensemble, povm: POVM) -> float:
    """sum_k mu_k tr(M_k rho_k), clamped to [0, 1]."""
    _check_match(ensemble, povm)
    total = sum(np.trace(m @ w) for m, w in zip(povm.elements, ensemble.weighted()))
    if abs(total.imag) > 1e-12:
        logger.warning("Success probability has imaginary residue %.3e", total.imag)
    return float(min(1.0, max(0.0, total.real)))


def certificate(ensemble: Ensemble, povm: POVM, tol: Optional[float] = None) -> CertificateReport:
    """Check Gamma - mu_k rho_k >= 0 for all k."""
    _check_match(ensemble, povm)
    tol = settings.certificate_tol if tol is None else tol
    weighted = ensemble.weighted()

    gamma = symmetrize(sum(w @ m for w, m in zip(weighted, povm.elements)), check=False)

    def gap_for(w: np.ndarray) -> float:
        return min_eigenvalue(symmetrize(gamma - w, check=False))

    if ensemble.size > 8:
        with ThreadPoolExecutor(max_workers=settings.oracle_workers) as executor:
            gaps = tuple(executor.map(gap_for, weighted))
    else:
        gaps = tuple(gap_for(w) for w in weighted)

    gap = min(gaps)
    success = float(np.real(np.trace(gamma)))
    report = CertificateReport(
        gamma=readonly(gamma),
        gap=gap,
        optimal=gap >= -tol,
        gaps=gaps,
        success=success,
    )
    logger.debug("Certificate gap %.3e (optimal=%s)", gap, report.optimal)
    return report
