"""Per-ensemble analysis: every bound, the oracle and any applicable closed form."""

import logging
import math
from typing import Optional, Union

from src.cli.ensemble_file import QubitFamilySpec, SpinFamilySpec, encode_matrix, same_ensemble
from src.cli.report import (
    JSON_DIGITS,
    ClosedFormRecord,
    EnsembleRecord,
    FamilySummary,
    L4Record,
    NsBoundRecord,
    OracleRecord,
)
from src.discrim.closed_form import (
    helstrom_two_state,
    symmetric_pure_success,
    symmetric_qubit_optimal_povm,
)
from src.discrim.l4 import l4
from src.discrim.povm import certificate, success_probability
from src.linalg.errors import StateError
from src.nosignal.bound import NoSignalBound, qubit_ns_bound, spin_ns_bound
from src.nosignal.decomposition import DecompositionFamily
from src.oracle.optimizer import OracleResult, random_restarts
from src.states.families import (
    match_symmetric_pure,
    match_symmetric_qubit,
    reduce_polar_angle,
    symmetric_qubit_family,
)
from src.states.operators import Ensemble
from src.states.spin import spin_family, spin_generators

logger = logging.getLogger(__name__)

# tolerance for recognizing a symmetric family in file input
MATCH_TOL = 1e-8
# Frobenius tolerance when rebuilding a declared family from its parameters
DECLARATION_TOL = 1e-6

FamilyDeclaration = Union[QubitFamilySpec, SpinFamilySpec]


def closed_form(ensemble: Ensemble) -> Optional[ClosedFormRecord]:
    """Exact optimum when one is known for this ensemble."""
    if ensemble.size == 2:
        value = helstrom_two_state(ensemble.states[0], ensemble.states[1], ensemble.priors[0])
        return ClosedFormRecord(value=value, formula="helstrom")

    qubit = match_symmetric_qubit(ensemble, MATCH_TOL)
    if qubit is not None:
        theta, r = qubit
        if abs(r - 1.0) <= MATCH_TOL:
            c = (math.cos(theta / 2.0), math.sin(theta / 2.0))
            return ClosedFormRecord(
                value=symmetric_pure_success(ensemble.size, c), formula="symmetric-pure"
            )
        canonical = symmetric_qubit_family(ensemble.size, theta, r)
        povm = symmetric_qubit_optimal_povm(ensemble.size, theta)
        if certificate(canonical, povm).optimal:
            return ClosedFormRecord(
                value=success_probability(canonical, povm), formula="symmetric-qubit-povm"
            )
        return None

    c = match_symmetric_pure(ensemble, MATCH_TOL)
    if c is not None:
        return ClosedFormRecord(value=symmetric_pure_success(ensemble.size, c), formula="symmetric-pure")
    return None


def declaration_matches(ensemble: Ensemble, declared: FamilyDeclaration) -> bool:
    """Whether the declared family reproduces the ensemble's states.

    A spin declaration must rebuild the states literally. A qubit
    declaration may also sit in a rotated frame, so the recognized
    (theta, r) is accepted in its place.
    """
    if isinstance(declared, SpinFamilySpec):
        sys_ = spin_generators(declared.two_j)
        if sys_.dim != ensemble.dim or len(declared.thetas) != ensemble.size:
            return False
        try:
            rebuilt = spin_family(sys_, declared.alpha, declared.thetas)
        except StateError:
            return False
        return same_ensemble(rebuilt, ensemble, DECLARATION_TOL)

    if declared.n != ensemble.size or ensemble.dim != 2:
        return False
    if same_ensemble(symmetric_qubit_family(declared.n, declared.theta, declared.r), ensemble, DECLARATION_TOL):
        return True
    recognized = match_symmetric_qubit(ensemble, MATCH_TOL)
    if recognized is None:
        return False
    # matched angles are measured from the mean Bloch vector, so fold into [0, pi/2]
    folded = reduce_polar_angle(declared.theta)
    folded = min(folded, math.pi - folded)
    return abs(recognized[1] - declared.r) <= MATCH_TOL and abs(recognized[0] - folded) <= math.sqrt(MATCH_TOL)


def ns_bound(ensemble: Ensemble, declared: Optional[FamilyDeclaration] = None) -> Optional[NoSignalBound]:
    """No-signaling bound from the declared family, else from a recognized qubit family.

    A declaration is used even when it disagrees with the states; the
    disagreement is logged.
    """
    if declared is not None:
        if not declaration_matches(ensemble, declared):
            logger.warning("Declared %s family does not match the states", declared.kind)
        if isinstance(declared, SpinFamilySpec):
            return spin_ns_bound(spin_generators(declared.two_j), declared.alpha, declared.thetas)
        return qubit_ns_bound(declared.n, declared.theta, declared.r)

    recognized = match_symmetric_qubit(ensemble, MATCH_TOL)
    if recognized is not None:
        theta, r = recognized
        logger.info("Recognized symmetric qubit family: theta=%.9g r=%.9g", theta, r)
        return qubit_ns_bound(ensemble.size, theta, r)
    return None


def family_summary(family: DecompositionFamily) -> FamilySummary:
    return FamilySummary(
        construction=family.construction,
        target_weights=list(family.target_weights),
        average=encode_matrix(family.average, digits=JSON_DIGITS),
    )


def ns_record(bound: NoSignalBound) -> NsBoundRecord:
    return NsBoundRecord(
        success_upper=bound.success_upper,
        error_lower=bound.error_lower,
        construction=bound.construction,
    )


def oracle_record(result: OracleResult, with_povm: bool = False) -> OracleRecord:
    povm = None
    if with_povm:
        povm = [encode_matrix(m, digits=JSON_DIGITS) for m in result.povm.elements]
    return OracleRecord(
        success=result.success,
        certificate_gap=result.certificate_gap,
        converged=result.converged,
        iterations=result.iterations,
        start=result.start,
        povm=povm,
    )


def compare_ensemble(
    ensemble_id: str,
    ensemble: Ensemble,
    declared: Optional[FamilyDeclaration] = None,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
    max_iters: Optional[int] = None,
    tol: Optional[float] = None,
    bound: Optional[NoSignalBound] = None,
) -> EnsembleRecord:
    """L4, the oracle, closed forms and (when a construction applies) the no-signaling bound.

    ``bound`` overrides the bound derived from ``declared``.
    """
    if bound is None:
        bound = ns_bound(ensemble, declared)
    l4_result = l4(ensemble)
    oracle = random_restarts(ensemble, restarts=restarts, seed=seed, max_iters=max_iters, tol=tol)

    record = EnsembleRecord(
        ensemble_id=ensemble_id,
        n_states=ensemble.size,
        dim=ensemble.dim,
        ns_bound=None if bound is None else ns_record(bound),
        l4=L4Record(
            error_lower=l4_result.error_lower,
            success_upper=l4_result.success_upper,
            argmin=l4_result.argmin,
        ),
        oracle=oracle_record(oracle),
        closed_form=closed_form(ensemble),
    )
    if record.orderings_ok is False:
        logger.warning("Ordering violated for '%s': %s", ensemble_id, record.orderings)
    else:
        logger.info("Compared '%s': oracle success %.12g", ensemble_id, oracle.success)
    return record

