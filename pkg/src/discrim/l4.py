"""The L4 lower bound on the minimum discrimination error.

L4 = 1 - min_k ( mu_k + sum_{j != k} tr(mu_j rho_j - mu_k rho_k)_+ )

so 1 - L4 is an upper bound on the success probability.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from src.linalg.matcore import trace_positive_part
from src.states.operators import Ensemble

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class L4Result:
    error_lower: float
    terms: Tuple[float, ...]
    argmin: int

    @property
    def success_upper(self) -> float:
        return 1.0 - self.error_lower


def l4_terms(ensemble: Ensemble) -> Tuple[float, ...]:
    """The bracket mu_k + sum_{j != k} tr(mu_j rho_j - mu_k rho_k)_+ for each k."""
    weighted = ensemble.weighted()
    terms = []
    for k, wk in enumerate(weighted):
        total = ensemble.priors[k]
        for j, wj in enumerate(weighted):
            if j != k:
                total += trace_positive_part(wj - wk)
        terms.append(total)
    return tuple(terms)


def l4(ensemble: Ensemble) -> L4Result:
    terms = l4_terms(ensemble)
    k = min(range(len(terms)), key=lambda i: (terms[i], i))
    # the bracket never drops below max_k mu_k nor exceeds 1
    error = 1.0 - min(1.0, terms[k])
    error = max(0.0, min(error, 1.0 - max(ensemble.priors)))
    return L4Result(error_lower=error, terms=terms, argmin=k)


def l4_bound(ensemble: Ensemble) -> float:
    """L4 lower bound on the minimum error."""
    return l4(ensemble).error_lower


def spin1_eta(theta2: float, theta3: float) -> float:
    """(2/3)(sin(theta2/2) + sin(theta3/2)), first angle fixed at 0."""
    return (2.0 / 3.0) * (math.sin(theta2 / 2.0) + math.sin(theta3 / 2.0))


def spin1_l4_success(alpha: float, theta2: float, theta3: float) -> float:
    """1 - L4 = (1 + eta alpha)/3 for the three-state spin-1 family."""
    return (1.0 + spin1_eta(theta2, theta3) * alpha) / 3.0
