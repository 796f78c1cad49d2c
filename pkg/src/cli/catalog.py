"""Named reproduction cases: the mixed trine, the symmetric qubit sweep and spin-1."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.nosignal.bound import NoSignalBound, lp_bound, qubit_ns_bound
from src.nosignal.decomposition import DecompositionFamily, build_qubit_family, build_spin_family
from src.states.families import symmetric_qubit_family, trine_mixed_ensemble
from src.states.operators import Ensemble
from src.states.spin import equal_angles, spin_family, spin_generators

TRINE_R = 1.0 / 3.0

SWEEP_NS = (2, 3, 4, 5, 6)
SWEEP_RS = (1.0 / 3.0, 2.0 / 3.0, 1.0)
SWEEP_THETA_COUNT = 25
SWEEP_THETA_MARGIN = 0.05

SPIN1_ALPHAS = (0.1, 0.3, 1.0 / 3.0, 0.5)


@dataclass(frozen=True)
class Case:
    case_id: str
    group: str
    ensemble: Ensemble = field(repr=False)
    family: Optional[DecompositionFamily] = field(repr=False)
    bound: NoSignalBound
    params: Dict[str, float] = field(default_factory=dict)


def sweep_thetas(count: int = SWEEP_THETA_COUNT, margin: float = SWEEP_THETA_MARGIN) -> List[float]:
    """``count`` angles strictly inside (margin, pi - margin)."""
    return [float(t) for t in np.linspace(margin, math.pi - margin, count + 2)[1:-1]]


def trine_cases() -> List[Case]:
    params = {"n": 3, "theta": math.pi / 2, "r": TRINE_R}
    family = build_qubit_family(3, math.pi / 2, TRINE_R)
    bound = qubit_ns_bound(3, math.pi / 2, TRINE_R)
    return [
        Case("trine-mixed", "trine", trine_mixed_ensemble("z"), family, bound, params),
        Case("trine-mixed-y", "trine", trine_mixed_ensemble("y"), family, bound, params),
    ]


def qubit_case(n: int, theta: float, r: float) -> Case:
    family = build_qubit_family(n, theta, r)
    return Case(
        case_id=f"qubit-N{n}-theta{theta:.6f}-r{r:.6f}",
        group="qubit-sweep",
        ensemble=symmetric_qubit_family(n, theta, r),
        family=family,
        bound=lp_bound(family),
        params={"n": n, "theta": theta, "r": r},
    )


def qubit_sweep_cases(
    ns: Sequence[int] = SWEEP_NS,
    thetas: Optional[Sequence[float]] = None,
    rs: Sequence[float] = SWEEP_RS,
) -> List[Case]:
    thetas = sweep_thetas() if thetas is None else thetas
    return [qubit_case(n, t, r) for n in ns for r in rs for t in thetas]


def spin1_case(alpha: float) -> Case:
    sys_ = spin_generators(2)
    thetas = equal_angles(3)
    family = build_spin_family(sys_, alpha, thetas)
    return Case(
        case_id=f"spin1-alpha{alpha:.6f}",
        group="spin-1",
        ensemble=spin_family(sys_, alpha, thetas),
        family=family,
        bound=lp_bound(family),
        params={"two_j": 2, "alpha": alpha},
    )


def spin1_cases(alphas: Sequence[float] = SPIN1_ALPHAS) -> List[Case]:
    return [spin1_case(a) for a in alphas]
