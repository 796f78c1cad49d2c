"""No-signaling bounds from identical-average decompositions."""

from .bound import NoSignalBound, lp_bound, min_over_decompositions, qubit_ns_bound, spin_ns_bound
from .decomposition import (
    Decomposition,
    DecompositionFamily,
    beta_max,
    build_qubit_family,
    build_spin_family,
)

__all__ = [
    "Decomposition",
    "DecompositionFamily",
    "NoSignalBound",
    "beta_max",
    "build_qubit_family",
    "build_spin_family",
    "lp_bound",
    "min_over_decompositions",
    "qubit_ns_bound",
    "spin_ns_bound",
]
