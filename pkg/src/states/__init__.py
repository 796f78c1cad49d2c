"""Quantum states, ensembles and the symmetric families built from them."""

from .families import symmetric_pure_family, symmetric_qubit_family, trine_mixed_ensemble
from .operators import BlochVector, DensityOperator, Ensemble, bloch_from_density, density_from_bloch
from .spin import SpinSystem, spin_family, spin_generators

__all__ = [
    "BlochVector",
    "DensityOperator",
    "Ensemble",
    "SpinSystem",
    "bloch_from_density",
    "density_from_bloch",
    "spin_family",
    "spin_generators",
    "symmetric_pure_family",
    "symmetric_qubit_family",
    "trine_mixed_ensemble",
]
