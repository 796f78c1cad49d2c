"""Dense complex-matrix kernel."""

from .errors import (
    ConvergenceError,
    DecompositionError,
    DimensionError,
    MatrixError,
    NotHermitianError,
    POVMError,
    StateError,
)
from .matcore import (
    HermitianEig,
    as_matrix,
    eig_hermitian,
    inverse_sqrt_psd,
    min_eigenvalue,
    positive_part,
    sqrt_psd,
    symmetrize,
    unitary_from_generator,
)

__all__ = [
    "ConvergenceError",
    "DecompositionError",
    "DimensionError",
    "MatrixError",
    "NotHermitianError",
    "POVMError",
    "StateError",
    "HermitianEig",
    "as_matrix",
    "eig_hermitian",
    "inverse_sqrt_psd",
    "min_eigenvalue",
    "positive_part",
    "sqrt_psd",
    "symmetrize",
    "unitary_from_generator",
]
