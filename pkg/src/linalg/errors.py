"""Exception types shared across the package."""

from typing import Optional


class MatrixError(ValueError):
    """Malformed matrix input (shape, finiteness)."""


class DimensionError(MatrixError):
    """Non-square input or mismatched dimensions."""


class NotHermitianError(MatrixError):
    """Input deviates from Hermitian beyond tolerance."""


class ConvergenceError(RuntimeError):
    """Iterative routine exceeded its iteration cap."""


class StateError(ValueError):
    """A state, Bloch vector or ensemble violates one of its invariants."""

    def __init__(self, message: str, invariant: str = "state", index: Optional[int] = None):
        self.invariant = invariant
        self.index = index
        self.detail = message
        where = f" (state {index})" if index is not None else ""
        super().__init__(f"{invariant}{where}: {message}")


class DecompositionError(ValueError):
    """Malformed decomposition or decomposition family."""


class POVMError(ValueError):
    """POVM invariant violated or measurement undefined."""
