"""Dense complex Hermitian kernel.

Eigendecomposition is a cyclic Jacobi sweep generalized to complex
Hermitian input: each pivot (p, q) is first phase-rotated so the
off-diagonal element is real, then annihilated with the usual real
rotation. Dimensions here are small (a handful up to a few dozen), so the
clarity of Jacobi wins over anything blocked.

Matrices are plain ``numpy`` ``complex128`` arrays. Every function returns
a fresh array and never mutates its input.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from src.config.settings import settings
from src.linalg.errors import (
    ConvergenceError,
    DimensionError,
    MatrixError,
    NotHermitianError,
)

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray
MatrixLike = Union[np.ndarray, Sequence[Sequence[complex]]]

# Convergence: off-diagonal Frobenius mass relative to ||H||_F
JACOBI_REL_TOL = 1e-14


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition H = V diag(eigenvalues) V^dagger."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, fn) -> np.ndarray:
        """Return V diag(fn(eigenvalues)) V^dagger."""
        v = self.eigenvectors
        return (v * fn(self.eigenvalues)) @ v.conj().T


def as_matrix(data: MatrixLike, name: str = "matrix") -> np.ndarray:
    """Coerce to a square, finite complex128 array."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError(f"{name} has non-finite entries")
    return m


def symmetrize(h: MatrixLike, tol: Optional[float] = None, check: bool = True) -> np.ndarray:
    """Return (H + H^dagger)/2.

    With ``check`` the input must already be Hermitian within ``tol``
    (largest entry of |H - H^dagger|); tiny deviations are absorbed silently.
    """
    m = as_matrix(h)
    skew = np.max(np.abs(m - m.conj().T))
    if check:
        tol = settings.hermitian_tol if tol is None else tol
        if skew > tol:
            raise NotHermitianError(f"matrix is not Hermitian: max |H - H^dagger| = {skew:.3e} > {tol:.1e}")
    if skew > 0:
        logger.debug("Symmetrizing input with skew %.3e", skew)
    return 0.5 * (m + m.conj().T)


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] in place with a unitary rotation on (p, q)."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = np.array([[c, s * phase], [-s * np.conj(phase), c]], dtype=np.complex128)

    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    v[:, idx] = v[:, idx] @ g

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def _off_norm(a: np.ndarray) -> float:
    # strict upper triangle only; subtracting the diagonal from ||A||_F cancels
    upper = np.triu(a, k=1)
    return float(np.sqrt(2.0) * np.linalg.norm(upper))


def eig_hermitian(h: MatrixLike, max_sweeps: Optional[int] = None) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Ties keep their original column order (stable sort).
    """
    a = symmetrize(h)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    max_sweeps = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    target = JACOBI_REL_TOL * np.linalg.norm(a)
    sweeps = 0
    off = _off_norm(a)
    while off > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal mass {off:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _off_norm(a)
        logger.debug("Jacobi sweep %d: off-diagonal mass %.3e", sweeps, off)

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return HermitianEig(eigenvalues=values[order], eigenvectors=v[:, order], sweeps=sweeps)


def positive_part(h: MatrixLike) -> np.ndarray:
    """Sum of lambda |v><v| over the strictly positive eigenvalues."""
    return eig_hermitian(h).apply(lambda w: np.where(w > 0, w, 0.0))


def trace_positive_part(h: MatrixLike) -> float:
    """tr (H)_+ as the sum of the positive eigenvalues."""
    w = eig_hermitian(h).eigenvalues
    return float(np.sum(w[w > 0]))


def trace_norm(h: MatrixLike) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eig_hermitian(h).eigenvalues)))


def unitary_from_generator(theta: float, g: MatrixLike) -> np.ndarray:
    """exp(-i theta G) for Hermitian G."""
    return eig_hermitian(g).apply(lambda w: np.exp(-1j * theta * w))


def min_eigenvalue(h: MatrixLike) -> float:
    return float(eig_hermitian(h).eigenvalues[0])


def sqrt_psd(h: MatrixLike) -> np.ndarray:
    """Principal square root; negative noise eigenvalues are clamped to 0."""
    return eig_hermitian(h).apply(lambda w: np.sqrt(np.clip(w, 0.0, None)))


def inverse_sqrt_psd(h: MatrixLike, floor: float = 1e-12):
    """Pseudo-inverse square root of a PSD matrix.

    Eigenvalues at or below ``floor`` are treated as zero. Returns the
    inverse root together with the projector onto the retained support.
    """
    eig = eig_hermitian(h)
    keep = eig.eigenvalues > floor
    inv_root = eig.apply(lambda w: np.where(keep, 1.0 / np.sqrt(np.where(keep, w, 1.0)), 0.0))
    support = eig.apply(lambda w: keep.astype(float))
    return inv_root, support


def frobenius(a: MatrixLike, b: Optional[MatrixLike] = None) -> float:
    """||A||_F, or ||A - B||_F when b is given."""
    a = np.asarray(a)
    if b is not None:
        a = a - np.asarray(b)
    return float(np.linalg.norm(a))


def readonly(m: np.ndarray) -> np.ndarray:
    """Copy of m with the writeable flag cleared."""
    out = np.array(m, dtype=np.complex128)
    out.setflags(write=False)
    return out
