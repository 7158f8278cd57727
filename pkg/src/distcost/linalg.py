"""Dense linear-algebra primitives: matrix exponential, symmetric
eigendecomposition, and the vector/matrix norms the rest of the toolkit
is written against.

Matrices and vectors are plain float64 ndarrays. Inputs are validated
once at this boundary (shape, finiteness) and the numerical work is done
by the kernels in ``_kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import DimensionError, DomainError, NumericalError
from .settings import DEFAULT_SETTINGS, NumericSettings

__all__ = ["SpectralDecomposition", "as_matrix", "as_vector", "expm", "sym_eig", "norm"]


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a C-contiguous float64 2-D array, rejecting non-finite entries."""
    A = np.ascontiguousarray(np.asarray(M, dtype=np.float64))
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError(f"{name} contains non-finite entries")
    return A


def as_vector(x, name: str = "vector") -> np.ndarray:
    A = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if A.ndim != 1:
        raise DimensionError(f"{name} must be 1-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError(f"{name} contains non-finite entries")
    return A


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenfactors of a symmetric matrix: M = U diag(lambdas) U^T.

    ``U`` has orthonormal columns and ``lambdas`` is sorted descending.
    """

    U: np.ndarray
    lambdas: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.lambdas) @ self.U.T

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Evaluate M @ v through the factors."""
        return self.U @ (self.lambdas * (self.U.T @ v))


def expm(M) -> np.ndarray:
    """Matrix exponential e^M by Pade scaling-and-squaring.

    Parameters
    ----------
    M : array_like
        Square matrix with finite entries.

    Returns
    -------
    ndarray
        e^M, relative accuracy around 1e-12 in the infinity norm for
        well-conditioned inputs.
    """
    A = as_matrix(M, "expm operand")
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expm operand must be square, got shape {A.shape}")
    return _k.expm_core(A)


def sym_eig(M, settings: NumericSettings = DEFAULT_SETTINGS) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    M : array_like
        Symmetric matrix; asymmetry beyond ``settings.symmetry_tol``
        (relative, infinity norm) is rejected.
    settings : NumericSettings
        Supplies the off-diagonal convergence tolerance and sweep budget.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues descending; ties keep the order the sweep produced.

    Raises
    ------
    DomainError
        If the input is not symmetric within tolerance.
    NumericalError
        If the sweep budget is exhausted before the off-diagonal mass
        drops below threshold; carries the iteration count and the best
        eigenvalue estimate.
    """
    A = as_matrix(M, "sym_eig operand")
    n = A.shape[0]
    if n != A.shape[1]:
        raise DimensionError(f"sym_eig operand must be square, got shape {A.shape}")
    scale = np.max(np.abs(A)) if n else 0.0
    if scale > 0.0 and np.max(np.abs(A - A.T)) > settings.symmetry_tol * scale:
        raise DomainError("sym_eig operand is not symmetric within tolerance")

    work = 0.5 * (A + A.T)
    diag, V, off, sweeps, thresh = _k.jacobi_core(
        work, settings.jacobi_off_tol, settings.jacobi_max_sweeps
    )
    if off > thresh:
        raise NumericalError(
            f"Jacobi iteration did not converge in {sweeps} sweeps "
            f"(off-diagonal norm {off:.3e}, threshold {thresh:.3e})",
            estimate=diag,
            error_bound=off,
            iterations=sweeps,
        )
    order = np.argsort(-diag, kind="stable")
    lam = diag[order]
    U = np.ascontiguousarray(V[:, order])
    if n and np.max(np.abs(U.T @ U - np.eye(n))) > 1e-10 * n:
        raise NumericalError(
            "eigenvector matrix lost orthogonality", estimate=lam, iterations=sweeps
        )
    lam.setflags(write=False)
    U.setflags(write=False)
    return SpectralDecomposition(U=U, lambdas=lam)


def norm(a, kind: str = "two") -> float:
    """Vector p-norm or induced matrix norm.

    ``kind`` is one of ``one``, ``two``, ``inf``. For matrices, the
    one-norm is the max column absolute sum and the inf-norm the max row
    absolute sum; the induced two-norm is not provided.
    """
    A = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(A)):
        raise DomainError("norm operand contains non-finite entries")
    if A.ndim == 1:
        if kind == "one":
            return float(np.sum(np.abs(A)))
        if kind == "two":
            return float(np.sqrt(np.sum(A * A)))
        if kind == "inf":
            return float(np.max(np.abs(A))) if A.size else 0.0
    elif A.ndim == 2:
        if kind == "one":
            return float(np.max(np.sum(np.abs(A), axis=0)))
        if kind == "inf":
            return float(np.max(np.sum(np.abs(A), axis=1)))
        if kind == "two":
            raise DomainError("induced matrix two-norm is not supported")
    else:
        raise DimensionError(f"norm operand must be 1- or 2-dimensional, got {A.ndim}")
    raise DomainError(f"unknown norm kind {kind!r}")
