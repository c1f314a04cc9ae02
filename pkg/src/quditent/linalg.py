"""Dense complex linear algebra for small matrices.

Matrices are plain ``numpy`` complex128 arrays. The eigensolver is a cyclic
Jacobi iteration (compiled when the extension is available); the SVD reuses
it through the Gram matrix.
"""

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DimensionError, SymmetryError

DEFAULT_TOL = 1e-10
CONVERGENCE_RTOL = 1e-12
MAX_SWEEPS = 100
SINGULAR_CLAMP = 1e-12


def as_matrix(a):
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf and empty input."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("empty matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def hermiticity_defect(h):
    """Largest entry of ``|H - H^dagger|``."""
    return float(np.max(np.abs(h - h.conj().T)))


def _check_hermitian(h, tol):
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"matrix is not square: {h.shape}")
    defect = hermiticity_defect(h)
    if defect > tol:
        raise SymmetryError(f"matrix is not Hermitian: max |H - H^dagger| = {defect:.3e} > {tol:.1e}")
    return 0.5 * (h + h.conj().T)


def hermitian_eigensystem(h, tol=DEFAULT_TOL):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian to within ``tol`` in max-norm.
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    eigenvalues : ndarray
        Real, sorted in descending order.
    eigenvectors : ndarray
        Columns are the matching eigenvectors.
    """
    h = _check_hermitian(h, tol)
    w, v, sweeps, converged = _kernels.jacobi_eigh(h, CONVERGENCE_RTOL, MAX_SWEEPS)
    if not converged:
        raise ConvergenceError(f"Jacobi iteration did not converge in {sweeps} sweeps")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(h, tol=DEFAULT_TOL):
    return hermitian_eigensystem(h, tol)[0]


def trace_norm(h, tol=DEFAULT_TOL):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(h, tol))))


def orthonormalize(a):
    """Orthonormal columns spanning the column space of ``a`` (Gram-Schmidt, two passes).

    Columns that become numerically dependent are replaced by standard basis
    vectors orthogonal to the ones already accepted.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    rows, cols = a.shape
    if cols > rows:
        raise DimensionError(f"cannot orthonormalize {cols} columns in dimension {rows}")
    q = np.zeros_like(a)
    fill = 0
    for j in range(cols):
        v = a[:, j]
        norm0 = np.linalg.norm(v)
        for _ in range(2):
            v = v - q[:, :j] @ (q[:, :j].conj().T @ v)
        norm = np.linalg.norm(v)
        while norm <= 1e-10 * max(norm0, 1.0):
            v = np.zeros(rows, dtype=np.complex128)
            v[fill] = 1.0
            fill += 1
            for _ in range(2):
                v = v - q[:, :j] @ (q[:, :j].conj().T @ v)
            norm = np.linalg.norm(v)
        q[:, j] = v / norm
    return q


def _svd_tall(a):
    rows, cols = a.shape
    _, v = hermitian_eigensystem(a.conj().T @ a, tol=np.inf)
    av = a @ v
    sigma = np.linalg.norm(av, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, v, av = sigma[order], v[:, order], av[:, order]
    sigma = np.where(sigma < SINGULAR_CLAMP, 0.0, sigma)
    u = np.zeros((rows, cols), dtype=np.complex128)
    nz = sigma > 0
    u[:, nz] = av[:, nz] / sigma[nz]
    return orthonormalize(u), sigma, v


def singular_value_decomposition(a):
    """Thin SVD ``A = U diag(sigma) V^dagger`` with descending non-negative ``sigma``.

    Built from the Hermitian eigensystem of ``A^dagger A`` (or ``A A^dagger`` for
    wide matrices). Singular values below 1e-12 are clamped to zero.
    """
    a = as_matrix(a)
    if a.shape[0] >= a.shape[1]:
        return _svd_tall(a)
    u, sigma, v = _svd_tall(a.conj().T)
    return v, sigma, u
