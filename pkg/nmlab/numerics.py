"""
Dense complex linear algebra used by all other modules.

Matrices are plain numpy arrays of dtype complex128, stored row-major
and indexed from zero. Functions never modify their arguments.
"""

import logging
from typing import NamedTuple

import numpy as np
from scipy import linalg

from nmlab.constants import HERMITICITY_TOL, MAX_KRON_DIM, PSD_TOL, \
    RANK_TOL

logger = logging.getLogger(__name__)

# Off-diagonal Frobenius norm (relative) at which Jacobi sweeps stop
JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 100


class NonSquareError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class DimensionOverflowError(ValueError):
    pass


class EigenDecomposition(NamedTuple):
    """
    Eigenvalues sorted descending and the matching orthonormal
    eigenvectors as columns.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m):
    """
    Convert to a finite two-dimensional complex array.

    Parameters
    ----------
    m: array_like

    Returns
    -------
    out: numpy.ndarray
        complex128 array with ndim == 2

    Raises
    ------
    ValueError
        if the input is not two-dimensional or contains NaN/Inf
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(
            'Expected a non-empty matrix, got shape {}'.format(arr.shape))
    if not np.isfinite(arr).all():
        raise ValueError('Matrix contains non-finite entries')
    return arr


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def check_square(m):
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(
            'Expected a square matrix, got shape {}'.format(m.shape))


def hermiticity_error(m):
    """ Max-abs entry of M - M^dagger """
    return float(np.max(np.abs(m - dagger(m))))


def hermitian_eig(m, hermiticity_tol=HERMITICITY_TOL):
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot element and then
    applies a real Jacobi rotation, so the whole computation is
    deterministic for a given input.

    Parameters
    ----------
    m: array_like
        Square Hermitian matrix.
    hermiticity_tol: float
        Accepted max-abs deviation of M - M^dagger.

    Returns
    -------
    out: EigenDecomposition
        Real eigenvalues sorted descending, eigenvectors as columns.

    Raises
    ------
    NonSquareError
    NonHermitianError
    """
    a = as_matrix(m)
    check_square(a)
    deviation = hermiticity_error(a)
    if deviation > hermiticity_tol:
        raise NonHermitianError(
            'Matrix is not Hermitian (deviation {:.3e} > {:.3e})'.format(
                deviation, hermiticity_tol))

    a = (a + dagger(a)) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)

    if scale > 0:
        for sweep in range(JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off <= JACOBI_TOL * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, p, q)
        else:
            logger.warning('Jacobi eigensolver did not converge within '
                           '%d sweeps' % JACOBI_MAX_SWEEPS)

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(-eigenvalues, kind='stable')
    return EigenDecomposition(eigenvalues[order], v[:, order])


def _rotate(a, v, p, q):
    """ Annihilate a[p, q] in place and accumulate the rotation in v """
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2 * r)
    t = 1.0 / (abs(theta) + np.sqrt(theta ** 2 + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t ** 2 + 1.0)
    s = t * c

    g = np.array([[c, s],
                  [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = dagger(g) @ a[idx, :]
    v[:, idx] = v[:, idx] @ g
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def clamp_eigenvalues(eigenvalues, tol=PSD_TOL):
    """
    Set eigenvalues in [-tol, 0) to zero.

    Values below -tol are left untouched, callers decide whether
    they are an error.
    """
    eigenvalues = np.array(eigenvalues, dtype=float)
    dust = (eigenvalues < 0) & (eigenvalues >= -tol)
    eigenvalues[dust] = 0.0
    return eigenvalues


def psd_function(m, func, tol=PSD_TOL):
    """
    Apply a scalar function to a positive semidefinite matrix
    through its eigendecomposition.

    Raises
    ------
    ValueError
        if an eigenvalue is below -tol
    """
    eigenvalues, eigenvectors = hermitian_eig(m)
    eigenvalues = clamp_eigenvalues(eigenvalues, tol)
    if eigenvalues.min() < 0:
        raise ValueError(
            'Matrix is not positive semidefinite (eigenvalue {:.3e})'.format(
                eigenvalues.min()))
    return (eigenvectors * func(eigenvalues)) @ dagger(eigenvectors)


def kron(a, b, max_dim=MAX_KRON_DIM):
    """
    Kronecker product with entry (i*rows_b + k, j*cols_b + l) = a[i, j]*b[k, l]

    Raises
    ------
    DimensionOverflowError
        if the result would have more than `max_dim` rows or columns
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise DimensionOverflowError(
            'Kronecker product of shape ({}, {}) exceeds bound {}'.format(
                rows, cols, max_dim))
    return np.kron(a, b)


def partial_trace(m, dim_a, dim_b, keep='A'):
    """
    Partial trace over one factor of a bipartite operator.

    Parameters
    ----------
    m: array_like
        Square matrix on the space A (x) B, A being the first factor.
    dim_a: int
    dim_b: int
    keep: {'A', 'B'}
        Subsystem that remains after tracing out the other one.

    Returns
    -------
    out: numpy.ndarray
        dim_a x dim_a (keep='A') or dim_b x dim_b (keep='B') matrix

    Raises
    ------
    DimensionMismatchError
        if M is not (dim_a*dim_b) x (dim_a*dim_b)
    """
    m = as_matrix(m)
    check_square(m)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            'Matrix of size {} cannot be split into {} x {}'.format(
                m.shape[0], dim_a, dim_b))
    tensor = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep in ('A', 'a'):
        return np.einsum('ijkj->ik', tensor)
    if keep in ('B', 'b'):
        return np.einsum('ijil->jl', tensor)
    raise ValueError('keep must be "A" or "B", got "{}"'.format(keep))


def vec(m):
    """ Column-stacking vectorization, vec(m)[j*rows + i] = m[i, j] """
    return np.asarray(m).reshape(-1, order='F')


def unvec(vector, dim=None):
    """ Inverse of `vec` for square matrices """
    vector = np.asarray(vector)
    if dim is None:
        dim = int(round(np.sqrt(vector.size)))
    if dim * dim != vector.size:
        raise DimensionMismatchError(
            'Vector of length {} is not a square matrix'.format(vector.size))
    return vector.reshape(dim, dim, order='F')


def pseudo_inverse(m, rank_tol=RANK_TOL):
    """
    Moore-Penrose pseudo-inverse with a relative singular value cutoff.

    Parameters
    ----------
    m: array_like
    rank_tol: float
        Singular values below rank_tol * max(singular values) are
        treated as zero.

    Returns
    -------
    pinv: numpy.ndarray
    rank_deficient: bool
        True if any singular value was discarded
    """
    m = as_matrix(m)
    u, s, vh = linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(m.T.shape, dtype=complex), True
    keep = s > rank_tol * s[0]
    pinv = (dagger(vh[keep]) / s[keep]) @ dagger(u[:, keep])
    return pinv, not bool(keep.all())
