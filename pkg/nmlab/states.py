"""
Pure states, density matrices and the scalar functionals built on them
(von Neumann entropy, fidelity, purification) together with the random
state samplers used for ensemble studies.

All entropies are returned in bits.
"""
import logging

import numpy as np
from scipy.special import entr

from nmlab.constants import HERMITICITY_TOL, PSD_TOL
from nmlab.numerics import as_matrix, check_square, clamp_eigenvalues, \
    dagger, hermitian_eig, hermiticity_error, psd_function, \
    DimensionMismatchError
from nmlab.serializer import Serializer

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
# Eigenvalues of this size are numerical noise of the eigensolver
SQRT_DUST = 1e-13


class InvalidStateError(ValueError):
    pass


class PureState(Serializer):

    def __init__(self, amplitudes, validate=True):
        """
        Normalized state vector.

        Parameters
        ----------
        amplitudes: array_like
            Complex amplitudes in the computational basis.
        validate: bool
            Check the normalization.
        """
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size == 0 or not np.isfinite(amplitudes).all():
            raise InvalidStateError('Amplitudes must be finite and non-empty')
        norm = np.sum(np.abs(amplitudes) ** 2)
        if validate and abs(norm - 1) > NORM_TOL:
            raise InvalidStateError(
                'State is not normalized (norm^2 = {:.12g})'.format(norm))
        amplitudes.setflags(write=False)
        self.amplitudes = amplitudes

    @property
    def dim(self):
        return self.amplitudes.size

    def projector(self):
        """ Returns the density matrix |psi><psi| """
        return DensityMatrix(np.outer(self.amplitudes,
                                      np.conj(self.amplitudes)),
                             validate=False)

    def overlap(self, other):
        """ <self|other> """
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return 'PureState({})'.format(np.array2string(self.amplitudes))


class DensityMatrix(Serializer):

    def __init__(self, matrix, validate=True):
        """
        Hermitian, positive semidefinite matrix of unit trace.

        Shape, finiteness, hermiticity and trace are always checked.
        The eigenvalue check is skipped for validate=False, which
        callers use for matrices that are positive by construction.

        Raises
        ------
        InvalidStateError
        """
        try:
            matrix = as_matrix(matrix).copy()
            check_square(matrix)
        except ValueError as e:
            raise InvalidStateError(str(e))

        deviation = hermiticity_error(matrix)
        if deviation > HERMITICITY_TOL:
            raise InvalidStateError(
                'Density matrix is not Hermitian (deviation {:.3e})'.format(
                    deviation))
        trace = np.trace(matrix)
        if abs(trace - 1) > TRACE_TOL:
            raise InvalidStateError(
                'Density matrix has trace {:.12g}'.format(trace.real))
        if validate:
            min_eigenvalue = hermitian_eig(matrix).eigenvalues[-1]
            if min_eigenvalue < -PSD_TOL:
                raise InvalidStateError(
                    'Density matrix has negative eigenvalue {:.3e}'.format(
                        min_eigenvalue))
        matrix.setflags(write=False)
        self.matrix = matrix

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim, dtype=complex) / dim, validate=False)

    def eigenvalues(self):
        """ Clamped eigenvalues, sorted descending """
        return clamp_eigenvalues(hermitian_eig(self.matrix).eigenvalues)

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return 'DensityMatrix({})'.format(np.array2string(self.matrix))


def as_density_matrix(state):
    """
    Accepts a DensityMatrix, a PureState or a square array.
    """
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.projector()
    return DensityMatrix(state)


def basis_state(dim, index):
    amplitudes = np.zeros(dim, dtype=complex)
    amplitudes[index] = 1
    return PureState(amplitudes)


def check_same_dim(rho, sigma):
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(
            'States of dimension {} and {} cannot be compared'.format(
                rho.dim, sigma.dim))


def spectrum_entropy(eigenvalues):
    """
    Shannon entropy in bits of a spectrum, 0 log 0 := 0.

    Raises
    ------
    InvalidStateError
        if an eigenvalue is below -PSD_TOL
    """
    eigenvalues = clamp_eigenvalues(eigenvalues)
    if eigenvalues.min() < 0:
        raise InvalidStateError(
            'Negative eigenvalue {:.3e} in entropy'.format(eigenvalues.min()))
    return float(np.sum(entr(eigenvalues)) / np.log(2))


def matrix_entropy(m):
    """ von Neumann entropy in bits of a Hermitian PSD matrix """
    return spectrum_entropy(hermitian_eig(m).eigenvalues)


def von_neumann_entropy(rho):
    """
    S(rho) = -sum lambda log2 lambda.

    Parameters
    ----------
    rho: DensityMatrix or PureState

    Returns
    -------
    out: float
        entropy in bits, in [0, log2(dim)]
    """
    rho = as_density_matrix(rho)
    return matrix_entropy(rho.matrix)


def purify(rho):
    """
    Purification |Psi> = sum_k sqrt(lambda_k) |v_k> (x) |k>.

    The system is the first tensor factor, the reference the second,
    so that tracing out the reference (partial_trace(.., keep='A'))
    gives back rho.

    Parameters
    ----------
    rho: DensityMatrix

    Returns
    -------
    out: PureState
        state of dimension dim**2
    """
    rho = as_density_matrix(rho)
    eigenvalues, eigenvectors = hermitian_eig(rho.matrix)
    eigenvalues = clamp_eigenvalues(eigenvalues)
    if eigenvalues.min() < 0:
        raise InvalidStateError(
            'Cannot purify a matrix with eigenvalue {:.3e}'.format(
                eigenvalues.min()))
    amplitudes = eigenvectors * np.sqrt(eigenvalues)
    return PureState(amplitudes.reshape(-1))


def fidelity(rho, sigma):
    """
    Uhlmann fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Raises
    ------
    DimensionMismatchError
    """
    rho = as_density_matrix(rho)
    sigma = as_density_matrix(sigma)
    check_same_dim(rho, sigma)

    sqrt_rho = psd_function(rho.matrix, _dustless_sqrt)
    inner = sqrt_rho @ sigma.matrix @ sqrt_rho
    inner = (inner + dagger(inner)) / 2
    eigenvalues = clamp_eigenvalues(hermitian_eig(inner).eigenvalues)
    value = np.sum(_dustless_sqrt(np.clip(eigenvalues, 0, None))) ** 2
    return float(np.clip(value, 0.0, 1.0))


def _dustless_sqrt(values):
    values = np.where(np.abs(values) < SQRT_DUST, 0.0, values)
    return np.sqrt(values)


def dephase_diagonal(rho):
    """ Zeroes all off-diagonal entries of rho """
    rho = as_density_matrix(rho)
    return DensityMatrix(np.diag(np.diag(rho.matrix)), validate=False)


def sample_random_mixed(dim, rng):
    """
    Random density matrix from the Hilbert-Schmidt ensemble.

    rho = G G^dagger / tr(G G^dagger) with G a dim x dim matrix of
    independent standard complex Gaussian entries.

    Parameters
    ----------
    dim: int
        at least 2
    rng: numpy.random.Generator

    Returns
    -------
    out: DensityMatrix
    """
    if dim < 2:
        raise ValueError('dim must be at least 2, got {}'.format(dim))
    g = (rng.standard_normal((dim, dim)) +
         1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    rho = g @ dagger(g)
    rho = (rho + dagger(rho)) / 2
    return DensityMatrix(rho / np.trace(rho).real, validate=False)


def maximally_coherent(phases):
    """
    Pure state with amplitudes exp(i phi_l)/sqrt(d), phi_0 = 0.

    Parameters
    ----------
    phases: array_like
        the d - 1 relative phases [rad]
    """
    phases = np.concatenate(([0.0], np.asarray(phases, dtype=float)))
    return PureState(np.exp(1j * phases) / np.sqrt(phases.size))


def sample_maximally_coherent(dim, rng):
    """
    Maximally coherent pure state with dim - 1 relative phases drawn
    uniformly from [0, 2 pi).
    """
    if dim < 2:
        raise ValueError('dim must be at least 2, got {}'.format(dim))
    return maximally_coherent(rng.uniform(0, 2 * np.pi, dim - 1))
