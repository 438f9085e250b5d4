"""
Simulated state tomography of a d=4 qudit: five mutually unbiased
bases, Born-rule count simulation, maximum likelihood reconstruction
by the R rho R iteration and Poisson Monte-Carlo error bars.
"""
import logging
import multiprocessing as mp
from functools import lru_cache
from itertools import repeat as irepeat
from typing import NamedTuple

import numpy as np

from nmlab.capacities import rec
from nmlab.constants import PROBABILITY_FLOOR
from nmlab.numerics import dagger, DimensionMismatchError
from nmlab.serializer import Serializer
from nmlab.states import DensityMatrix, PureState, as_density_matrix
from nmlab.utils import debug_timer, make_rng, spawn_seeds

logger = logging.getLogger(__name__)

NOISE_MODES = ('multinomial', 'poisson')
MUB_TOL = 1e-10
# Index of the basis used to encode the vault colors
ENCODING_BASIS = 1
# Dilution of the R rho R step is given up below this weight
MIN_DILUTION = 2 ** -40

# Amplitudes (times 2) of the five bases, rows are the basis states
_MUB_TABLE_D4 = (
    ((2, 0, 0, 0),
     (0, 2, 0, 0),
     (0, 0, 2, 0),
     (0, 0, 0, 2)),
    ((1, 1j, 1j, -1),
     (1, 1j, -1j, 1),
     (1, -1j, -1j, -1),
     (1, -1j, 1j, 1)),
    ((1, 1, 1, 1),
     (1, -1, 1, -1),
     (1, 1, -1, -1),
     (1, -1, -1, 1)),
    ((1, -1j, 1, 1j),
     (1, 1j, 1, -1j),
     (1, 1j, -1, 1j),
     (1, -1j, -1, -1j)),
    ((1, 1, 1j, -1j),
     (1, -1, 1j, 1j),
     (1, 1, -1j, 1j),
     (1, -1, -1j, -1j)),
)


class MubConstructionError(RuntimeError):
    pass


class ZeroProbabilityBinError(ArithmeticError):
    pass


class MubSet(object):

    def __init__(self, bases):
        """
        Parameters
        ----------
        bases: array_like
            shape (n_bases, dim, dim), bases[b, k] are the amplitudes
            of state k of basis b
        """
        bases = np.array(bases, dtype=complex)
        if bases.ndim != 3 or bases.shape[1] != bases.shape[2]:
            raise ValueError(
                'Expected shape (n_bases, dim, dim), got {}'.format(
                    bases.shape))
        bases.setflags(write=False)
        self.bases = bases

    @property
    def dim(self):
        return self.bases.shape[1]

    @property
    def n_bases(self):
        return self.bases.shape[0]

    def state(self, basis, index):
        return PureState(self.bases[basis, index])

    def projectors(self):
        """ All projectors, shape (n_bases * dim, dim, dim) """
        vectors = self.bases.reshape(-1, self.dim)
        return np.einsum('ki,kj->kij', vectors, np.conj(vectors))

    def check(self, tol=MUB_TOL):
        """
        Verify orthonormality within and unbiasedness across the bases.

        Raises
        ------
        MubConstructionError
        """
        identity = np.eye(self.dim)
        for b, basis in enumerate(self.bases):
            gram = np.conj(basis) @ basis.T
            if np.max(np.abs(gram - identity)) > tol:
                raise MubConstructionError(
                    'Basis {} is not orthonormal'.format(b))
        for a in range(self.n_bases):
            for b in range(a + 1, self.n_bases):
                overlaps = np.abs(np.conj(self.bases[a]) @
                                  self.bases[b].T) ** 2
                if np.max(np.abs(overlaps - 1 / self.dim)) > tol:
                    raise MubConstructionError(
                        'Bases {} and {} are not unbiased'.format(a, b))


@lru_cache(maxsize=None)
def build_mubs_d4():
    """
    The five mutually unbiased bases of d=4.

    Basis 0 is the computational basis, basis 1 holds the states
    (1, i, i, -1)/2, (1, i, -i, 1)/2, (1, -i, -i, -1)/2, (1, -i, i, 1)/2
    used to encode the vault colors.

    Returns
    -------
    out: MubSet

    Raises
    ------
    MubConstructionError
    """
    mubs = MubSet(np.array(_MUB_TABLE_D4, dtype=complex) / 2)
    mubs.check()
    return mubs


class CountRecord(Serializer):

    def __init__(self, shots_per_basis, counts, noise_mode='multinomial'):
        """
        Detection counts of a tomography run.

        Parameters
        ----------
        shots_per_basis: int
        counts: array_like
            nonnegative integers, shape (n_bases, dim)
        noise_mode: {'multinomial', 'poisson'}
            rows sum to shots_per_basis only in multinomial mode
        """
        counts = np.asarray(counts)
        if counts.ndim != 2:
            raise ValueError('Counts must be a (n_bases, dim) table')
        if (counts < 0).any() or \
                not np.array_equal(counts, np.round(counts)):
            raise ValueError('Counts must be nonnegative integers')
        if noise_mode not in NOISE_MODES:
            raise ValueError('Unknown noise mode "{}"'.format(noise_mode))
        self.shots_per_basis = int(shots_per_basis)
        self.counts = counts.astype(np.int64)
        self.noise_mode = noise_mode

    @property
    def total(self):
        return int(self.counts.sum())


def born_probabilities(rho, basis):
    """
    Outcome probabilities <psi_k|rho|psi_k> of a projective measurement.

    Parameters
    ----------
    rho: DensityMatrix or PureState
    basis: array_like
        shape (dim, dim), rows are the basis states

    Returns
    -------
    out: numpy.ndarray
        clamped to >= 0 and normalized
    """
    rho = as_density_matrix(rho)
    basis = np.asarray(basis, dtype=complex)
    if basis.shape[-1] != rho.dim:
        raise DimensionMismatchError(
            'Basis of dimension {} for a state of dimension {}'.format(
                basis.shape[-1], rho.dim))
    p = np.real(np.einsum('ki,ij,kj->k', np.conj(basis), rho.matrix, basis))
    p = np.clip(p, 0, None)
    return p / p.sum()


def simulate_counts(rho, mubs, shots_per_basis, rng,
                    noise_mode='multinomial'):
    """
    Draw detection counts for every basis of `mubs`.

    Parameters
    ----------
    rho: DensityMatrix
    mubs: MubSet
    shots_per_basis: int
    rng: numpy.random.Generator
    noise_mode: {'multinomial', 'poisson'}
        'multinomial' distributes exactly shots_per_basis per basis,
        'poisson' draws every bin independently

    Returns
    -------
    out: CountRecord
    """
    if shots_per_basis < 1:
        raise ValueError('shots_per_basis must be positive')
    if noise_mode not in NOISE_MODES:
        raise ValueError('Unknown noise mode "{}"'.format(noise_mode))
    counts = []
    for basis in mubs.bases:
        p = born_probabilities(rho, basis)
        if noise_mode == 'multinomial':
            counts.append(rng.multinomial(shots_per_basis, p))
        else:
            counts.append(rng.poisson(shots_per_basis * p))
    return CountRecord(shots_per_basis, np.array(counts), noise_mode)


class MleResult(NamedTuple):
    rho: DensityMatrix
    iterations: int
    log_likelihood: float
    converged: bool
    history: np.ndarray


def _log_likelihood(frequencies, probabilities, floor):
    mask = frequencies > 0
    return float(np.sum(frequencies[mask] *
                        np.log(np.maximum(probabilities[mask], floor))))


def _model_probabilities(projectors, rho):
    return np.real(np.einsum('kij,ji->k', projectors, rho))


def _step(rho, r):
    rho = r @ rho @ r
    rho = (rho + dagger(rho)) / 2
    return rho / np.trace(rho).real


@debug_timer
def mle_reconstruct(counts, mubs, max_iters=10 ** 4, tol=1e-10,
                    probability_floor=PROBABILITY_FLOOR):
    """
    Maximum likelihood state from tomography counts.

    Iterates rho <- R rho R / tr(R rho R) with
    R = sum_bk f_bk / p_bk(rho) |psi_bk><psi_bk| starting from the
    maximally mixed state. A step that would lower the log-likelihood
    is replaced by the diluted step with R_eps = (1 + eps R)/(1 + eps),
    halving eps from 1.

    Parameters
    ----------
    counts: CountRecord
    mubs: MubSet
    max_iters: int
    tol: float
        stop when the log-likelihood gain drops below tol
    probability_floor: float
        model probabilities are floored here inside the log-likelihood
        and R; with 0 an observed bin of zero probability raises

    Returns
    -------
    out: MleResult

    Raises
    ------
    ZeroProbabilityBinError
    """
    n = np.asarray(counts.counts, dtype=float).reshape(-1)
    projectors = mubs.projectors()
    if n.size != projectors.shape[0]:
        raise DimensionMismatchError(
            'Count table with {} bins for {} projectors'.format(
                n.size, projectors.shape[0]))
    if n.sum() <= 0:
        raise ValueError('Cannot reconstruct a state from zero counts')
    frequencies = n / n.sum()
    dim = mubs.dim
    identity = np.eye(dim, dtype=complex)

    def r_operator(probabilities):
        if probability_floor <= 0:
            empty = (frequencies > 0) & (probabilities <= 0)
            if empty.any():
                raise ZeroProbabilityBinError(
                    'Observed bin {} has zero model probability'.format(
                        int(np.flatnonzero(empty)[0])))
            safe = np.where(probabilities > 0, probabilities, 1.0)
        else:
            safe = np.maximum(probabilities, probability_floor)
        return np.einsum('k,kij->ij', frequencies / safe, projectors)

    rho = identity / dim
    probabilities = _model_probabilities(projectors, rho)
    log_likelihood = _log_likelihood(frequencies, probabilities,
                                     probability_floor)
    history = [log_likelihood]
    converged = False
    iterations = 0

    for iterations in range(1, max_iters + 1):
        r = r_operator(probabilities)
        candidate = _step(rho, r)
        candidate_p = _model_probabilities(projectors, candidate)
        candidate_l = _log_likelihood(frequencies, candidate_p,
                                      probability_floor)
        eps = 1.0
        while candidate_l < log_likelihood and eps >= MIN_DILUTION:
            logger.debug('Diluting R rho R step with eps=%g' % eps)
            candidate = _step(rho, (identity + eps * r) / (1 + eps))
            candidate_p = _model_probabilities(projectors, candidate)
            candidate_l = _log_likelihood(frequencies, candidate_p,
                                          probability_floor)
            eps /= 2
        if candidate_l < log_likelihood:
            # No ascent direction left
            converged = True
            break

        gain = candidate_l - log_likelihood
        rho, probabilities, log_likelihood = \
            candidate, candidate_p, candidate_l
        history.append(log_likelihood)
        if gain < tol:
            converged = True
            break

    if converged:
        logger.debug('MLE converged after %d iterations, log-likelihood %g'
                     % (iterations, log_likelihood))
    else:
        logger.warning('MLE did not converge within %d iterations'
                       % max_iters)

    return MleResult(DensityMatrix(rho, validate=False), iterations,
                     log_likelihood, converged, np.array(history))


def trace_statistic(rho):
    return float(np.real(np.trace(rho.matrix)))


def _bootstrap_rep(seed, counts, mubs, statistic, max_iters, tol):
    rng = np.random.default_rng(seed)
    resampled = CountRecord(counts.shots_per_basis,
                            rng.poisson(counts.counts), 'poisson')
    result = mle_reconstruct(resampled, mubs, max_iters=max_iters, tol=tol)
    return statistic(result.rho)


@debug_timer
def monte_carlo_errors(counts, mubs, reps=1000, rng=None, statistic=None,
                       processes=1, max_iters=10 ** 4, tol=1e-10):
    """
    Poisson bootstrap of a statistic of the reconstructed state.

    Every count is resampled from a Poisson distribution centered on
    the observed value, the state is reconstructed and the statistic
    evaluated. Each repetition draws from its own seed spawned from
    `rng`, so the result does not depend on `processes`.

    Parameters
    ----------
    counts: CountRecord
    mubs: MubSet
    reps: int
        at least 2
    rng: numpy.random.Generator or int
    statistic: callable
        DensityMatrix -> float, defaults to the relative entropy of
        coherence
    processes: int
        number of worker processes

    Returns
    -------
    mean: float
    std: float
        one standard deviation of the ensemble
    """
    if reps < 2:
        raise ValueError('reps must be at least 2')
    if statistic is None:
        statistic = rec
    seeds = spawn_seeds(make_rng(rng), reps)
    args = zip(seeds, irepeat(counts), irepeat(mubs), irepeat(statistic),
               irepeat(max_iters), irepeat(tol))
    if processes > 1:
        with mp.Pool(processes=processes) as pool:
            values = pool.starmap(_bootstrap_rep, args)
    else:
        values = [_bootstrap_rep(*arg) for arg in args]
    values = np.array(values, dtype=float)
    return float(values.mean()), float(values.std())
