"""
Permutation channels.

A channel is a convex mixture of permutation unitaries acting on the
cores of an N-dimensional qudit. The unitaries permute the cores only
within consecutive blocks of size s, the remaining N - m*s cores are
permuted freely. A `MapSchedule` assigns a probability vector over
these unitaries to every value of the dynamical parameter t in [0, 1].

Superoperators use column stacking, vec(U rho U^dagger) =
(conj(U) (x) U) vec(rho).
"""
import enum
import itertools
import logging
import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from nmlab.constants import PSD_TOL, RANK_TOL
from nmlab.numerics import dagger, hermitian_eig, kron, pseudo_inverse, \
    unvec, vec, DimensionMismatchError
from nmlab.serializer import Serializer
from nmlab.states import DensityMatrix, as_density_matrix

logger = logging.getLogger(__name__)

PROBABILITY_SUM_TOL = 1e-12
SCENARIOS = ('uniform', 'simplified', 'custom')


class InvalidSubsetSizeError(ValueError):
    pass


class TimeOutOfRangeError(ValueError):
    pass


class Divisibility(enum.Enum):
    CP = 'CP'
    NOT_CP = 'NotCP'
    INDETERMINATE = 'Indeterminate'


class PermutationUnitary(object):

    def __init__(self, perm, index=None):
        """
        Unitary with matrix[perm[j], j] = 1.

        Parameters
        ----------
        perm: sequence of int
            permutation of 0..N-1
        index: int
            position in the list of a schedule (None if standalone)
        """
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError('{} is not a permutation'.format(perm))
        self.perm = perm
        self.index = index
        matrix = np.zeros((len(perm), len(perm)), dtype=complex)
        matrix[perm, np.arange(len(perm))] = 1
        matrix.setflags(write=False)
        self.matrix = matrix

    @property
    def dim(self):
        return len(self.perm)

    def __eq__(self, other):
        return isinstance(other, PermutationUnitary) and \
            self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return 'PermutationUnitary({}, index={})'.format(self.perm,
                                                         self.index)


def _check_subset_size(N, s):
    if N < 1 or not 1 <= s <= N:
        raise InvalidSubsetSizeError(
            'Subset size s={} is invalid for N={}'.format(s, N))


@lru_cache(maxsize=None)
def enumerate_permutations(N, s):
    """
    All permutations acting within the consecutive blocks of size s.

    Parameters
    ----------
    N: int
        number of cores (qudit dimension)
    s: int
        subset size, 1 <= s <= N

    Returns
    -------
    out: tuple of PermutationUnitary
        (s!)^m (N - m s)! unitaries in lexicographic order of their
        permutations, the identity first

    Raises
    ------
    InvalidSubsetSizeError
    """
    _check_subset_size(N, s)
    m = N // s
    blocks = [tuple(range(k * s, (k + 1) * s)) for k in range(m)]
    remainder = tuple(range(m * s, N))
    if remainder:
        blocks.append(remainder)

    perms = []
    for parts in itertools.product(*[itertools.permutations(b)
                                     for b in blocks]):
        perms.append(tuple(itertools.chain(*parts)))
    perms.sort()

    return tuple(PermutationUnitary(perm, index)
                 for index, perm in enumerate(perms))


def permutation_count(N, s):
    _check_subset_size(N, s)
    m = N // s
    return math.factorial(s) ** m * math.factorial(N - m * s)


def p_min(N, s):
    """ Probability 1/count at which all permutations are equally likely """
    return 1.0 / permutation_count(N, s)


class MapSchedule(Serializer):

    def __init__(self, N=4, s=2, scenario='uniform', custom_weights=None,
                 key=None, name=None):
        """
        One-parameter family t -> probability vector over the
        permutations of `enumerate_permutations(N, s)`.

        Parameters
        ----------
        N: int
        s: int
        scenario: str
            'uniform': p_i = t / (n - 1) for i != 0,
            'simplified' (N=4, s=2 only): p_1 = p_2 = 0, p_3 = t,
            'custom': p_i = t * w_i with the given weights
        custom_weights: array_like
            weights of the n - 1 non-identity permutations,
            normalized on construction
        key: str
            ID of the schedule
        name: str
            Descriptive name
        """
        _check_subset_size(N, s)
        if scenario not in SCENARIOS:
            raise ValueError('Unknown scenario "{}"'.format(scenario))
        if scenario == 'simplified' and (N, s) != (4, 2):
            raise ValueError(
                'The simplified scenario requires N=4, s=2')

        n_perm = permutation_count(N, s)
        if scenario == 'custom':
            if custom_weights is None:
                raise ValueError('Custom scenario requires weights')
            custom_weights = np.asarray(custom_weights, dtype=float)
            if custom_weights.shape != (n_perm - 1,):
                raise ValueError(
                    'Expected {} weights, got {}'.format(
                        n_perm - 1, custom_weights.size))
            if (custom_weights < 0).any() or custom_weights.sum() <= 0 \
                    or not np.isfinite(custom_weights).all():
                raise ValueError('Weights must be nonnegative and not all 0')
            custom_weights = custom_weights / custom_weights.sum()
        elif custom_weights is not None:
            raise ValueError('Weights are only used by the custom scenario')

        self.N = N
        self.s = s
        self.scenario = scenario
        self.custom_weights = custom_weights
        self.key = key if key is not None else scenario
        self.name = name if name is not None else self.key

    @property
    def permutations(self):
        return enumerate_permutations(self.N, self.s)

    @property
    def dim(self):
        return self.N

    def probabilities(self, t):
        """
        Probability vector over `permutations` at time t.

        Raises
        ------
        TimeOutOfRangeError
        """
        check_time(t)
        n = len(self.permutations)
        if n == 1:
            return np.ones(1)
        p = np.zeros(n)
        p[0] = 1 - t
        if self.scenario == 'uniform':
            p[1:] = t / (n - 1)
        elif self.scenario == 'simplified':
            p[self.swap_index] = t
        else:
            p[1:] = t * self.custom_weights
        return p

    @property
    def swap_index(self):
        """ Index of the permutation exchanging both blocks (U3 for N=4) """
        return len(self.permutations) - 1

    @property
    def active_count(self):
        """ Number of permutations with nonzero weight for 0 < t < 1 """
        n = len(self.permutations)
        if n == 1:
            return 1
        if self.scenario == 'uniform':
            return n
        if self.scenario == 'simplified':
            return 2
        return 1 + int(np.count_nonzero(self.custom_weights))

    @property
    def p_min(self):
        return 1.0 / self.active_count

    @property
    def t_min(self):
        """ Time of the capacity minimum """
        return 1.0 - self.p_min

    def __repr__(self):
        return 'MapSchedule(N={}, s={}, scenario={!r})'.format(
            self.N, self.s, self.scenario)


def check_time(t):
    if not 0 <= t <= 1:
        raise TimeOutOfRangeError('t = {} is not in [0, 1]'.format(t))


class KrausElement(NamedTuple):
    probability: float
    unitary: PermutationUnitary


class KrausChannel(object):

    def __init__(self, elements):
        """
        Mixture of unitaries with Kraus operators sqrt(p_i) U_i.

        Parameters
        ----------
        elements: iterable of (probability, PermutationUnitary)
            elements with zero probability are dropped
        """
        elements = [KrausElement(float(p), u) for p, u in elements]
        if not elements:
            raise ValueError('A channel needs at least one element')
        dims = {u.dim for _, u in elements}
        if len(dims) != 1:
            raise DimensionMismatchError(
                'Unitaries of different dimensions {}'.format(sorted(dims)))
        probabilities = np.array([p for p, _ in elements])
        if (probabilities < 0).any() or (probabilities > 1).any():
            raise ValueError('Probabilities must lie in [0, 1]')
        if abs(probabilities.sum() - 1) > PROBABILITY_SUM_TOL:
            raise ValueError(
                'Probabilities sum to {:.15g}'.format(probabilities.sum()))
        self.elements = tuple(e for e in elements if e.probability > 0)
        self.dim = dims.pop()

    @classmethod
    def identity(cls, dim):
        return cls([(1.0, PermutationUnitary(range(dim), 0))])

    @property
    def probabilities(self):
        return np.array([e.probability for e in self.elements])

    @property
    def unitaries(self):
        """ Stack of the unitary matrices, shape (k, dim, dim) """
        return np.stack([e.unitary.matrix for e in self.elements])

    @property
    def indices(self):
        return [e.unitary.index for e in self.elements]

    def kraus_operators(self):
        return np.sqrt(self.probabilities)[:, None, None] * self.unitaries

    def __repr__(self):
        return 'KrausChannel({})'.format(
            ', '.join('{:.6g}*{}'.format(p, u.perm)
                      for p, u in self.elements))


def channel_at(schedule, t):
    """
    The channel Lambda_t of a schedule.

    Raises
    ------
    TimeOutOfRangeError
    """
    probabilities = schedule.probabilities(t)
    return KrausChannel(zip(probabilities, schedule.permutations))


def check_channel_dim(channel, rho):
    if channel.dim != rho.dim:
        raise DimensionMismatchError(
            'Channel of dimension {} cannot act on a state of dimension '
            '{}'.format(channel.dim, rho.dim))


def apply(channel, rho):
    """
    rho' = sum_i p_i U_i rho U_i^dagger

    Parameters
    ----------
    channel: KrausChannel
    rho: DensityMatrix or PureState

    Returns
    -------
    out: DensityMatrix

    Raises
    ------
    DimensionMismatchError
    """
    rho = as_density_matrix(rho)
    check_channel_dim(channel, rho)
    u = channel.unitaries
    out = np.einsum('k,kij,jl,kml->im', channel.probabilities, u,
                    rho.matrix, np.conj(u))
    return DensityMatrix((out + dagger(out)) / 2, validate=False)


def apply_extended(channel, psi, dim_reference):
    """
    (Phi (x) 1_R)(|psi><psi|) for a pure state on system (x) reference.

    Parameters
    ----------
    channel: KrausChannel
    psi: PureState
        state of dimension channel.dim * dim_reference, system first
    dim_reference: int

    Returns
    -------
    out: numpy.ndarray
        the joint output matrix
    """
    if psi.dim != channel.dim * dim_reference:
        raise DimensionMismatchError(
            'State of dimension {} does not fit {} x {}'.format(
                psi.dim, channel.dim, dim_reference))
    out = np.zeros((psi.dim, psi.dim), dtype=complex)
    identity = np.eye(dim_reference)
    for p, u in channel.elements:
        phi = kron(u.matrix, identity) @ psi.amplitudes
        out += p * np.outer(phi, np.conj(phi))
    return out


def superoperator(channel):
    """ Column-stacking superoperator sum_i p_i conj(U_i) (x) U_i """
    d = channel.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for p, u in channel.elements:
        out += p * kron(np.conj(u.matrix), u.matrix)
    return out


def choi_matrix(channel):
    """
    Choi matrix sum_ij E_ij (x) Phi(E_ij).

    Parameters
    ----------
    channel: KrausChannel or array_like
        a channel or its d^2 x d^2 column-stacking superoperator

    Returns
    -------
    out: numpy.ndarray
        d^2 x d^2 matrix, trace d for trace preserving maps
    """
    if isinstance(channel, KrausChannel):
        channel = superoperator(channel)
    superop = np.asarray(channel, dtype=complex)
    d = int(round(np.sqrt(superop.shape[0])))
    if superop.shape != (d * d, d * d):
        raise DimensionMismatchError(
            'Superoperator of shape {} is not d^2 x d^2'.format(
                superop.shape))
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=complex)
            e_ij[i, j] = 1
            choi += kron(e_ij, unvec(superop @ vec(e_ij), d))
    return choi


class IntermediateMap(NamedTuple):
    superoperator: np.ndarray
    verdict: Divisibility
    min_choi_eigenvalue: float


def intermediate_map(schedule, s_time, t_time, rank_tol=RANK_TOL):
    """
    The map Phi_{t,s} = M_t pinv(M_s) taking the state at s_time to the
    state at t_time, and whether it is completely positive.

    Parameters
    ----------
    schedule: MapSchedule
    s_time: float
    t_time: float
        0 <= s_time < t_time <= 1
    rank_tol: float
        relative singular value cutoff of the pseudo-inverse

    Returns
    -------
    out: IntermediateMap
        verdict is INDETERMINATE whenever M_s is rank deficient

    Raises
    ------
    TimeOutOfRangeError
    """
    check_time(s_time)
    check_time(t_time)
    if not s_time < t_time:
        raise TimeOutOfRangeError(
            'Need s_time < t_time, got {} and {}'.format(s_time, t_time))
    m_t = superoperator(channel_at(schedule, t_time))
    m_s = superoperator(channel_at(schedule, s_time))
    pinv, rank_deficient = pseudo_inverse(m_s, rank_tol)
    phi = m_t @ pinv

    choi = choi_matrix(phi)
    choi = (choi + dagger(choi)) / 2
    min_eigenvalue = float(hermitian_eig(choi).eigenvalues[-1])

    if rank_deficient:
        verdict = Divisibility.INDETERMINATE
    elif min_eigenvalue >= -PSD_TOL:
        verdict = Divisibility.CP
    else:
        verdict = Divisibility.NOT_CP
    return IntermediateMap(phi, verdict, min_eigenvalue)


class DivisibilityEntry(NamedTuple):
    s_time: float
    t_time: float
    min_choi_eigenvalue: float
    verdict: Divisibility


def divisibility_table(schedule, grid, rank_tol=RANK_TOL):
    """
    Evaluate `intermediate_map` for all pairs s_time < t_time of a grid.

    Returns
    -------
    out: list of DivisibilityEntry
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    table = []
    for i, s_time in enumerate(grid):
        for t_time in grid[i + 1:]:
            result = intermediate_map(schedule, s_time, t_time, rank_tol)
            table.append(DivisibilityEntry(float(s_time), float(t_time),
                                           result.min_choi_eigenvalue,
                                           result.verdict))
    return table


def is_non_markovian(table):
    return any(entry.verdict is Divisibility.NOT_CP for entry in table)


def sample_unitary(channel, rng):
    """
    Draw the schedule index of one unitary with probability p_i.

    Parameters
    ----------
    channel: KrausChannel
    rng: numpy.random.Generator

    Returns
    -------
    out: int
    """
    return int(sample_unitaries(channel, rng, 1)[0])


def sample_unitaries(channel, rng, size):
    """ Draw `size` unitary indices at once, shape (size,) """
    choices = rng.choice(len(channel.elements), size=size,
                         p=channel.probabilities)
    return np.asarray(channel.indices)[choices]
