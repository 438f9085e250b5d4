"""
Information quantities of a state sent through a permutation channel:
relative entropy of coherence, entropy exchange, quantum mutual
information, coherent information and loss, all in bits.
"""
import enum
import logging
import multiprocessing as mp
from itertools import repeat as irepeat

import numpy as np

from nmlab.channels import apply, apply_extended, channel_at, \
    check_channel_dim
from nmlab.constants import DEFAULT_GRID_POINTS
from nmlab.numerics import dagger
from nmlab.serializer import Serializer
from nmlab.states import as_density_matrix, dephase_diagonal, \
    matrix_entropy, purify, sample_maximally_coherent, \
    sample_random_mixed, von_neumann_entropy
from nmlab.utils import debug_timer

logger = logging.getLogger(__name__)

EXCHANGE_METHODS = ('w_matrix', 'purification')


class CapacityKind(enum.Enum):
    REC = 'rec'
    ENTROPY_EXCHANGE = 'entropy_exchange'
    QMI = 'qmi'
    COHERENT_INFO = 'coherent_info'
    LOSS = 'loss'


class CapacityCurve(Serializer):

    def __init__(self, kind, t_grid, values, input_descriptor='',
                 scenario=''):
        """
        Capacity values along a grid of the dynamical parameter.

        Parameters
        ----------
        kind: CapacityKind
        t_grid: array_like
        values: array_like
            [bits]
        input_descriptor: str
            Describes the input state, e.g. 'e2' or 'chaotic'
        scenario: str
            Key of the schedule
        """
        t_grid = np.asarray(t_grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if t_grid.shape != values.shape:
            raise ValueError('Grid and values differ in length')
        if not np.isfinite(values).all():
            raise ValueError('Capacity values must be finite')
        self.kind = CapacityKind(kind)
        self.t_grid = t_grid
        self.values = values
        self.input_descriptor = input_descriptor
        self.scenario = scenario

    def argmin(self):
        """ t of the first minimal value """
        return float(self.t_grid[np.argmin(self.values)])

    def argmax(self):
        return float(self.t_grid[np.argmax(self.values)])

    def summary(self):
        return {
            'kind': self.kind.value,
            'scenario': self.scenario,
            'input': self.input_descriptor,
            'argmin_t': self.argmin(),
            'min_value_bits': float(self.values.min()),
            'start_value_bits': float(self.values[0]),
            'end_value_bits': float(self.values[-1]),
        }


def rec(rho):
    """
    Relative entropy of coherence S(rho_diag) - S(rho).

    Parameters
    ----------
    rho: DensityMatrix or PureState

    Returns
    -------
    out: float
        [bits]
    """
    rho = as_density_matrix(rho)
    value = von_neumann_entropy(dephase_diagonal(rho)) - \
        von_neumann_entropy(rho)
    return max(value, 0.0)


def exchange_matrix(rho, channel):
    """ W_ij = tr(E_i rho E_j^dagger) for the Kraus operators E_i """
    kraus = channel.kraus_operators()
    w = np.einsum('iab,bc,jac->ij', kraus, rho.matrix, np.conj(kraus))
    return (w + dagger(w)) / 2


def entropy_exchange(rho, channel, method='w_matrix'):
    """
    Entropy the environment acquires when rho passes the channel.

    Parameters
    ----------
    rho: DensityMatrix or PureState
    channel: KrausChannel
    method: {'w_matrix', 'purification'}
        'w_matrix' diagonalizes W_ij = tr(E_i rho E_j^dagger),
        'purification' evolves a purification of rho with
        Phi (x) 1_R and takes the entropy of the joint state

    Returns
    -------
    out: float
        [bits]
    """
    rho = as_density_matrix(rho)
    check_channel_dim(channel, rho)
    if method == 'w_matrix':
        return matrix_entropy(exchange_matrix(rho, channel))
    if method == 'purification':
        joint = apply_extended(channel, purify(rho), rho.dim)
        return matrix_entropy((joint + dagger(joint)) / 2)
    raise ValueError('Unknown method "{}", use one of {}'.format(
        method, EXCHANGE_METHODS))


def _entropies(rho, channel):
    """ S(rho), S(Phi[rho]) and S(rho, Phi) """
    rho = as_density_matrix(rho)
    output = apply(channel, rho)
    return (von_neumann_entropy(rho), von_neumann_entropy(output),
            entropy_exchange(rho, channel))


def qmi(rho, channel):
    """ Quantum mutual information S(rho) + S(Phi[rho]) - S(rho, Phi) """
    s_in, s_out, s_ex = _entropies(rho, channel)
    return s_in + s_out - s_ex


def coherent_info(rho, channel):
    """ Coherent information S(Phi[rho]) - S(rho, Phi) """
    _, s_out, s_ex = _entropies(rho, channel)
    return s_out - s_ex


def loss(rho, channel):
    """ Loss S(rho) + S(rho, Phi) - S(Phi[rho]) """
    s_in, s_out, s_ex = _entropies(rho, channel)
    return s_in + s_ex - s_out


def evaluate(kind, rho, channel):
    """
    Evaluate one capacity of rho under the channel.

    For REC the coherence of the output state is returned.
    """
    kind = CapacityKind(kind)
    if kind is CapacityKind.REC:
        return rec(apply(channel, rho))
    if kind is CapacityKind.ENTROPY_EXCHANGE:
        return entropy_exchange(rho, channel)
    if kind is CapacityKind.QMI:
        return qmi(rho, channel)
    if kind is CapacityKind.COHERENT_INFO:
        return coherent_info(rho, channel)
    return loss(rho, channel)


def default_grid(points=DEFAULT_GRID_POINTS):
    if points < 1:
        raise ValueError('A grid needs at least one point')
    if points == 1:
        return np.zeros(1)
    return np.linspace(0, 1, points)


@debug_timer
def sweep(schedule, rho, kind, grid=None, input_descriptor=''):
    """
    Capacity along a grid of t values.

    Parameters
    ----------
    schedule: MapSchedule
    rho: DensityMatrix or PureState
    kind: CapacityKind
    grid: array_like
        t values, defaults to 101 points in [0, 1]
    input_descriptor: str

    Returns
    -------
    out: CapacityCurve
    """
    if grid is None:
        grid = default_grid()
    rho = as_density_matrix(rho)
    values = [evaluate(kind, rho, channel_at(schedule, t)) for t in grid]
    return CapacityCurve(kind, grid, values,
                         input_descriptor=input_descriptor,
                         scenario=schedule.key)


def sample_states(kind, dim, n_samples, rng):
    """
    Draw the sample ensemble for a capacity: maximally coherent pure
    states for REC, Hilbert-Schmidt mixed states otherwise.

    Samples are drawn one after the other, so the first k samples of
    a seeded run do not depend on n_samples.
    """
    if n_samples < 1:
        raise ValueError('n_samples must be at least 1')
    kind = CapacityKind(kind)
    if kind is CapacityKind.REC:
        return [sample_maximally_coherent(dim, rng)
                for _ in range(n_samples)]
    return [sample_random_mixed(dim, rng) for _ in range(n_samples)]


def _evaluate_samples(kind, samples, channel):
    return np.array([evaluate(kind, rho, channel) for rho in samples])


@debug_timer
def extremize_over_states(schedule, t, n_samples, kind, rng, mode='max'):
    """
    Extremum of a capacity over a random state ensemble.

    Parameters
    ----------
    schedule: MapSchedule
    t: float
    n_samples: int
    kind: CapacityKind
    rng: numpy.random.Generator
    mode: {'max', 'min', 'envelope'}

    Returns
    -------
    out: float or (float, float)
        the (min, max) pair for mode 'envelope'
    """
    if mode not in ('max', 'min', 'envelope'):
        raise ValueError('Unknown mode "{}"'.format(mode))
    samples = sample_states(kind, schedule.dim, n_samples, rng)
    values = _evaluate_samples(kind, samples, channel_at(schedule, t))
    if mode == 'max':
        return float(values.max())
    if mode == 'min':
        return float(values.min())
    return float(values.min()), float(values.max())


def _envelope_at(kind, samples, schedule, t):
    values = _evaluate_samples(kind, samples, channel_at(schedule, t))
    return values.min(), values.max()


@debug_timer
def ensemble_envelope(schedule, n_samples, kind, rng, grid=None,
                      processes=1):
    """
    Lower and upper capacity curves over one sample ensemble.

    The same samples are used at every grid point.

    Parameters
    ----------
    schedule: MapSchedule
    n_samples: int
    kind: CapacityKind
    rng: numpy.random.Generator
    grid: array_like
    processes: int
        number of worker processes, 1 evaluates in this process

    Returns
    -------
    lower: CapacityCurve
    upper: CapacityCurve
    """
    if grid is None:
        grid = default_grid()
    samples = sample_states(kind, schedule.dim, n_samples, rng)
    args = zip(irepeat(kind), irepeat(samples), irepeat(schedule), grid)
    if processes > 1:
        with mp.Pool(processes=processes) as pool:
            bounds = pool.starmap(_envelope_at, args)
    else:
        bounds = [_envelope_at(*arg) for arg in args]
    bounds = np.array(bounds)
    descriptor = 'ensemble of {}'.format(n_samples)
    lower = CapacityCurve(kind, grid, bounds[:, 0],
                          input_descriptor=descriptor + ' (min)',
                          scenario=schedule.key)
    upper = CapacityCurve(kind, grid, bounds[:, 1],
                          input_descriptor=descriptor + ' (max)',
                          scenario=schedule.key)
    return lower, upper
