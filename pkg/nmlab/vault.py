"""
Image storage on permutation-noise qudits.

Every pixel of a CMYK image is stored as one of the four states of the
encoding basis, C -> e1, M -> e2, Y -> e3, K -> e4. The pixels evolve
independently under the channel of a schedule. At the capacity minimum
the image becomes unreadable; at t=1 it is recovered, either directly
(up to a color relabeling) or with the help of the classical register
recording which permutation hit each pixel.

Per-pixel data are stored as arrays: states of shape (h, w, 4) and
density matrices of shape (h, w, 4, 4).
"""
import enum
import logging
from typing import NamedTuple

import numpy as np

from nmlab.channels import channel_at, check_time, sample_unitaries
from nmlab.constants import TIE_TOL
from nmlab.numerics import dagger
from nmlab.serializer import Serializer
from nmlab.tomography import ENCODING_BASIS, build_mubs_d4
from nmlab.utils import debug_timer, make_rng

logger = logging.getLogger(__name__)

MIXTURE_TOL = 1e-9
RELABEL_TOL = 1e-9
EVOLUTION_MODES = ('exact_average', 'sampled')


class InvalidColorIndexError(ValueError):
    pass


class MissingRegisterError(LookupError):
    pass


class Color(enum.IntEnum):
    C = 0
    M = 1
    Y = 2
    K = 3


class VaultImage(Serializer):

    def __init__(self, indices=None, mixtures=None):
        """
        Image of color indices or of CMYK mixture weights.

        Parameters
        ----------
        indices: array_like
            shape (height, width), values in 0..3 (C, M, Y, K)
        mixtures: array_like
            shape (height, width, 4), nonnegative, summing to 1
        """
        if (indices is None) == (mixtures is None):
            raise ValueError('Give either color indices or mixtures')
        if indices is not None:
            indices = np.asarray(indices)
            if indices.ndim != 2 or indices.size == 0:
                raise ValueError('Color indices must be a non-empty 2D array')
            if not np.issubdtype(indices.dtype, np.integer) or \
                    (indices < 0).any() or (indices >= len(Color)).any():
                raise InvalidColorIndexError(
                    'Color indices must be integers in 0..{}'.format(
                        len(Color) - 1))
            indices = indices.astype(np.int64)
        else:
            mixtures = np.asarray(mixtures, dtype=float)
            if mixtures.ndim != 3 or mixtures.shape[2] != len(Color) or \
                    mixtures.size == 0:
                raise ValueError('Mixtures must have shape (h, w, 4)')
            if (mixtures < -MIXTURE_TOL).any() or \
                    np.max(np.abs(mixtures.sum(axis=2) - 1)) > MIXTURE_TOL:
                raise ValueError(
                    'Mixture weights must be nonnegative and sum to 1')
            mixtures = np.clip(mixtures, 0, None)
        self.indices = indices
        self.mixtures = mixtures

    @property
    def is_indexed(self):
        return self.indices is not None

    @property
    def shape(self):
        """ (height, width) """
        if self.is_indexed:
            return self.indices.shape
        return self.mixtures.shape[:2]

    @property
    def height(self):
        return self.shape[0]

    @property
    def width(self):
        return self.shape[1]

    def weights(self):
        """ Mixture weights, one-hot for indexed images """
        if self.is_indexed:
            return np.eye(len(Color))[self.indices]
        return self.mixtures

    def color_counts(self):
        return np.bincount(self.indices.reshape(-1), minlength=len(Color))


def balanced_image(width=32, height=32):
    """
    Diagonal stripes using all four colors equally often when the
    width is a multiple of 4.
    """
    y, x = np.mgrid[0:height, 0:width]
    return VaultImage(indices=((x * len(Color)) // width + y) % len(Color))


class ClassicalRegister(Serializer):

    def __init__(self, indices, schedule_key=''):
        """
        Index of the permutation applied to each pixel.

        Parameters
        ----------
        indices: array_like
            shape (height, width)
        schedule_key: str
        """
        self.indices = np.asarray(indices, dtype=np.int64)
        self.schedule_key = schedule_key


class EvolvedImage(NamedTuple):
    rhos: np.ndarray
    register: ClassicalRegister


class DecodeReport(Serializer):

    def __init__(self, decoded, mixtures, accuracy, tie_count,
                 mean_fidelity, t=None, scenario=''):
        """
        Result of reading out an image in the encoding basis.

        Parameters
        ----------
        decoded: VaultImage
            the color of largest weight per pixel
        mixtures: VaultImage
            the measured weights per pixel
        accuracy: float
            fraction of pixels decoding to the expected color
        tie_count: int
            pixels whose largest weight was not unique
        mean_fidelity: float
            mean overlap with the expected encoding state
        t: float
        scenario: str
        """
        self.decoded = decoded
        self.mixtures = mixtures
        self.accuracy = float(accuracy)
        self.tie_count = int(tie_count)
        self.mean_fidelity = float(mean_fidelity)
        self.t = t
        self.scenario = scenario

    def summary(self):
        return {
            'accuracy': self.accuracy,
            'tie_count': self.tie_count,
            'mean_fidelity': self.mean_fidelity,
            't': self.t,
            'scenario': self.scenario,
        }


def encoding_basis():
    """ Rows are the encoding states e1..e4 """
    return build_mubs_d4().bases[ENCODING_BASIS]


def encode_image(image):
    """
    Pure encoding states of all pixels.

    Parameters
    ----------
    image: VaultImage
        with color indices

    Returns
    -------
    out: numpy.ndarray
        amplitudes, shape (height, width, 4)

    Raises
    ------
    InvalidColorIndexError
        if the image holds mixtures
    """
    if not image.is_indexed:
        raise InvalidColorIndexError('Only color index images can be encoded')
    return encoding_basis()[image.indices]


def _projectors(states):
    return np.einsum('...i,...j->...ij', states, np.conj(states))


def _as_rhos(states):
    states = np.asarray(states, dtype=complex)
    if states.ndim == 3:
        return _projectors(states)
    return states


@debug_timer
def evolve_image(states, schedule, t, mode='exact_average', rng=None,
                 keep_register=True):
    """
    Send every pixel through the channel of `schedule` at time t.

    Parameters
    ----------
    states: numpy.ndarray
        pixel states, shape (h, w, 4)
    schedule: MapSchedule
    t: float
    mode: {'exact_average', 'sampled'}
        'exact_average' returns the averaged channel output,
        'sampled' applies one randomly drawn permutation per pixel
    rng: numpy.random.Generator or int
        only used in sampled mode
    keep_register: bool
        return the register of the sampled permutations

    Returns
    -------
    out: EvolvedImage
        density matrices of shape (h, w, 4, 4) and the register
        (None unless sampled with keep_register)

    Raises
    ------
    TimeOutOfRangeError
    """
    check_time(t)
    if mode not in EVOLUTION_MODES:
        raise ValueError('Unknown evolution mode "{}"'.format(mode))
    states = np.asarray(states, dtype=complex)
    channel = channel_at(schedule, t)

    if mode == 'exact_average':
        evolved = np.einsum('kij,yxj->kyxi', channel.unitaries, states)
        rhos = np.einsum('k,kyxi,kyxj->yxij', channel.probabilities,
                         evolved, np.conj(evolved))
        return EvolvedImage(rhos, None)

    rng = make_rng(rng)
    height, width = states.shape[:2]
    indices = sample_unitaries(channel, rng, height * width).reshape(
        height, width)
    unitaries = np.stack([u.matrix for u in schedule.permutations])
    evolved = np.einsum('yxij,yxj->yxi', unitaries[indices], states)
    register = ClassicalRegister(indices, schedule.key) \
        if keep_register else None
    return EvolvedImage(_projectors(evolved), register)


def measure_mixtures(rhos):
    """ Diagonal of each pixel state in the encoding basis """
    basis = encoding_basis()
    weights = np.real(np.einsum('ki,yxij,kj->yxk', np.conj(basis),
                                _as_rhos(rhos), basis))
    weights = np.clip(weights, 0, None)
    return weights / weights.sum(axis=2, keepdims=True)


def decode_image(rhos, reference, relabel=None, t=None, scenario=''):
    """
    Read out an image in the encoding basis.

    Parameters
    ----------
    rhos: numpy.ndarray
        pixel density matrices (h, w, 4, 4) or pure states (h, w, 4)
    reference: VaultImage
        the stored image
    relabel: sequence of int
        relabel[c] is the color expected for a stored color c
    t: float
    scenario: str

    Returns
    -------
    out: DecodeReport
        ties are resolved to the lowest color index and counted
    """
    weights = measure_mixtures(rhos)
    top = weights.max(axis=2, keepdims=True)
    candidates = weights >= top - TIE_TOL
    decoded = np.argmax(candidates, axis=2)
    tie_count = int(np.count_nonzero(candidates.sum(axis=2) > 1))

    expected = reference.indices
    if relabel is not None:
        expected = np.asarray(relabel)[expected]
    accuracy = np.mean(decoded == expected)
    fidelity = np.take_along_axis(weights, expected[..., None], axis=2)

    return DecodeReport(VaultImage(indices=decoded),
                        VaultImage(mixtures=weights),
                        accuracy, tie_count, fidelity.mean(),
                        t=t, scenario=scenario)


def _target_index(schedule, target):
    if target == 'identity':
        return 0
    if target == 'U3':
        return schedule.swap_index
    return int(target)


def compensate(rhos, register, schedule, target='identity'):
    """
    Undo the recorded permutations and apply `target` instead.

    Each pixel gets U_c = U_target U_i^dagger, so that the complete
    evolution of every pixel is U_target.

    Parameters
    ----------
    rhos: numpy.ndarray
        pixel states after sampled evolution
    register: ClassicalRegister
    schedule: MapSchedule
    target: {'identity', 'U3'} or int
        index of the target permutation

    Returns
    -------
    out: numpy.ndarray
        pixel density matrices (h, w, 4, 4)

    Raises
    ------
    MissingRegisterError
    """
    if register is None:
        raise MissingRegisterError(
            'Compensation needs the classical register of the evolution')
    unitaries = np.stack([u.matrix for u in schedule.permutations])
    target_unitary = unitaries[_target_index(schedule, target)]
    correction = target_unitary @ dagger(unitaries[register.indices])
    rhos = _as_rhos(rhos)
    return correction @ rhos @ dagger(correction)


def relabel_for(unitary):
    """
    Color relabeling induced by a unitary mapping the encoding states
    onto each other up to phases.

    Parameters
    ----------
    unitary: PermutationUnitary or array_like

    Returns
    -------
    out: tuple of int or None
        out[c] is the color of U e_c, None if some U e_c is not an
        encoding state
    """
    matrix = getattr(unitary, 'matrix', unitary)
    basis = encoding_basis()
    mapped = basis @ np.asarray(matrix).T
    overlaps = np.abs(np.conj(basis) @ mapped.T) ** 2
    relabel = []
    for c in range(len(Color)):
        j = int(np.argmax(overlaps[:, c]))
        if abs(overlaps[j, c] - 1) > RELABEL_TOL:
            return None
        relabel.append(j)
    return tuple(relabel)


def output_relabel(schedule, t=1.0):
    """ Relabeling of the image at t if the channel is a single unitary """
    channel = channel_at(schedule, t)
    if len(channel.elements) != 1:
        return None
    return relabel_for(channel.elements[0].unitary)


@debug_timer
def compare_scenarios(image, schedules, mode='exact_average', rng=None):
    """
    Decode the image at t=0, at the capacity minimum and at t=1 for
    several schedules.

    Returns
    -------
    out: dict
        schedule key -> {'input', 'minimum', 'output'} -> DecodeReport
    """
    rng = make_rng(rng)
    states = encode_image(image)
    comparison = {}
    for schedule in schedules:
        stages = {}
        for stage, t in (('input', 0.0), ('minimum', schedule.t_min),
                         ('output', 1.0)):
            evolved = evolve_image(states, schedule, t, mode=mode, rng=rng)
            relabel = output_relabel(schedule, t) if stage == 'output' \
                else None
            stages[stage] = decode_image(evolved.rhos, image, relabel,
                                         t=t, scenario=schedule.key)
        comparison[schedule.key] = stages
    return comparison


class ReadabilityCurve(Serializer):

    def __init__(self, t_grid, accuracy, mean_fidelity, tie_count,
                 scenario=''):
        self.t_grid = np.asarray(t_grid, dtype=float)
        self.accuracy = np.asarray(accuracy, dtype=float)
        self.mean_fidelity = np.asarray(mean_fidelity, dtype=float)
        self.tie_count = np.asarray(tie_count, dtype=np.int64)
        self.scenario = scenario


@debug_timer
def readability_curve(image, schedule, grid):
    """
    Accuracy and mean fidelity of the averaged image along a t grid.
    """
    states = encode_image(image)
    reports = [decode_image(evolve_image(states, schedule, t).rhos, image,
                            t=t, scenario=schedule.key)
               for t in grid]
    return ReadabilityCurve(grid,
                            [r.accuracy for r in reports],
                            [r.mean_fidelity for r in reports],
                            [r.tie_count for r in reports],
                            scenario=schedule.key)
