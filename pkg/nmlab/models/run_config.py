import numpy as np

from nmlab._version import version
from nmlab.capacities import CapacityKind, default_grid
from nmlab.channels import check_time
from nmlab.constants import DEFAULT_GRID_POINTS
from nmlab.models.schedule import available_keys, get_schedule
from nmlab.serializer import Serializer
from nmlab.tomography import NOISE_MODES
from nmlab.utils import default_seed
from nmlab.vault import EVOLUTION_MODES

COMMANDS = ('capacities', 'vault', 'tomography', 'divisibility')
INPUT_PRESETS = ('e1', 'e2', 'e3', 'e4', 'chaotic', 'coherent')
KIND_ALL = 'all'


class RunConfig(Serializer):

    def __init__(self, command, scenario='uniform', weights=None, t=None,
                 grid=DEFAULT_GRID_POINTS, seed=None, shots=40000,
                 reps=1000, kind='qmi', input='e2', image=None,
                 output='.', mode='sampled', noise_mode='multinomial',
                 forget_register=False, compare=False, envelope=0,
                 max_iters=10 ** 4, processes=1):
        """
        Everything a single nmlab run depends on.

        Parameters
        ----------
        command: str
            one of 'capacities', 'vault', 'tomography', 'divisibility'
        scenario: str
            key of a preset schedule or 'custom'
        weights: list of float
            weights of the custom scenario
        t: float
            time of the tomography run
        grid: int
            number of grid points in [0, 1]
        seed: int
            master seed, read from NMLAB_SEED (default 42) if None
        shots: int
            shots per basis
        reps: int
            Monte-Carlo repetitions
        kind: str
            capacity kind or 'all'
        input: str
            preset state name or path of a density matrix CSV file
        image: str
            path of a PPM image for the vault
        output: str
            output directory
        mode: str
            evolution mode of the vault
        noise_mode: str
            count sampler of the tomography
        forget_register: bool
            discard the classical register of the vault
        compare: bool
            also compare the vault under several scenarios
        envelope: int
            number of ensemble samples for capacity envelopes (0: none)
        max_iters: int
            iteration limit of the likelihood maximization
        processes: int
            worker processes for envelopes and error bars
        """
        self.command = command
        self.scenario = scenario
        self.weights = list(weights) if weights is not None else None
        self.t = t
        self.grid = grid
        self.seed = default_seed() if seed is None else int(seed)
        self.shots = shots
        self.reps = reps
        self.kind = kind
        self.input = input
        self.image = image
        self.output = str(output)
        self.mode = mode
        self.noise_mode = noise_mode
        self.forget_register = forget_register
        self.compare = compare
        self.envelope = envelope
        self.max_iters = max_iters
        self.processes = processes

    def validate(self):
        """
        Raises
        ------
        ValueError
            describing the first invalid setting
        """
        if self.command not in COMMANDS:
            raise ValueError('Unknown command "{}"'.format(self.command))
        if self.scenario not in available_keys():
            raise ValueError('Unknown scenario "{}"'.format(self.scenario))
        if self.weights is not None and self.scenario != 'custom':
            raise ValueError('--weights requires --scenario custom')
        # Builds the schedule, which checks the custom weights
        self.schedule()
        if self.t is not None:
            check_time(self.t)
        if self.grid < 1:
            raise ValueError('The grid needs at least one point')
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError('The seed must be a 64 bit unsigned integer')
        if self.shots < 1:
            raise ValueError('shots must be positive')
        if self.command == 'tomography' and self.reps != 0 \
                and self.reps < 2:
            raise ValueError('reps must be 0 or at least 2')
        if self.kind != KIND_ALL:
            CapacityKind(self.kind)
        if self.mode not in EVOLUTION_MODES:
            raise ValueError('Unknown evolution mode "{}"'.format(self.mode))
        if self.noise_mode not in NOISE_MODES:
            raise ValueError('Unknown noise mode "{}"'.format(
                self.noise_mode))
        if self.envelope < 0:
            raise ValueError('envelope must not be negative')
        if self.max_iters < 1:
            raise ValueError('max_iters must be positive')
        if self.processes < 1:
            raise ValueError('processes must be positive')

    def schedule(self):
        return get_schedule(self.scenario, self.weights)

    def t_grid(self):
        return default_grid(self.grid)

    def kinds(self):
        if self.kind == KIND_ALL:
            return list(CapacityKind)
        return [CapacityKind(self.kind)]

    def rng(self):
        return np.random.default_rng(self.seed)

    def metadata(self):
        """ Settings written to the header of every output file """
        metadata = {
            'nmlab_version': version,
            'command': self.command,
            'scenario': self.scenario,
            'seed': self.seed,
            'grid': self.grid,
        }
        if self.weights is not None:
            metadata['weights'] = ','.join(
                '{:.12g}'.format(w) for w in self.weights)
        return metadata
