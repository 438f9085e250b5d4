import logging

import numpy as np

from nmlab import Session
from nmlab.capacities import ensemble_envelope, rec, sweep
from nmlab.channels import Divisibility, apply, channel_at, \
    divisibility_table, is_non_markovian
from nmlab.export import CapacityExport, DivisibilityExport, \
    ManifestExport, TomographyExport, VaultExport
from nmlab.file import read_density_matrix
from nmlab.image import read_ppm
from nmlab.models.schedule import get_schedule
from nmlab.states import DensityMatrix, PureState, fidelity, \
    maximally_coherent
from nmlab.tomography import build_mubs_d4, mle_reconstruct, \
    monte_carlo_errors, simulate_counts
from nmlab.utils import make_rng
from nmlab.vault import balanced_image, compare_scenarios, compensate, \
    decode_image, encode_image, encoding_basis, evolve_image, \
    output_relabel, readability_curve, relabel_for

logger = logging.getLogger(__name__)

# Scenarios of the vault comparison
COMPARE_SCENARIOS = ('simplified', 'uniform', 's4')


class NonConvergenceError(ArithmeticError):
    pass


class IndeterminateGridError(ArithmeticError):
    pass


def load_input(descriptor):
    """
    Input state of a run.

    Parameters
    ----------
    descriptor: str
        'e1'..'e4' (encoding states), 'chaotic' (maximally mixed),
        'coherent' (equal amplitudes) or the path of a density matrix
        CSV file

    Returns
    -------
    out: DensityMatrix
    """
    if descriptor in ('e1', 'e2', 'e3', 'e4'):
        index = int(descriptor[1]) - 1
        return PureState(encoding_basis()[index]).projector()
    if descriptor == 'chaotic':
        return DensityMatrix.maximally_mixed(4)
    if descriptor == 'coherent':
        return maximally_coherent(np.zeros(3)).projector()
    return read_density_matrix(descriptor)


class CapacityController(object):

    def __init__(self):
        self.session = Session.get_instance()

    def evaluate(self):
        config = self.session.config
        schedule = config.schedule()
        rho = load_input(config.input)
        grid = config.t_grid()

        curves = {}
        for kind in config.kinds():
            curves[kind.value] = sweep(schedule, rho, kind, grid,
                                       input_descriptor=config.input)
            logger.info('%s: minimum %.6g bits at t = %.6g' % (
                kind.value, curves[kind.value].values.min(),
                curves[kind.value].argmin()))
        self.session.set_result('capacities', curves)

        if config.envelope > 0:
            rng = config.rng()
            envelopes = {}
            for kind in config.kinds():
                envelopes[kind.value] = ensemble_envelope(
                    schedule, config.envelope, kind, rng, grid,
                    processes=config.processes)
            self.session.set_result('envelopes', envelopes)
        return curves


class VaultController(object):

    def __init__(self):
        self.session = Session.get_instance()

    def load_image(self):
        config = self.session.config
        if config.image is None:
            return balanced_image()
        return read_ppm(config.image)

    def evaluate(self):
        """
        Store the image, let it evolve and read it out at t=0, at the
        capacity minimum and at t=1.

        With a classical register (sampled mode) the output stage takes
        the image hidden at the minimum and compensates every pixel to
        the block exchange, which permutes the colors.
        Without it the output can only be read if the channel at t=1
        is a single unitary.
        """
        config = self.session.config
        schedule = config.schedule()
        rng = config.rng()
        image = self.load_image()
        states = encode_image(image)
        keep_register = config.mode == 'sampled' \
            and not config.forget_register

        target = schedule.swap_index
        target_relabel = relabel_for(schedule.permutations[target])
        if target_relabel is None:
            target = 0
            target_relabel = relabel_for(schedule.permutations[0])

        reports = {}
        hidden = None
        for stage, t in (('input', 0.0), ('minimum', schedule.t_min),
                         ('output', 1.0)):
            relabel = None
            if stage == 'output' and hidden is not None:
                # Second unitary on top of the hidden image, so that the
                # whole evolution of every pixel is the target
                rhos = compensate(hidden.rhos, hidden.register, schedule,
                                  target=target)
                relabel = target_relabel
            else:
                evolved = evolve_image(states, schedule, t, mode=config.mode,
                                       rng=rng, keep_register=keep_register)
                rhos = evolved.rhos
                if stage == 'minimum' and evolved.register is not None:
                    hidden = evolved
                    self.session.set_result('vault_register',
                                            evolved.register)
                if stage == 'output':
                    relabel = output_relabel(schedule, t)
            reports[stage] = decode_image(rhos, image, relabel, t=t,
                                          scenario=schedule.key)
            logger.info('%s stage (t = %.6g): accuracy %.6g' % (
                stage, t, reports[stage].accuracy))

        self.session.set_result('vault_image', image)
        self.session.set_result('vault', reports)
        self.session.set_result(
            'readability',
            readability_curve(image, schedule, config.t_grid()))
        if config.compare:
            self.session.set_result('vault_compare', compare_scenarios(
                image, [get_schedule(key) for key in COMPARE_SCENARIOS],
                mode=config.mode, rng=rng))
        return reports


class TomographyController(object):

    def __init__(self):
        self.session = Session.get_instance()

    def evaluate(self):
        """
        Simulate the measurement of the evolved input state in all
        mutually unbiased bases and reconstruct it.

        The time defaults to t=0 if the configuration has none.
        """
        config = self.session.config
        schedule = config.schedule()
        t = 0.0 if config.t is None else config.t
        truth = apply(channel_at(schedule, t), load_input(config.input))
        mubs = build_mubs_d4()
        rng = config.rng()

        counts = simulate_counts(truth, mubs, config.shots, rng,
                                 noise_mode=config.noise_mode)
        mle = mle_reconstruct(counts, mubs, max_iters=config.max_iters)

        statistics = {'rec': {'value': rec(mle.rho),
                              'truth': rec(truth)}}
        if config.reps > 0:
            mean, std = monte_carlo_errors(
                counts, mubs, reps=config.reps, rng=rng, statistic=rec,
                processes=config.processes, max_iters=config.max_iters)
            statistics['rec']['mc_mean'] = mean
            statistics['rec']['mc_std'] = std

        result = {
            'input': config.input,
            't': t,
            'truth': truth,
            'counts': counts,
            'mle': mle,
            'fidelity': fidelity(truth, mle.rho),
            'statistics': statistics,
        }
        self.session.set_result('tomography', result)
        return result

    @staticmethod
    def fidelity_benchmark(states, seeds, shots_per_basis=40000,
                           noise_mode='multinomial', max_iters=10 ** 4):
        """
        Fidelities of the reconstructions of `states`, each measured
        once per seed.

        Returns
        -------
        out: numpy.ndarray
            shape (len(seeds), len(states))
        """
        mubs = build_mubs_d4()
        fidelities = np.zeros((len(seeds), len(states)))
        for i, seed in enumerate(seeds):
            rng = make_rng(seed)
            for j, rho in enumerate(states):
                counts = simulate_counts(rho, mubs, shots_per_basis, rng,
                                         noise_mode=noise_mode)
                result = mle_reconstruct(counts, mubs, max_iters=max_iters)
                fidelities[i, j] = fidelity(rho, result.rho)
        return fidelities


class DivisibilityController(object):

    def __init__(self):
        self.session = Session.get_instance()

    def evaluate(self):
        config = self.session.config
        table = divisibility_table(config.schedule(), config.t_grid())
        self.session.set_result('divisibility', table)
        logger.info('%d pairs, non-Markovian: %s' % (
            len(table), is_non_markovian(table)))
        return table


class ExportController(object):

    def __init__(self):
        self.session = Session.get_instance()

    @staticmethod
    def get_configuration():
        return {
            'capacities': {
                'export': True,
                'envelopes': True,
            },
            'vault': {
                'export': True,
                'images': True,
                'mixtures': True,
                'readability': True,
            },
            'tomography': {
                'export': True,
                'counts': True,
            },
            'divisibility': {
                'export': True,
            },
        }

    def export(self, configuration=None):
        if not configuration:
            configuration = self.get_configuration()

        CapacityExport().export(configuration)
        VaultExport().export(configuration)
        TomographyExport().export(configuration)
        DivisibilityExport().export(configuration)

        path = self.session.save()
        self.session.add_output(path, 'h5', 'Run archive')
        ManifestExport().export()


class Controller(object):

    EVALUATORS = {
        'capacities': CapacityController,
        'vault': VaultController,
        'tomography': TomographyController,
        'divisibility': DivisibilityController,
    }

    def __init__(self):
        self.session = Session.get_instance()

    def run(self, config):
        """
        Evaluate and export one command.

        All outputs are written before a numerical failure is raised.

        Raises
        ------
        NonConvergenceError
            if the likelihood maximization did not converge
        IndeterminateGridError
            if no intermediate map of the grid could be classified
        """
        self.session.clear()
        self.session.set_config(config)

        self.EVALUATORS[config.command]().evaluate()
        ExportController().export()

        tomography = self.session.get_result('tomography')
        if tomography is not None and not tomography['mle'].converged:
            raise NonConvergenceError(
                'The reconstruction did not converge within {} '
                'iterations'.format(config.max_iters))
        table = self.session.get_result('divisibility')
        if table and all(entry.verdict is Divisibility.INDETERMINATE
                         for entry in table):
            raise IndeterminateGridError(
                'All {} intermediate maps are indeterminate'.format(
                    len(table)))
        return self.session

