"""
Command line interface of nmlab.

Every subcommand writes its CSV/JSON/PPM files, the run archive and a
manifest to the output directory. Exit codes: 0 on success, 1 on a
numerical failure, 2 on usage, configuration or file errors.
"""
import argparse
import logging
from pathlib import Path

import numpy as np

from nmlab._version import version
from nmlab.capacities import CapacityKind
from nmlab.constants import DEFAULT_GRID_POINTS
from nmlab.controllers import Controller
from nmlab.models.run_config import KIND_ALL, RunConfig
from nmlab.models.schedule import available_keys
from nmlab.tomography import NOISE_MODES
from nmlab.vault import EVOLUTION_MODES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def parse_weights(text):
    """ Comma separated list of floats """
    try:
        return [float(w) for w in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'weights must be comma separated numbers, got "{}"'.format(text))


def create_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', default='uniform',
                        choices=available_keys(),
                        help='permutation schedule (default: uniform)')
    common.add_argument('--weights', type=parse_weights, default=None,
                        help='weights of the non-identity permutations '
                             'for --scenario custom, e.g. 0,0,1')
    common.add_argument('--grid', type=int, default=DEFAULT_GRID_POINTS,
                        help='number of t values in [0, 1]')
    common.add_argument('--seed', type=int, default=None,
                        help='master seed (default: $NMLAB_SEED or 42)')
    common.add_argument('--output', default='.',
                        help='run directory for all outputs')
    common.add_argument('--processes', type=int, default=1,
                        help='worker processes for ensembles')

    parser = argparse.ArgumentParser(
        prog='nmlab',
        description='Capacities, vault and tomography of qudits under '
                    'non-Markovian permutation noise.')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for info, -vv for debug messages')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + version)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    capacities = subparsers.add_parser(
        'capacities', parents=[common],
        help='capacity curves along t')
    capacities.add_argument(
        '--kind', default='qmi',
        choices=[kind.value for kind in CapacityKind] + [KIND_ALL])
    capacities.add_argument(
        '--input', default='e2',
        help='e1..e4, chaotic, coherent or a density matrix CSV file')
    capacities.add_argument(
        '--envelope', type=int, default=0, metavar='N',
        help='also write envelopes over N random input states')

    vault = subparsers.add_parser(
        'vault', parents=[common],
        help='store, evolve and read out an image')
    vault.add_argument('--image', default=None,
                       help='plain PPM image (default: 32x32 test image)')
    vault.add_argument('--mode', default='sampled', choices=EVOLUTION_MODES)
    vault.add_argument('--forget-register', action='store_true',
                       help='discard the record of the applied permutations')
    vault.add_argument('--compare', action='store_true',
                       help='also compare the simplified, uniform and s4 '
                            'scenarios')

    tomography = subparsers.add_parser(
        'tomography', parents=[common],
        help='simulated state tomography with error bars')
    tomography.add_argument(
        '--input', '--state', dest='input', default='e2',
        help='e1..e4, chaotic, coherent or a density matrix CSV file')
    tomography.add_argument('--t', type=float, default=None,
                            help='time of the measurement (default: 0)')
    tomography.add_argument('--shots', type=int, default=40000,
                            help='shots per basis')
    tomography.add_argument('--reps', type=int, default=1000,
                            help='Monte-Carlo repetitions, 0 to skip')
    tomography.add_argument('--noise-mode', default='multinomial',
                            choices=NOISE_MODES)
    tomography.add_argument('--max-iters', type=int, default=10 ** 4)

    subparsers.add_parser(
        'divisibility', parents=[common],
        help='CP-divisibility of the intermediate maps')
    return parser


def configure_logging(verbosity):
    level = LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)]
    logging.basicConfig(
        level=level, format='%(levelname)s %(name)s: %(message)s')


def build_config(args):
    """
    Raises
    ------
    ValueError
        for invalid settings
    """
    options = {key: value for key, value in vars(args).items()
               if key not in ('verbose', 'command')}
    config = RunConfig(args.command, **options)
    config.validate()
    return config


def main(argv=None):
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    configure_logging(args.verbose)
    try:
        config = build_config(args)
        Path(config.output).mkdir(parents=True, exist_ok=True)
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_USAGE

    try:
        Controller().run(config)
    except (ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(str(e))
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    raise SystemExit(main())
