import os
import time
from functools import wraps
import logging

import numpy as np

from nmlab.constants import DEFAULT_SEED, SEED_ENV_VAR

logger = logging.getLogger(__name__)


def debug_timer(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.time()
        result = func(*args, **kwargs)
        end = time.time()
        logger.debug('%s needed: %f s' % (func.__name__, end - start))
        return result
    return wrapper


def default_seed():
    """
    Returns the seed used when none is given explicitly.

    The environment variable NMLAB_SEED overrides the built-in default.
    """
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or value.strip() == '':
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise ValueError(
            '{} must be an integer, got "{}"'.format(SEED_ENV_VAR, value))


def make_rng(seed=None):
    """ Returns a numpy Generator for the given (or default) seed """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = default_seed()
    return np.random.default_rng(seed)


def spawn_seeds(rng, count):
    """
    Derive `count` independent seed sequences from a generator.

    The children only depend on the state of `rng`, so work that is
    distributed over them gives the same result in any order.

    Parameters
    ----------
    rng: numpy.random.Generator
        Master generator, advanced by one draw.
    count: int
        Number of child seed sequences.

    Returns
    -------
    out: list of numpy.random.SeedSequence
    """
    entropy = int(rng.integers(0, 2 ** 63 - 1))
    return np.random.SeedSequence(entropy).spawn(count)
