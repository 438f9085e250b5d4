import numpy as np
import pytest

from nmlab.capacities import CapacityKind
from nmlab.models.run_config import RunConfig


def test_defaults(monkeypatch):
    monkeypatch.delenv('NMLAB_SEED', raising=False)
    config = RunConfig('capacities')
    config.validate()
    assert config.seed == 42
    assert config.grid == 101
    assert config.shots == 40000
    assert config.reps == 1000
    assert config.input == 'e2'
    assert config.kinds() == [CapacityKind.QMI]
    assert config.schedule().key == 'uniform'
    np.testing.assert_allclose(config.t_grid()[[0, 50, 100]], [0, 0.5, 1])


def test_seed(monkeypatch):
    monkeypatch.setenv('NMLAB_SEED', '7')
    assert RunConfig('vault').seed == 7
    assert RunConfig('vault', seed=3).seed == 3

    a = RunConfig('vault', seed=3).rng().random(3)
    b = RunConfig('vault', seed=3).rng().random(3)
    np.testing.assert_array_equal(a, b)

    monkeypatch.setenv('NMLAB_SEED', 'seven')
    with pytest.raises(ValueError):
        RunConfig('vault')


def test_all_kinds():
    config = RunConfig('capacities', kind='all')
    config.validate()
    assert config.kinds() == list(CapacityKind)


@pytest.mark.parametrize('kwargs', [
    {'command': 'plot'},
    {'command': 'capacities', 'scenario': 'unknown'},
    {'command': 'capacities', 'scenario': 'custom'},
    {'command': 'capacities', 'weights': [0, 0, 1]},
    {'command': 'tomography', 't': -0.1},
    {'command': 'tomography', 'reps': 1},
    {'command': 'capacities', 'grid': 0},
    {'command': 'capacities', 'seed': -1},
    {'command': 'tomography', 'shots': 0},
    {'command': 'capacities', 'kind': 'holevo'},
    {'command': 'vault', 'mode': 'quantum'},
    {'command': 'tomography', 'noise_mode': 'gaussian'},
    {'command': 'capacities', 'envelope': -1},
    {'command': 'tomography', 'max_iters': 0},
    {'command': 'capacities', 'processes': 0},
])
def test_validate(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs).validate()


def test_metadata():
    config = RunConfig('capacities', scenario='custom', weights=[0, 0.5, 1],
                       seed=1, grid=11)
    config.validate()
    metadata = config.metadata()
    assert metadata['scenario'] == 'custom'
    assert metadata['weights'] == '0,0.5,1'
    assert metadata['seed'] == 1
    assert metadata['grid'] == 11
    assert 'nmlab_version' in metadata
