import numpy as np
import pytest

from nmlab.models.schedule import AVAILABLE_SCHEDULES, available_keys, \
    get_schedule


def test_available_keys():
    assert available_keys() == ['uniform', 'simplified', 's3', 's4', 's1',
                                'custom']
    assert len({s.key for s in AVAILABLE_SCHEDULES}) == \
        len(AVAILABLE_SCHEDULES)


@pytest.mark.parametrize('key, count, t_min', [
    ('uniform', 4, 0.75),
    ('simplified', 4, 0.5),
    ('s3', 6, 5 / 6),
    ('s4', 24, 23 / 24),
    ('s1', 1, 0.0),
])
def test_presets(key, count, t_min):
    schedule = get_schedule(key)
    assert schedule.key == key
    assert schedule.dim == 4
    assert len(schedule.permutations) == count
    assert schedule.t_min == pytest.approx(t_min)
    for t in (0, 0.3, 1):
        assert schedule.probabilities(t).sum() == pytest.approx(1)


def test_custom_schedule():
    schedule = get_schedule('custom', [0, 0, 2])
    np.testing.assert_allclose(schedule.probabilities(0.4),
                               [0.6, 0, 0, 0.4])
    assert schedule.t_min == 0.5

    with pytest.raises(ValueError):
        get_schedule('custom')
    with pytest.raises(ValueError):
        get_schedule('custom', [1, 1])
    with pytest.raises(ValueError):
        get_schedule('custom', [0, 0, 0])
    with pytest.raises(ValueError):
        get_schedule('custom', [1, -1, 1])


def test_unknown_schedule():
    with pytest.raises(ValueError):
        get_schedule('s5')
