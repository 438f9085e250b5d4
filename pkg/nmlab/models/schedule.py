from nmlab.channels import MapSchedule


def get_schedule(key, weights=None):
    """
    Returns the preset schedule with the given key, or a custom
    N=4, s=2 schedule built from `weights` for key 'custom'.
    """
    if key == 'custom':
        return MapSchedule(N=4, s=2, scenario='custom',
                           custom_weights=weights,
                           key='custom',
                           name='N=4, s=2, custom weights')
    for schedule in AVAILABLE_SCHEDULES:
        if schedule.key == key:
            return schedule
    raise ValueError('Unknown scenario "{}", available: {}'.format(
        key, ', '.join(available_keys())))


def available_keys():
    return [schedule.key for schedule in AVAILABLE_SCHEDULES] + ['custom']


AVAILABLE_SCHEDULES = [
    MapSchedule(N=4, s=2,
                scenario='uniform',
                key='uniform',
                name='N=4, s=2, equally probable permutations'),
    MapSchedule(N=4, s=2,
                scenario='simplified',
                key='simplified',
                name='N=4, s=2, only the block exchange U3'),
    MapSchedule(N=4, s=3,
                scenario='uniform',
                key='s3',
                name='N=4, s=3, equally probable permutations'),
    MapSchedule(N=4, s=4,
                scenario='uniform',
                key='s4',
                name='N=4, s=4, equally probable permutations'),
    MapSchedule(N=4, s=1,
                scenario='uniform',
                key='s1',
                name='N=4, s=1, no reordering'),
]
