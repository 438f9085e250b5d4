import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import block_diag

from nmlab.channels import enumerate_permutations, permutation_count, \
    p_min, MapSchedule, KrausChannel, PermutationUnitary, channel_at, \
    apply, superoperator, choi_matrix, intermediate_map, \
    divisibility_table, is_non_markovian, sample_unitary, \
    sample_unitaries, Divisibility, InvalidSubsetSizeError, \
    TimeOutOfRangeError
from nmlab.models.schedule import get_schedule
from nmlab.numerics import hermitian_eig, unvec, vec, DimensionMismatchError
from nmlab.states import DensityMatrix, sample_random_mixed

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])


def test_permutation_counts():
    assert [len(enumerate_permutations(4, s)) for s in (1, 2, 3, 4)] == \
        [1, 4, 6, 24]
    assert [permutation_count(4, s) for s in (1, 2, 3, 4)] == [1, 4, 6, 24]
    with pytest.raises(InvalidSubsetSizeError):
        enumerate_permutations(4, 5)
    with pytest.raises(InvalidSubsetSizeError):
        enumerate_permutations(4, 0)


def test_block_permutations_of_four_cores():
    unitaries = enumerate_permutations(4, 2)
    assert [u.perm for u in unitaries] == \
        [(0, 1, 2, 3), (0, 1, 3, 2), (1, 0, 2, 3), (1, 0, 3, 2)]
    assert [u.index for u in unitaries] == [0, 1, 2, 3]
    np.testing.assert_array_equal(unitaries[0].matrix, np.eye(4))
    np.testing.assert_array_equal(unitaries[1].matrix, block_diag(I2, X))
    np.testing.assert_array_equal(unitaries[2].matrix, block_diag(X, I2))
    np.testing.assert_array_equal(unitaries[3].matrix, np.kron(I2, X))


def test_block_permutations_form_klein_group():
    unitaries = enumerate_permutations(4, 2)
    matrices = [u.matrix for u in unitaries]
    for a, b in itertools.product(matrices, repeat=2):
        product = a @ b
        assert any(np.array_equal(product, m) for m in matrices)
    for m in matrices:
        np.testing.assert_array_equal(m @ m, np.eye(4))


def test_permutations_are_lexicographic_and_unique():
    for s in (1, 2, 3, 4):
        perms = [u.perm for u in enumerate_permutations(4, s)]
        assert perms == sorted(set(perms))
        assert perms[0] == (0, 1, 2, 3)


def test_permutation_unitary():
    u = PermutationUnitary((1, 2, 0))
    assert u.matrix[1, 0] == 1
    assert u.dim == 3
    assert u == PermutationUnitary([1, 2, 0], index=5)
    with pytest.raises(ValueError):
        PermutationUnitary((0, 0, 1))


def test_p_min():
    assert p_min(4, 2) == 0.25
    assert get_schedule('uniform').p_min == 0.25
    assert get_schedule('simplified').p_min == 0.5
    assert get_schedule('uniform').t_min == 0.75
    assert get_schedule('simplified').t_min == 0.5
    assert get_schedule('s4').t_min == pytest.approx(23 / 24)
    assert get_schedule('s1').p_min == 1.0


def test_schedule_probabilities():
    uniform = get_schedule('uniform')
    np.testing.assert_allclose(uniform.probabilities(0.75), [0.25] * 4)
    np.testing.assert_allclose(uniform.probabilities(0), [1, 0, 0, 0])
    simplified = get_schedule('simplified')
    np.testing.assert_allclose(simplified.probabilities(0.3),
                               [0.7, 0, 0, 0.3])
    np.testing.assert_allclose(get_schedule('s1').probabilities(0.4), [1])
    custom = MapSchedule(scenario='custom', custom_weights=[1, 1, 2])
    np.testing.assert_allclose(custom.probabilities(1),
                               [0, 0.25, 0.25, 0.5])
    assert custom.active_count == 4
    for t in np.linspace(0, 1, 11):
        assert uniform.probabilities(t).sum() == pytest.approx(1, abs=1e-12)


def test_schedule_errors():
    with pytest.raises(TimeOutOfRangeError):
        get_schedule('uniform').probabilities(1.5)
    with pytest.raises(TimeOutOfRangeError):
        get_schedule('uniform').probabilities(-0.1)
    with pytest.raises(ValueError):
        MapSchedule(scenario='custom')
    with pytest.raises(ValueError):
        MapSchedule(scenario='custom', custom_weights=[1, 1])
    with pytest.raises(ValueError):
        MapSchedule(scenario='custom', custom_weights=[0, 0, 0])
    with pytest.raises(ValueError):
        MapSchedule(N=4, s=3, scenario='simplified')
    with pytest.raises(ValueError):
        MapSchedule(scenario='unknown')


def test_channel_drops_zero_probabilities():
    channel = channel_at(get_schedule('simplified'), 0.5)
    assert len(channel.elements) == 2
    assert channel.indices == [0, 3]
    with pytest.raises(ValueError):
        KrausChannel([(0.5, enumerate_permutations(4, 2)[0])])
    with pytest.raises(DimensionMismatchError):
        KrausChannel([(0.5, PermutationUnitary(range(2))),
                      (0.5, PermutationUnitary(range(4)))])


def test_apply_at_zero_is_identity():
    rng = np.random.default_rng(2)
    rho = sample_random_mixed(4, rng)
    out = apply(channel_at(get_schedule('uniform'), 0.0), rho)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)
    with pytest.raises(DimensionMismatchError):
        apply(channel_at(get_schedule('uniform'), 0.0),
              DensityMatrix.maximally_mixed(2))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1),
       t=st.floats(0, 1),
       key=st.sampled_from(['uniform', 'simplified', 's3', 's4', 's1']))
def test_apply_preserves_trace_and_positivity(seed, t, key):
    rho = sample_random_mixed(4, np.random.default_rng(seed))
    out = apply(channel_at(get_schedule(key), t), rho)
    assert np.trace(out.matrix).real == pytest.approx(1, abs=1e-12)
    assert hermitian_eig(out.matrix).eigenvalues[-1] >= -1e-9


def test_superoperator_acts_on_vec():
    rng = np.random.default_rng(4)
    rho = sample_random_mixed(4, rng)
    channel = channel_at(get_schedule('uniform'), 0.4)
    np.testing.assert_allclose(unvec(superoperator(channel) @ vec(rho.matrix)),
                               apply(channel, rho).matrix, atol=1e-12)


def test_choi_matrix_is_positive():
    for key in ('uniform', 'simplified', 's3'):
        for t in (0.0, 0.3, 0.75, 1.0):
            choi = choi_matrix(channel_at(get_schedule(key), t))
            assert np.trace(choi).real == pytest.approx(4)
            assert hermitian_eig(choi).eigenvalues[-1] >= -1e-9


def test_intermediate_map_simplified():
    simplified = get_schedule('simplified')
    # eigenvalue ratio (1 - 2t)/(1 - 2s) = 4 outside [-1, 1]
    result = intermediate_map(simplified, 0.6, 0.9)
    assert result.verdict is Divisibility.NOT_CP
    assert result.min_choi_eigenvalue == pytest.approx(-6, abs=1e-9)

    assert intermediate_map(simplified, 0.2, 0.4).verdict is Divisibility.CP
    assert intermediate_map(simplified, 0.5, 0.9).verdict is \
        Divisibility.INDETERMINATE
    with pytest.raises(TimeOutOfRangeError):
        intermediate_map(simplified, 0.5, 0.5)


def test_intermediate_map_from_zero_is_the_channel():
    uniform = get_schedule('uniform')
    result = intermediate_map(uniform, 0.0, 0.6)
    assert result.verdict is Divisibility.CP
    np.testing.assert_allclose(result.superoperator,
                               superoperator(channel_at(uniform, 0.6)),
                               atol=1e-12)


def test_divisibility_table():
    grid = np.linspace(0, 1, 11)
    table = divisibility_table(get_schedule('simplified'), grid)
    assert len(table) == 55
    assert is_non_markovian(table)
    assert any(entry.verdict is Divisibility.NOT_CP and
               0.5 < entry.s_time and entry.t_time <= 1
               for entry in table)
    for entry in table:
        if entry.s_time == 0:
            assert entry.verdict is Divisibility.CP
            assert entry.min_choi_eigenvalue >= -1e-9

    trivial = divisibility_table(get_schedule('s1'), grid)
    assert not is_non_markovian(trivial)
    assert all(entry.verdict is Divisibility.CP for entry in trivial)


def test_sample_unitaries():
    rng = np.random.default_rng(0)
    assert sample_unitary(channel_at(get_schedule('uniform'), 0), rng) == 0
    indices = sample_unitaries(channel_at(get_schedule('simplified'), 0.5),
                               rng, 2000)
    assert set(indices) == {0, 3}
    assert np.mean(indices == 3) == pytest.approx(0.5, abs=0.05)


@pytest.mark.parametrize('key, t', [('uniform', 0.5), ('simplified', 0.3),
                                    ('s3', 0.8)])
def test_sampled_unitaries_average_to_channel(key, t):
    schedule = get_schedule(key)
    channel = channel_at(schedule, t)
    rho = sample_random_mixed(schedule.dim, np.random.default_rng(4))
    unitaries = np.stack([u.matrix for u in schedule.permutations])
    u = unitaries[sample_unitaries(channel, np.random.default_rng(5), 4000)]
    samples = u @ rho.matrix @ np.conj(np.transpose(u, (0, 2, 1)))
    deviation = samples.mean(axis=0) - apply(channel, rho).matrix
    for part in (np.real, np.imag):
        stderr = part(samples).std(axis=0) / np.sqrt(len(samples))
        assert (np.abs(part(deviation)) <= 5 * stderr + 1e-12).all()
