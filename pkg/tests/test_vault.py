import numpy as np
import pytest

from nmlab.channels import enumerate_permutations
from nmlab.models.schedule import get_schedule
from nmlab.vault import VaultImage, ClassicalRegister, Color, \
    balanced_image, encode_image, evolve_image, measure_mixtures, \
    decode_image, compensate, relabel_for, output_relabel, \
    compare_scenarios, readability_curve, InvalidColorIndexError, \
    MissingRegisterError


def test_vault_image_validation():
    image = VaultImage(indices=[[0, 1], [2, 3]])
    assert image.is_indexed
    assert image.shape == (2, 2)
    np.testing.assert_array_equal(image.weights()[0, 1], [0, 1, 0, 0])
    with pytest.raises(InvalidColorIndexError):
        VaultImage(indices=[[0, 4]])
    with pytest.raises(InvalidColorIndexError):
        VaultImage(indices=[[0.5, 1]])
    with pytest.raises(ValueError):
        VaultImage()
    with pytest.raises(ValueError):
        VaultImage(mixtures=np.full((1, 1, 4), 0.5))
    mixed = VaultImage(mixtures=np.full((1, 2, 4), 0.25))
    assert not mixed.is_indexed
    assert (mixed.height, mixed.width) == (1, 2)


def test_balanced_image():
    image = balanced_image()
    assert image.shape == (32, 32)
    np.testing.assert_array_equal(image.color_counts(), [256] * 4)


def test_encode_single_pixel():
    states = encode_image(VaultImage(indices=[[Color.C]]))
    assert states.shape == (1, 1, 4)
    np.testing.assert_allclose(states[0, 0], np.array([1, 1j, 1j, -1]) / 2)
    with pytest.raises(InvalidColorIndexError):
        encode_image(VaultImage(mixtures=np.full((1, 1, 4), 0.25)))


def test_exact_evolution_of_cyan():
    states = encode_image(VaultImage(indices=[[Color.C]]))
    evolved = evolve_image(states, get_schedule('simplified'), 0.5)
    assert evolved.register is None
    np.testing.assert_allclose(measure_mixtures(evolved.rhos)[0, 0],
                               [0.5, 0, 0, 0.5], atol=1e-12)


def test_decode_at_input():
    image = balanced_image()
    evolved = evolve_image(encode_image(image), get_schedule('uniform'), 0)
    report = decode_image(evolved.rhos, image, t=0.0, scenario='uniform')
    assert report.accuracy == 1.0
    assert report.tie_count == 0
    assert report.mean_fidelity == pytest.approx(1.0)
    np.testing.assert_array_equal(report.decoded.indices, image.indices)
    # pure states decode directly
    assert decode_image(encode_image(image), image).accuracy == 1.0


def test_unreadable_at_minimum():
    image = balanced_image()
    simplified = get_schedule('simplified')
    evolved = evolve_image(encode_image(image), simplified,
                           simplified.t_min)
    report = decode_image(evolved.rhos, image)
    assert report.accuracy == 0.5
    assert report.tie_count == 1024
    assert report.mean_fidelity == pytest.approx(0.5)

    sampled = evolve_image(encode_image(image), simplified,
                           simplified.t_min, mode='sampled',
                           rng=np.random.default_rng(42),
                           keep_register=False)
    assert sampled.register is None
    assert 0.4 <= decode_image(sampled.rhos, image).accuracy <= 0.6


def test_fully_mixed_at_minimum_of_s4():
    image = balanced_image(8, 8)
    s4 = get_schedule('s4')
    evolved = evolve_image(encode_image(image), s4, s4.t_min)
    np.testing.assert_allclose(measure_mixtures(evolved.rhos),
                               np.full((8, 8, 4), 0.25), atol=1e-12)
    report = decode_image(evolved.rhos, image)
    assert report.tie_count == 64
    assert report.accuracy == 0.25


def test_relabel():
    unitaries = enumerate_permutations(4, 2)
    assert relabel_for(unitaries[0]) == (0, 1, 2, 3)
    assert relabel_for(unitaries[3]) == (3, 2, 1, 0)
    assert relabel_for(unitaries[1]) is None
    assert output_relabel(get_schedule('simplified'), 1.0) == (3, 2, 1, 0)
    assert output_relabel(get_schedule('uniform'), 1.0) is None
    assert output_relabel(get_schedule('uniform'), 0.0) == (0, 1, 2, 3)


def test_output_is_relabeled_image():
    image = balanced_image()
    evolved = evolve_image(encode_image(image), get_schedule('simplified'), 1)
    assert decode_image(evolved.rhos, image).accuracy == 0.0
    assert decode_image(evolved.rhos, image, relabel=(3, 2, 1, 0)).accuracy \
        == 1.0


@pytest.mark.parametrize('key', ['simplified', 'uniform'])
@pytest.mark.parametrize('t', [0.3, 0.5, 0.75, 1.0])
def test_compensation_with_register(key, t):
    image = balanced_image()
    schedule = get_schedule(key)
    evolved = evolve_image(encode_image(image), schedule, t, mode='sampled',
                           rng=np.random.default_rng(1))
    assert isinstance(evolved.register, ClassicalRegister)
    assert evolved.register.indices.shape == (32, 32)

    restored = compensate(evolved.rhos, evolved.register, schedule)
    assert decode_image(restored, image).accuracy == 1.0

    swapped = compensate(evolved.rhos, evolved.register, schedule,
                         target='U3')
    assert decode_image(swapped, image, relabel=(3, 2, 1, 0)).accuracy == 1.0


def test_compensation_needs_register():
    image = balanced_image(4, 4)
    schedule = get_schedule('simplified')
    evolved = evolve_image(encode_image(image), schedule, 0.5,
                           mode='sampled', rng=np.random.default_rng(0),
                           keep_register=False)
    with pytest.raises(MissingRegisterError):
        compensate(evolved.rhos, evolved.register, schedule)


def test_sampled_evolution_is_seeded():
    states = encode_image(balanced_image(8, 8))
    schedule = get_schedule('uniform')
    a = evolve_image(states, schedule, 0.5, mode='sampled', rng=3)
    b = evolve_image(states, schedule, 0.5, mode='sampled', rng=3)
    np.testing.assert_array_equal(a.rhos, b.rhos)
    np.testing.assert_array_equal(a.register.indices, b.register.indices)


def test_evolve_image_errors():
    states = encode_image(balanced_image(4, 4))
    with pytest.raises(ValueError):
        evolve_image(states, get_schedule('uniform'), 1.5)
    with pytest.raises(ValueError):
        evolve_image(states, get_schedule('uniform'), 0.5, mode='unknown')


def test_single_pixel_image():
    image = VaultImage(indices=[[Color.K]])
    schedule = get_schedule('simplified')
    evolved = evolve_image(encode_image(image), schedule, 1.0,
                           mode='sampled', rng=np.random.default_rng(0))
    report = decode_image(evolved.rhos, image, relabel=(3, 2, 1, 0))
    assert report.accuracy == 1.0
    assert report.decoded.indices[0, 0] == Color.C


def test_compare_scenarios():
    image = balanced_image(8, 8)
    comparison = compare_scenarios(
        image, [get_schedule(key) for key in ('simplified', 'uniform', 's4')],
        mode='exact_average')
    assert set(comparison) == {'simplified', 'uniform', 's4'}
    for stages in comparison.values():
        assert set(stages) == {'input', 'minimum', 'output'}
        assert stages['input'].accuracy == 1.0
    assert comparison['simplified']['minimum'].accuracy == 0.5
    assert comparison['simplified']['output'].accuracy == 1.0
    assert comparison['s4']['minimum'].accuracy == 0.25


def test_readability_curve():
    image = balanced_image(8, 8)
    grid = np.linspace(0, 1, 11)
    curve = readability_curve(image, get_schedule('simplified'), grid)
    assert curve.accuracy[0] == 1.0
    assert curve.accuracy[5] == 0.5
    np.testing.assert_allclose(curve.mean_fidelity, 1 - grid, atol=1e-12)


@pytest.mark.parametrize('key', ['simplified', 'uniform'])
def test_sampled_evolution_averages_to_exact(key):
    image = VaultImage(indices=np.full((64, 64), int(Color.C)))
    schedule = get_schedule(key)
    states = encode_image(image)
    sampled = evolve_image(states, schedule, 0.5, mode='sampled',
                           rng=np.random.default_rng(6)).rhos
    exact = evolve_image(states, schedule, 0.5).rhos[0, 0]
    samples = sampled.reshape(-1, 4, 4)
    deviation = samples.mean(axis=0) - exact
    for part in (np.real, np.imag):
        stderr = part(samples).std(axis=0) / np.sqrt(len(samples))
        assert (np.abs(part(deviation)) <= 5 * stderr + 1e-12).all()
