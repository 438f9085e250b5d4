import h5py
import numpy as np
import pytest

from nmlab.file import MalformedFileError, format_value, is_session_file, \
    read_counts, read_density_matrix, read_mubs, read_table, \
    session_file_version, write_counts, write_density_matrix, write_mubs, \
    write_table
from nmlab.states import DensityMatrix, InvalidStateError
from nmlab.tomography import CountRecord, MubConstructionError, \
    build_mubs_d4


def test_format_value():
    assert format_value(True) == 'true'
    assert format_value(np.int64(3)) == '3'
    assert format_value(0.1 + 0.2) == '0.3'
    assert format_value(1 / 3) == '0.333333333333'
    assert format_value('uniform') == 'uniform'


def test_table_metadata(tmp_path):
    path = tmp_path / 'table.csv'
    write_table(path, ['t', 'value_bits'], [(0.0, 2.0), (0.5, 1.5)],
                metadata={'scenario': 'uniform', 'seed': 42})
    assert path.read_bytes() == \
        b'# scenario: uniform\n# seed: 42\nt,value_bits\n0,2\n0.5,1.5\n'

    rows, metadata = read_table(path, ['t', 'value_bits'])
    assert rows == [['0', '2'], ['0.5', '1.5']]
    assert metadata == {'scenario': 'uniform', 'seed': '42'}

    with pytest.raises(MalformedFileError):
        read_table(path, ['t', 'value'])


def test_read_table_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_table(tmp_path / 'unavailable.csv', ['t'])


def test_density_matrix_file(tmp_path):
    mubs = build_mubs_d4()
    rho = DensityMatrix(0.5 * mubs.state(1, 0).projector().matrix
                        + 0.5 * mubs.state(1, 3).projector().matrix)
    path = tmp_path / 'rho.csv'
    write_density_matrix(path, rho, metadata={'input': 'e1'})

    lines = path.read_text().splitlines()
    assert lines[:2] == ['# input: e1', 'row,col,re,im']
    assert len(lines) == 2 + 16

    np.testing.assert_allclose(read_density_matrix(path).matrix,
                               rho.matrix, atol=1e-11)


def test_density_matrix_file_errors(tmp_path):
    path = tmp_path / 'rho.csv'
    path.write_text('row,col,re,im\n0,0,1,0\n0,1,0,0\n')
    with pytest.raises(MalformedFileError):
        read_density_matrix(path)

    path.write_text('row,col,re,im\n0,0,one,0\n')
    with pytest.raises(MalformedFileError):
        read_density_matrix(path)

    # not of unit trace
    path.write_text('row,col,re,im\n0,0,1,0\n0,1,0,0\n1,0,0,0\n1,1,1,0\n')
    with pytest.raises(InvalidStateError):
        read_density_matrix(path)


def test_counts_file(tmp_path):
    counts = CountRecord(10, np.arange(20).reshape(5, 4) % 4, 'poisson')
    path = tmp_path / 'counts.csv'
    write_counts(path, counts)

    lines = path.read_text().splitlines()
    assert lines[:3] == ['# shots_per_basis: 10', '# noise_mode: poisson',
                         'basis,outcome,count']

    restored = read_counts(path)
    assert restored.shots_per_basis == 10
    assert restored.noise_mode == 'poisson'
    np.testing.assert_array_equal(restored.counts, counts.counts)


def test_counts_file_without_metadata(tmp_path):
    path = tmp_path / 'counts.csv'
    path.write_text('basis,outcome,count\n0,0,3\n0,1,1\n1,0,2\n1,1,2\n')
    restored = read_counts(path)
    assert restored.shots_per_basis == 4
    assert restored.noise_mode == 'multinomial'


def test_mubs_file(tmp_path):
    path = tmp_path / 'mubs.csv'
    mubs = build_mubs_d4()
    write_mubs(path, mubs)
    np.testing.assert_allclose(read_mubs(path).bases, mubs.bases)

    bases = np.array(mubs.bases)
    bases[2] = bases[0]
    write_mubs(path, type(mubs)(bases))
    with pytest.raises(MubConstructionError):
        read_mubs(path)


def test_is_session_file(tmp_path):
    path = tmp_path / 'run.h5'
    with h5py.File(path, 'w') as f:
        f.attrs['version'] = 'nmlab 1.2.0'
    assert is_session_file(path)
    assert session_file_version(path) == '1.2.0'

    other = tmp_path / 'other.h5'
    with h5py.File(other, 'w') as f:
        f.attrs['version'] = 'H5BM-v0.0.4'
    assert not is_session_file(other)

    text = tmp_path / 'text.h5'
    text.write_text('no hdf')
    assert not is_session_file(text)
    assert not is_session_file(tmp_path / 'unavailable.h5')
