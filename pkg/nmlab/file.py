"""
Module for reading and writing the text and HDF files nmlab exchanges
with the outside world: CSV tables of density matrices, tomography
counts and bases, and the HDF run archives written by the session.

CSV files start with optional '# key: value' metadata lines followed by
a header row. Floats are written with 12 significant digits, lines end
with LF.
"""
import csv
import logging
from pathlib import Path

import h5py
import numpy as np

from nmlab.states import DensityMatrix
from nmlab.tomography import CountRecord, MubSet

logger = logging.getLogger(__name__)

METADATA_PREFIX = '#'
SESSION_FORMAT = 'nmlab'

DENSITY_MATRIX_HEADER = ['row', 'col', 're', 'im']
COUNTS_HEADER = ['basis', 'outcome', 'count']
MUB_HEADER = ['basis', 'state', 'component', 're', 'im']


class MalformedFileError(ValueError):
    pass


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return '{:.12g}'.format(float(value))
    return str(value)


def write_table(path, header, rows, metadata=None):
    """
    Write a CSV table.

    Parameters
    ----------
    path: str or Path
    header: list of str
    rows: iterable of sequences
    metadata: dict
        written as '# key: value' lines before the header
    """
    with open(path, 'w', newline='') as csvfile:
        for key, value in (metadata or {}).items():
            csvfile.write('{} {}: {}\n'.format(METADATA_PREFIX, key,
                                               format_value(value)))
        csv_writer = csv.writer(csvfile, delimiter=',',
                                lineterminator='\n',
                                quoting=csv.QUOTE_MINIMAL)
        csv_writer.writerow(header)
        for row in rows:
            csv_writer.writerow([format_value(v) for v in row])


def read_table(path, header):
    """
    Read a CSV table written by `write_table`.

    Returns
    -------
    rows: list of list of str
    metadata: dict

    Raises
    ------
    FileNotFoundError
    MalformedFileError
        if the header differs from `header`
    """
    path = Path(path)
    metadata = {}
    lines = []
    with open(path, 'r', newline='') as csvfile:
        for line in csvfile:
            if line.startswith(METADATA_PREFIX):
                key, _, value = line[1:].partition(':')
                metadata[key.strip()] = value.strip()
            elif line.strip():
                lines.append(line)
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != header:
        raise MalformedFileError(
            "File '{}' does not start with the header '{}'".format(
                path, ','.join(header)))
    for row in rows[1:]:
        if len(row) != len(header):
            raise MalformedFileError(
                "File '{}' contains the malformed row '{}'".format(
                    path, ','.join(row)))
    return rows[1:], metadata


def _parse(rows, types, path):
    try:
        return [[t(v) for t, v in zip(types, row)] for row in rows]
    except ValueError:
        raise MalformedFileError(
            "File '{}' contains non-numeric entries".format(path))


def write_density_matrix(path, rho, metadata=None):
    matrix = rho.matrix
    rows = [(i, j, matrix[i, j].real, matrix[i, j].imag)
            for i in range(matrix.shape[0])
            for j in range(matrix.shape[1])]
    write_table(path, DENSITY_MATRIX_HEADER, rows, metadata)


def read_density_matrix(path):
    """
    Read a density matrix from a `row,col,re,im` CSV file.

    Raises
    ------
    MalformedFileError
    InvalidStateError
    """
    rows, _ = read_table(path, DENSITY_MATRIX_HEADER)
    entries = _parse(rows, (int, int, float, float), path)
    if not entries:
        raise MalformedFileError("File '{}' holds no entries".format(path))
    dim = max(max(e[0], e[1]) for e in entries) + 1
    if len(entries) != dim * dim:
        raise MalformedFileError(
            "File '{}' holds {} entries for a {}x{} matrix".format(
                path, len(entries), dim, dim))
    matrix = np.zeros((dim, dim), dtype=complex)
    for i, j, re, im in entries:
        matrix[i, j] = re + 1j * im
    return DensityMatrix(matrix)


def write_counts(path, counts, metadata=None):
    metadata = dict(metadata or {})
    metadata.setdefault('shots_per_basis', counts.shots_per_basis)
    metadata.setdefault('noise_mode', counts.noise_mode)
    rows = [(b, k, counts.counts[b, k])
            for b in range(counts.counts.shape[0])
            for k in range(counts.counts.shape[1])]
    write_table(path, COUNTS_HEADER, rows, metadata)


def read_counts(path):
    """ Read a CountRecord from a `basis,outcome,count` CSV file """
    rows, metadata = read_table(path, COUNTS_HEADER)
    entries = _parse(rows, (int, int, int), path)
    if not entries:
        raise MalformedFileError("File '{}' holds no counts".format(path))
    n_bases = max(e[0] for e in entries) + 1
    dim = max(e[1] for e in entries) + 1
    counts = np.zeros((n_bases, dim), dtype=np.int64)
    for b, k, n in entries:
        counts[b, k] = n
    sums = counts.sum(axis=1)
    shots = int(metadata.get('shots_per_basis', sums.max()))
    noise_mode = metadata.get(
        'noise_mode', 'multinomial' if (sums == sums[0]).all()
        else 'poisson')
    return CountRecord(shots, counts, noise_mode)


def write_mubs(path, mubs, metadata=None):
    rows = [(b, k, c, mubs.bases[b, k, c].real, mubs.bases[b, k, c].imag)
            for b in range(mubs.n_bases)
            for k in range(mubs.dim)
            for c in range(mubs.dim)]
    write_table(path, MUB_HEADER, rows, metadata)


def read_mubs(path):
    """ Read a MubSet and check it is mutually unbiased """
    rows, _ = read_table(path, MUB_HEADER)
    entries = _parse(rows, (int, int, int, float, float), path)
    if not entries:
        raise MalformedFileError("File '{}' holds no bases".format(path))
    n_bases = max(e[0] for e in entries) + 1
    dim = max(e[2] for e in entries) + 1
    bases = np.zeros((n_bases, dim, dim), dtype=complex)
    for b, k, c, re, im in entries:
        bases[b, k, c] = re + 1j * im
    mubs = MubSet(bases)
    mubs.check()
    return mubs


def is_session_file(path):
    try:
        path = Path(path)
        with h5py.File(path, 'r') as h5:
            file_format = h5.attrs.get('version')
            if isinstance(file_format, bytes):
                file_format = file_format.decode('utf-8')
            return isinstance(file_format, str) and \
                file_format.startswith(SESSION_FORMAT)
    except Exception:
        return False


def session_file_version(path):
    """ Version string of the nmlab that wrote a run archive """
    with h5py.File(path, 'r') as h5:
        file_format = h5.attrs.get('version')
    if isinstance(file_format, bytes):
        file_format = file_format.decode('utf-8')
    return file_format[len(SESSION_FORMAT):].strip()
