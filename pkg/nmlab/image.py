"""
Module to read and write vault images.

Images are exchanged as plain (ASCII) PPM pixmaps or as CSV tables of
CMYK weights. Color index pixels render as the pure CMYK colors,
mixture pixels as the weighted blend of them.
"""

import logging

import numpy as np

from nmlab.constants import CMYK_RGB
from nmlab.file import MalformedFileError, format_value, read_table, \
    write_table
from nmlab.vault import Color, VaultImage

logger = logging.getLogger(__name__)

PPM_MAGIC = 'P3'
PPM_MAX_VALUE = 255
CMYK_HEADER = ['x', 'y', 'c', 'm', 'y', 'k']


class UnsupportedMagicError(MalformedFileError):
    pass


def render_rgb(image):
    """
    RGB values of an image.

    Parameters
    ----------
    image: VaultImage

    Returns
    -------
    out: numpy.ndarray
        integers in 0..255, shape (height, width, 3), blends are
        rounded half up
    """
    blend = image.weights() @ np.array(CMYK_RGB, dtype=float)
    return np.floor(blend + 0.5).astype(np.int64)


def nearest_colors(rgb):
    """ Index of the nearest CMYK color of every RGB pixel """
    palette = np.array(CMYK_RGB, dtype=float)
    distance = np.sum((rgb[..., None, :] - palette) ** 2, axis=-1)
    return np.argmin(distance, axis=-1)


def write_ppm(image, path, metadata=None):
    """
    Write an image as plain PPM (P3).

    Parameters
    ----------
    image: VaultImage
    path: str or Path
    metadata: dict
        written as comment lines after the magic number
    """
    rgb = render_rgb(image)
    lines = [PPM_MAGIC]
    for key, value in (metadata or {}).items():
        lines.append('# {}: {}'.format(key, format_value(value)))
    lines.append('{} {}'.format(image.width, image.height))
    lines.append(str(PPM_MAX_VALUE))
    for row in rgb:
        lines.append(' '.join('{} {} {}'.format(*pixel) for pixel in row))
    with open(path, 'w', newline='') as f:
        f.write('\n'.join(lines) + '\n')


def _ppm_tokens(text):
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split('#', 1)[0].split())
    return tokens


def read_ppm(path):
    """
    Read a plain PPM (P3) pixmap into a color index image.

    Pixels that are not one of the four CMYK colors are mapped to the
    nearest one.

    Returns
    -------
    out: VaultImage

    Raises
    ------
    UnsupportedMagicError
        for anything but P3
    MalformedFileError
    """
    with open(path, 'rb') as f:
        text = f.read().decode('latin-1')
    tokens = _ppm_tokens(text)
    if not tokens or tokens[0] != PPM_MAGIC:
        raise UnsupportedMagicError(
            "File '{}' is not a plain PPM (P3) pixmap".format(path))
    try:
        width, height, max_value = (int(v) for v in tokens[1:4])
        values = np.array([int(v) for v in tokens[4:]], dtype=np.int64)
    except ValueError:
        raise MalformedFileError(
            "File '{}' contains non-integer values".format(path))
    if width < 1 or height < 1:
        raise MalformedFileError(
            "File '{}' has invalid size {}x{}".format(path, width, height))
    if max_value != PPM_MAX_VALUE:
        raise MalformedFileError(
            "File '{}' has max value {}, expected {}".format(
                path, max_value, PPM_MAX_VALUE))
    if values.size != 3 * width * height:
        raise MalformedFileError(
            "File '{}' holds {} values for {}x{} pixels".format(
                path, values.size, width, height))
    if (values < 0).any() or (values > max_value).any():
        raise MalformedFileError(
            "File '{}' contains values outside 0..{}".format(
                path, max_value))

    rgb = values.reshape(height, width, 3)
    indices = nearest_colors(rgb)
    exact = (rgb == np.array(CMYK_RGB)[indices]).all(axis=-1)
    if not exact.all():
        logger.warning('%d pixels of %s are no CMYK colors, using the '
                       'nearest ones' % (np.count_nonzero(~exact), path))
    return VaultImage(indices=indices)


def write_cmyk_csv(image, path, metadata=None):
    """ Write the CMYK weights of all pixels, row by row """
    weights = image.weights()
    rows = [(x, y) + tuple(weights[y, x])
            for y in range(image.height)
            for x in range(image.width)]
    write_table(path, CMYK_HEADER, rows, metadata)


def read_cmyk_csv(path):
    """
    Read CMYK weights written by `write_cmyk_csv`.

    Returns
    -------
    out: VaultImage
        with mixtures

    Raises
    ------
    MalformedFileError
    """
    rows, _ = read_table(path, CMYK_HEADER)
    if not rows:
        raise MalformedFileError("File '{}' holds no pixels".format(path))
    try:
        xy = np.array([(int(r[0]), int(r[1])) for r in rows])
        weights = np.array([[float(v) for v in r[2:]] for r in rows])
    except ValueError:
        raise MalformedFileError(
            "File '{}' contains non-numeric entries".format(path))
    width, height = xy.max(axis=0) + 1
    if (xy < 0).any() or len(rows) != width * height:
        raise MalformedFileError(
            "File '{}' does not cover a full {}x{} image".format(
                path, width, height))
    mixtures = np.full((height, width, len(Color)), np.nan)
    mixtures[xy[:, 1], xy[:, 0]] = weights
    if np.isnan(mixtures).any():
        raise MalformedFileError(
            "File '{}' lists a pixel twice".format(path))
    try:
        return VaultImage(mixtures=mixtures)
    except ValueError as e:
        raise MalformedFileError(str(e))
