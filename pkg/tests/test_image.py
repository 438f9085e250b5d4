import numpy as np
import pytest

from nmlab.constants import CMYK_RGB
from nmlab.file import MalformedFileError
from nmlab.image import UnsupportedMagicError, read_cmyk_csv, read_ppm, \
    render_rgb, write_cmyk_csv, write_ppm
from nmlab.vault import VaultImage, balanced_image


def test_render_rgb():
    image = VaultImage(indices=[[0, 1, 2, 3]])
    np.testing.assert_array_equal(render_rgb(image)[0], CMYK_RGB)

    blend = VaultImage(mixtures=[[[0.5, 0, 0, 0.5]]])
    expected = np.floor((np.array(CMYK_RGB[0]) + CMYK_RGB[3]) / 2 + 0.5)
    np.testing.assert_array_equal(render_rgb(blend)[0, 0], expected)


def test_ppm_round_trip(tmp_path):
    image = balanced_image(8, 4)
    path = tmp_path / 'image.ppm'
    write_ppm(image, path, metadata={'stage': 'input', 't': 0.0})

    text = path.read_text()
    assert text.startswith('P3\n# stage: input\n# t: 0\n8 4\n255\n')

    restored = read_ppm(path)
    np.testing.assert_array_equal(restored.indices, image.indices)


def test_read_ppm_nearest_color(tmp_path):
    path = tmp_path / 'off.ppm'
    r, g, b = CMYK_RGB[1]
    path.write_text('P3\n1 1\n255\n{} {} {}\n'.format(
        max(r - 3, 0), min(g + 3, 255), b))
    assert read_ppm(path).indices[0, 0] == 1


def test_read_ppm_rejects_binary(tmp_path):
    path = tmp_path / 'binary.ppm'
    path.write_bytes(b'P6\n1 1\n255\n\x00\x00\x00')
    with pytest.raises(UnsupportedMagicError):
        read_ppm(path)


@pytest.mark.parametrize('content', [
    'P3\n2 1\n255\n0 0 0\n',
    'P3\n1 1\n15\n0 0 0\n',
    'P3\n1 1\n255\n0 0 300\n',
    'P3\n1 1\n255\n0 x 0\n',
    'P3\n0 1\n255\n',
])
def test_read_ppm_malformed(tmp_path, content):
    path = tmp_path / 'bad.ppm'
    path.write_text(content)
    with pytest.raises(MalformedFileError):
        read_ppm(path)


def test_cmyk_csv(tmp_path):
    mixtures = np.zeros((2, 3, 4))
    mixtures[..., 0] = 0.25
    mixtures[..., 3] = 0.75
    mixtures[1, 2] = [0, 1, 0, 0]
    path = tmp_path / 'mixtures.csv'
    write_cmyk_csv(VaultImage(mixtures=mixtures), path,
                   metadata={'stage': 'minimum'})

    lines = path.read_text().splitlines()
    assert lines[0] == '# stage: minimum'
    assert lines[1] == 'x,y,c,m,y,k'
    assert lines[2] == '0,0,0.25,0,0,0.75'
    assert len(lines) == 2 + 6

    restored = read_cmyk_csv(path)
    assert not restored.is_indexed
    np.testing.assert_allclose(restored.mixtures, mixtures)


def test_cmyk_csv_malformed(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('x,y,c,m,y,k\n0,0,0.5,0.5,0,0\n2,0,1,0,0,0\n')
    with pytest.raises(MalformedFileError):
        read_cmyk_csv(path)

    path.write_text('x,y,c,m,y,k\n0,0,0.5,0.6,0,0\n')
    with pytest.raises(MalformedFileError):
        read_cmyk_csv(path)

    path.write_text('x,y,c,m,y\n0,0,1,0,0\n')
    with pytest.raises(MalformedFileError):
        read_cmyk_csv(path)
