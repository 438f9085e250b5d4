import enum
import json
from pathlib import Path

import numpy as np

from nmlab import Session
from nmlab.serializer import Serializer

MANIFEST = 'manifest.json'


def to_jsonable(value):
    """
    Convert results into plain JSON types.

    Floats are rounded to 12 significant digits, non-finite floats
    become null and complex numbers [re, im] pairs.
    """
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            return None
        return float('{:.12g}'.format(float(value)))
    if isinstance(value, Serializer):
        return to_jsonable(vars(value))
    return value


def write_json(path, data):
    with open(path, 'w', newline='') as f:
        json.dump(to_jsonable(data), f, sort_keys=True, indent=2)
        f.write('\n')


class ManifestExport(object):

    def __init__(self):
        self.session = Session.get_instance()

    def export(self):
        """
        List all files written in this run, the manifest itself
        excluded.

        Returns
        -------
        out: Path
        """
        path = self.session.output_dir() / MANIFEST
        config = self.session.config
        write_json(path, {
            'metadata': config.metadata() if config is not None else {},
            'outputs': sorted(self.session.outputs,
                              key=lambda output: output['path']),
        })
        return path
