import errno
import os
from pathlib import Path

import h5py
from packaging import version as packaging_version

from nmlab._version import version
from nmlab.file import SESSION_FORMAT, is_session_file, \
    session_file_version
from nmlab.serializer import Serializer

RUN_ARCHIVE = 'run.h5'


class NmlabInvalidFileError(FileNotFoundError):
    def __init__(self, *args, **kwargs):
        super(NmlabInvalidFileError, self).__init__(*args, **kwargs)


class Session(Serializer):
    """
    Session stores the configuration and the results
    of the current run.

    Session is a singleton. It can be accessed by
    calling the get_instance() method.
    """

    __instance = None

    def __init__(self):
        """
        Constructor of Session class. Since Session is a singleton,
        users should not call it but instead use the get_instance
        method.
        """
        if Session.__instance is not None:
            raise Exception('Session is a singleton!')
        else:
            Session.__instance = self
            self.clear()

    @staticmethod
    def get_instance():
        """
        Returns the singleton instance of Session

        Returns
        -------
        out: Session
        """
        if Session.__instance is None:
            Session()
        return Session.__instance

    def clear(self):
        """
        Forget configuration, results and outputs of the last run.
        """
        self.config = None
        self.results = {}
        self.outputs = []

    def set_config(self, config):
        self.config = config

    def set_result(self, name, result):
        self.results[name] = result

    def get_result(self, name):
        return self.results.get(name)

    def add_output(self, path, kind, description=''):
        """
        Register a written file for the manifest.

        Parameters
        ----------
        path: str or Path
        kind: str
            'csv', 'json', 'ppm' or 'h5'
        description: str
        """
        self.outputs.append({
            'path': Path(path).name,
            'kind': kind,
            'description': description,
        })

    def output_dir(self):
        if self.config is None:
            return Path('.')
        return Path(self.config.output)

    def save(self, path=None):
        """
        Write configuration and results to an HDF run archive.

        Returns
        -------
        out: Path
            path of the archive
        """
        if path is None:
            path = self.output_dir() / RUN_ARCHIVE
        path = Path(path)
        with h5py.File(path, 'w') as f:
            self.serialize(f, 'session', skip=['outputs'])
            # Store the current nmlab version
            f.attrs['version'] = '{} {}'.format(SESSION_FORMAT, version)
        return path

    def load(self, path):
        """
        Restore configuration and results from a run archive.

        Raises
        ------
        FileNotFoundError
            if the file does not exist
        NmlabInvalidFileError
            if the file is no nmlab run archive or was written by a
            newer major version
        """
        path = Path(path)
        if not os.path.exists(path):
            raise FileNotFoundError(
                errno.ENOENT,
                "The file '{}' does not exist.".format(path),
                str(path)
            )

        if not is_session_file(path):
            raise NmlabInvalidFileError(
                errno.ENOENT,
                "Could not load the run archive '{}'.".format(path)
                + " The file is not a valid nmlab file.",
                str(path)
            )

        if is_newer_major(session_file_version(path), version):
            raise NmlabInvalidFileError(
                errno.ENOENT,
                "The run archive '{}' was written by a newer nmlab"
                " ({}).".format(path, session_file_version(path)),
                str(path)
            )

        with h5py.File(path, 'r') as f:
            new_session = Serializer.deserialize(f['session'])
            session = Session.get_instance()
            for var_name, var_value in new_session.__dict__.items():
                session.__dict__[var_name] = var_value
            session.outputs = []


def is_newer_major(file_version, current_version):
    """ Whether file_version has a larger major version than ours """
    try:
        file_version = packaging_version.Version(file_version)
        current_version = packaging_version.Version(current_version)
    except packaging_version.InvalidVersion:
        return False
    return file_version.major > current_version.major
