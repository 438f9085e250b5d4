"""Determine the package version

The version is taken from `git describe --tags` when this file lies in
the package directory of a git checkout. Otherwise it is read from
"_version_save.py", which is written next to this file whenever git
reports a version and which ships with the distribution archive.
If neither is available the version is "0.0.0".
"""
import os
import subprocess
import sys
from os.path import abspath, dirname, join

FALLBACK_VERSION = '0.0.0'


def git_describe():
    """ `git describe --tags HEAD` of this repository, '' if unavailable """
    here = dirname(abspath(__file__))
    env = {k: os.environ[k] for k in ('SYSTEMROOT', 'PATH')
           if k in os.environ}
    env.update(LANGUAGE='C', LANG='C', LC_ALL='C')
    try:
        tracked = subprocess.run(
            ['git', 'ls-files', '--full-name', __file__], cwd=here, env=env,
            capture_output=True, text=True).stdout.strip()
        # Only trust git if this very file is versioned
        if not tracked:
            return ''
        return subprocess.run(
            ['git', 'describe', '--tags', 'HEAD'], cwd=here, env=env,
            capture_output=True, text=True).stdout.strip()
    except OSError:
        return ''


def load_version(versionfile):
    try:
        with open(versionfile, 'r') as fd:
            for line in fd:
                if line.startswith('longversion'):
                    return line.split('=')[1].strip().strip("'")
    except OSError:
        pass
    return ''


def write_version(longversion, versionfile):
    try:
        with open(versionfile, 'w') as fd:
            fd.write('# This file was created automatically\n'
                     "longversion = '{}'\n".format(longversion))
    except OSError:
        pass


versionfile = join(dirname(abspath(__file__)), '_version_save.py')
longversion = git_describe()
if longversion and not hasattr(sys, 'frozen') \
        and longversion != load_version(versionfile):
    write_version(longversion, versionfile)
if not longversion:
    longversion = load_version(versionfile) or FALLBACK_VERSION

# PEP 440 development version, e.g. 0.2.0-5-gabc123 -> 0.2.0.post5
version = '.post'.join(longversion.lstrip('v').split('-')[:2])
