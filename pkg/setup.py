#!/usr/bin/env python
# -*- coding: utf-8 -*-
from os.path import exists, dirname, realpath
from setuptools import setup, find_packages
import sys

author = u"nmlab developers"
description = 'Capacities, image storage and tomography of qudits ' \
              'under non-Markovian permutation noise'
name = 'nmlab'
year = "2026"


sys.path.insert(0, realpath(dirname(__file__))+"/"+name)
try:
    from _version import version
except BaseException:
    version = "unknown"


setup(
    name=name,
    author=author,
    version=version,
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_dir={name: name},
    include_package_data=True,
    license="GPL v3",
    description=description,
    long_description=open('README.rst').read() if exists('README.rst') else '',
    install_requires=["h5py>=2.10.0",
                      "hypothesis",
                      "numpy>=1.17.0",
                      "packaging>=20.8",
                      "pytest",
                      "pytest_mock",
                      "scipy",
                      ],
    entry_points={
        "console_scripts": [
            "nmlab = nmlab.cli:main",
        ],
    },
    # not to be confused with definitions in pyproject.toml [build-system]
    python_requires=">=3.9",
    keywords=["quantum channels", "non-Markovian dynamics",
              "quantum state tomography"],
    classifiers=['Operating System :: OS Independent',
                 'Programming Language :: Python :: 3',
                 'Topic :: Scientific/Engineering :: Physics',
                 'Intended Audience :: Science/Research',
                 ],
    platforms=['ALL'],
)
