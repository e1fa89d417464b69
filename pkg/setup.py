"""
Code to allow this package to be pip-installed
"""

import os

import sys
from setuptools import setup, find_packages

LIBRARY_VERSION = '0.1.0'

CURRENT_PYTHON = sys.version_info[:2]
REQUIRED_PYTHON = (3, 8)

if CURRENT_PYTHON < REQUIRED_PYTHON:
    sys.stderr.write('''
==========================
Unsupported Python version
==========================
This version of qsr-coherence requires Python {}.{}, but you're trying to
install it on Python {}.{}.
'''.format(*(REQUIRED_PYTHON + CURRENT_PYTHON)))
    sys.exit(1)

CUR_DIRECTORY_PATH = os.path.abspath(os.path.dirname(__file__))

# Python doesn't allow hyphens in package names so use underscore instead
PACKAGE_NAME = 'qsr_coherence'
LIB_NAME = 'qsr-coherence'


def read(fname):
    """
    Read file contents into a string
    :param fname: File to be read
    :return: String containing contents of file
    """
    with open(os.path.join(os.path.dirname(__file__), fname)) as file:
        return file.read()


setup(
    name=LIB_NAME,
    version=LIBRARY_VERSION,
    python_requires='>={}.{}'.format(*REQUIRED_PYTHON),
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_dir={PACKAGE_NAME: PACKAGE_NAME},
    package_data={
        PACKAGE_NAME: [
            'cli/config.json',
            'cli/tests/fixtures/*',
            'qmat/tests/fixtures/*',
        ],
        '.': [
            'LICENSE.md'
        ]
    },
    install_requires=[
        'numpy==1.24.4',
        'pandas==2.0.3',
        'scipy==1.10.1',
        'setuptools>=41.0.0',
        'tqdm==4.66.1'
    ],
    entry_points={
        'console_scripts': [
            'qsr-coherence=qsr_coherence.cli.main:main',
        ],
    },
    description='Simulation of quantum state redistribution when Bob is restricted to incoherent operations: '
                'entropic quantities, one-shot protocols and asymptotic rates.',
    long_description=read('README.md'),
    author='qsr-coherence contributors',
    license='See LICENSE.md'
)
