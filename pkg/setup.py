#!/usr/bin/env python
#
# Setup prog for sri-rnn

import sys
import re
from setuptools import setup


def choose_data_file_locations():
    local_install = False

    if '--user' in sys.argv:
        local_install = True
    elif any([re.match(r'--home(=|\s)', arg) for arg in sys.argv]):
        local_install = True
    elif any([re.match(r'--prefix(=|\s)', arg) for arg in sys.argv]):
        local_install = True

    if local_install:
        return home_data_files
    else:
        return system_data_files

release_version = '1.0.0'

etc_files = ['etc/sri-rnn.conf', ]

doc_files = ['docs/weight-format.md', 'README.md', ]

system_data_files = [('/etc/sri-rnn', etc_files),
                     ('share/doc/sri-rnn', doc_files), ]

home_data_files = [('etc', etc_files),
                   ('share/doc/sri-rnn', doc_files), ]

data_files = choose_data_file_locations()

# ===========================================================

setup(
    name="sri-rnn",
    version=release_version,
    description='sample-rate independent recurrent audio-effect inference',
    long_description='''Runs LSTM/GRU audio-effect models trained at one sample rate at any
higher rate through delay-line based state adaptation, with linear analysis,
aliasing metrics and a real-time benchmark.''',
    license='GPL',
    packages=['srirnn',
              'srirnn.plugins',
              'srirnn.plugins.adapt'
              ],
    scripts=['scripts/sri-rnn',
             ],
    data_files=data_files,
    python_requires='>=3.8',
    install_requires=['numpy', 'scipy>=1.6', 'soundfile', 'pluginmanager'],
    extras_require={'test': ['pytest']},
)
