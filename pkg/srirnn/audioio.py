#!/bin/env python
'''
Mono WAV input and output.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging
import os

import numpy as np
import soundfile as sf

from srirnn.core import AudioBuffer, AudioFormatException

READ_SUBTYPES = ('PCM_16', 'PCM_24', 'FLOAT')
WRITE_SUBTYPE = 'FLOAT'


def read_wav(path):
    '''
    Read a mono 16/24-bit PCM or 32-bit float WAV file as float64 samples in [-1, 1].

    :rtype: AudioBuffer
    '''
    log = logging.getLogger()
    path = os.path.expanduser(path)
    try:
        info = sf.info(path)
    except (RuntimeError, OSError) as e:
        raise AudioFormatException("cannot read %s (%s)" % (path, e))
    if info.format != 'WAV':
        raise AudioFormatException("%s is %s, not WAV" % (path, info.format))
    if info.channels != 1:
        raise AudioFormatException("%s has %d channels, only mono is supported" % (path, info.channels))
    if info.subtype not in READ_SUBTYPES:
        raise AudioFormatException("%s is %s, expected one of %s" % (path, info.subtype, ', '.join(READ_SUBTYPES)))
    data, rate = sf.read(path, dtype='float64', always_2d=False)
    log.info("Read %d samples at %d Hz (%s) from %s" % (len(data), rate, info.subtype, path))
    return AudioBuffer(np.asarray(data, dtype=np.float64), float(rate))


def write_wav(path, buffer):
    '''
    Write an AudioBuffer as a mono 32-bit float WAV file. The rate must be a whole number of Hz.
    '''
    log = logging.getLogger()
    rate = buffer.rate
    if rate != int(rate):
        raise AudioFormatException("WAV files need an integer sample rate, got %r" % rate)
    path = os.path.expanduser(path)
    try:
        sf.write(path, np.asarray(buffer.samples, dtype=np.float32), int(rate), subtype=WRITE_SUBTYPE,
                 format='WAV')
    except (RuntimeError, ValueError) as e:
        raise AudioFormatException("cannot write %s (%s)" % (path, e))
    log.info("Wrote %d samples at %d Hz to %s" % (len(buffer), int(rate), path))
    return path
