#!/bin/env python
'''
Block FFT resampler. The whole signal is transformed once, its spectrum is
truncated or zero-padded to the target length, and transformed back.

Nyquist bin handling (N input, N' output length):

    N' > N, N even    X[N/2] split half/half between Y[N/2] and Y[N'-N/2]
    N' < N, N' even   Y[N'/2] = X[N'/2] + X[N-N'/2]
    odd lengths       no Nyquist bin, plain copy
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging

from fractions import Fraction

import numpy as np
from scipy import fft

from srirnn.core import AudioBuffer, ResampleException


def resampled_length(n, source_rate, target_rate):
    '''
    round(n * target/source), halves rounded away from zero, in exact arithmetic.
    '''
    exact = Fraction(int(n)) * Fraction(target_rate) / Fraction(source_rate)
    whole, rest = divmod(exact, 1)
    return int(whole) + (1 if rest >= Fraction(1, 2) else 0)


def resample_spectrum(X, n_out):
    '''
    Length-n_out spectrum holding the bins of X shared by both lengths.
    '''
    n_in = len(X)
    Y = np.zeros(n_out, dtype=X.dtype)
    m = min(n_in, n_out)
    pos = (m + 1) // 2
    neg = (m - 1) // 2
    Y[:pos] = X[:pos]
    if neg:
        Y[n_out - neg:] = X[n_in - neg:]
    if m % 2 == 0:
        half = m // 2
        if n_out > n_in:
            Y[half] = 0.5 * X[half]
            Y[n_out - half] = 0.5 * X[half]
        elif n_out < n_in:
            Y[half] = X[half] + X[n_in - half]
        else:
            Y[half] = X[half]
    return Y


def resample_fft(input, target_rate):
    '''
    Resample a whole buffer to target_rate.

    :param AudioBuffer input:
    :param float target_rate: Hz
    :rtype: AudioBuffer
    '''
    log = logging.getLogger()
    n_in = len(input)
    if n_in < 1:
        raise ResampleException("cannot resample an empty buffer")
    if not target_rate > 0:
        raise ResampleException("target rate must be positive, got %r" % target_rate)
    n_out = resampled_length(n_in, input.rate, target_rate)
    if n_out < 1:
        raise ResampleException("resampling %d samples from %g Hz to %g Hz leaves no samples" % (
            n_in, input.rate, target_rate))
    log.debug("Resampling %d samples at %g Hz to %d samples at %g Hz" % (n_in, input.rate, n_out,
                                                                           target_rate))
    if n_out == n_in:
        return AudioBuffer(input.samples.copy(), target_rate)
    X = fft.fft(input.samples)
    Y = resample_spectrum(X, n_out)
    y = fft.ifft(Y) * (n_out / n_in)
    return AudioBuffer(np.real(y).astype(input.samples.dtype), target_rate)
