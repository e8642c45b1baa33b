#!/bin/env python

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging

from dataclasses import dataclass

import numpy as np


class SRIRNNException(Exception):
    '''
    Base class of every error raised by the package.
    '''
    def __init__(self, value):
        self.value = value
    def __str__(self):
        return repr(self.value)


class ModelFormatException(SRIRNNException):
    '''
    Weight file cannot be parsed, lacks a required key, or declares a topology
    the engine does not run (unknown unit type, conditioned inputs).
    '''


class ModelShapeException(SRIRNNException):
    '''
    A tensor's shape disagrees with the declared (cell_type, hidden_size, input_size).
    Names the offending key and both shapes.
    '''
    def __init__(self, key, expected, actual):
        self.key = key
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        super(ModelShapeException, self).__init__("%s: expected shape %s, got %s" % (key,
                                                                                   self.expected,
                                                                                   self.actual))


class ModelValueException(SRIRNNException):
    '''
    Non-finite weight value.
    '''


class RateMismatchException(SRIRNNException):
    '''
    Buffer sample rate is not the rate the processing stage is defined at.
    '''
    def __init__(self, expected, actual, hint=''):
        self.expected = expected
        self.actual = actual
        msg = "expected sample rate %.6g Hz, got %.6g Hz" % (expected, actual)
        if hint:
            msg = "%s (%s)" % (msg, hint)
        super(RateMismatchException, self).__init__(msg)


class AdaptationException(SRIRNNException):
    '''
    Invalid adaptation method, oversampling factor, or method parameter.
    '''


class SignalException(SRIRNNException):
    '''
    Signals that cannot be measured or compared as requested.
    '''


class NyquistException(SRIRNNException):
    '''
    Frequency at or above the Nyquist limit where the operation needs it below.
    '''


class BinSpacingException(SRIRNNException):
    '''
    Two analysis windows whose DFT bins do not cover the same Hz-per-bin.
    '''


class ResampleException(SRIRNNException):
    '''
    Resampling request that cannot produce a signal.
    '''


class AudioFormatException(SRIRNNException):
    '''
    WAV file that cannot be read or written in the supported formats.
    '''


@dataclass(frozen=True, eq=False)
class AudioBuffer(object):
    '''
    Mono sample sequence tagged with its sample rate in Hz.

    Floating-point sample arrays keep their dtype (float32 buffers stay float32),
    anything else is converted to float64.
    '''
    samples: np.ndarray
    rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if not np.issubdtype(samples.dtype, np.floating):
            samples = samples.astype(np.float64)
        if samples.ndim != 1:
            raise SignalException("audio buffer must be one-dimensional, got shape %s" % (samples.shape,))
        if not np.all(np.isfinite(samples)):
            raise SignalException("audio buffer contains non-finite samples")
        rate = float(self.rate)
        if not rate > 0.0 or not np.isfinite(rate):
            raise SignalException("sample rate must be positive, got %r" % self.rate)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'rate', rate)

    def __len__(self):
        return len(self.samples)

    @property
    def duration(self):
        return len(self.samples) / self.rate

    def __repr__(self):
        return "AudioBuffer(n=%d, rate=%g, dtype=%s)" % (len(self.samples), self.rate, self.samples.dtype)


class DelayLine(object):
    '''
    Fixed-capacity circular store of past full states, one row per sample.
    Pre-filled with zeros so early reads see the zero initial history.

    tap(1) is the most recently pushed state, tap(d) the state pushed d-1 pushes earlier.
    '''
    def __init__(self, capacity, width, dtype=np.float64):
        if capacity < 1 or width < 1:
            raise AdaptationException("delay line needs positive capacity and width, got %d x %d" % (capacity, width))
        self.capacity = int(capacity)
        self.width = int(width)
        self.buf = np.zeros((self.capacity, self.width), dtype=dtype)
        self.head = 0

    def reset(self):
        self.buf.fill(0)
        self.head = 0

    def push(self, state):
        self.head = (self.head + 1) % self.capacity
        self.buf[self.head] = state

    def tap(self, d):
        return self.buf[(self.head + 1 - d) % self.capacity]

    def taps(self, first, count):
        '''
        Rows tap(first) .. tap(first + count - 1), stacked.
        '''
        idx = (self.head + 1 - first - np.arange(count)) % self.capacity
        return self.buf[idx]


@dataclass(frozen=True)
class StreamShape(object):
    '''
    Smallest adapter parent: the width and dtype of the state vectors being delayed.
    Models and the one-pole system carry the same two attributes and can be passed directly.
    '''
    state_width: int
    dtype: np.dtype = np.dtype(np.float64)


class AdapterState(object):
    '''
    Per-stream delay state of one adaptation method. Adaptation plugins subclass this
    and override delayed() and/or blend().

    Built by pluginmanager as Kind(parent, config, section): parent supplies
    state_width and dtype, config is the AdaptationMethod holding the coefficients.

    The default behaviour is the pure delay line: the cell sees the state
    method.delay samples back and the fresh state is stored unchanged.
    '''
    def __init__(self, parent, config, section):
        self.log = logging.getLogger()
        self.parent = parent
        self.config = config
        self.section = section
        self.method = config
        self.width = int(parent.state_width)
        self.dtype = np.dtype(parent.dtype)
        if config.delay > config.capacity:
            raise AdaptationException("delay of %d samples exceeds ring capacity %d" % (config.delay,
                                                                                        config.capacity))
        self.ring = DelayLine(config.capacity, self.width, self.dtype)

    def reset(self):
        self.ring.reset()

    def delayed(self, state):
        '''
        State fed to the cell at this sample.

        :param state: the current full state (the one produced at the previous sample)
        '''
        return self.ring.tap(self.method.delay)

    def blend(self, state, fresh):
        return fresh

    def push(self, fresh):
        self.ring.push(fresh)
