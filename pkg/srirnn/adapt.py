#!/bin/env python
'''
Sample-rate adaptation of recurrent models.

A model trained at F_s is run at M*F_s (M >= 1) by changing which past state the
cell sees at each sample:

    Naive   the previous state, as if nothing changed
    STN     previous state, with the state residual scaled by 1/M
    Delay   the state D = round(M) samples back
    LIDL    linear interpolation between the states floor(M) and floor(M)+1 back
    APDL    first-order all-pass fractional delay of the same two taps
    CIDL    cubic Lagrange interpolation over four taps

The method-specific part lives in srirnn/plugins/adapt/<Kind>.py.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging
import math

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pluginmanager as pm

from srirnn.core import AdaptationException, AudioBuffer
from srirnn.rnn import check_rate

METHODS = ('Naive', 'STN', 'Delay', 'LIDL', 'APDL', 'CIDL')
DELAY_METHODS = ('Delay', 'LIDL', 'APDL', 'CIDL')

# Below this fractional delay the first-order all-pass pole sits close to the unit circle.
APDL_MIN_DELTA = 0.1


def method_kind(name):
    '''
    Canonical method name for a case-insensitive one.
    '''
    for kind in METHODS:
        if str(name).lower() == kind.lower():
            return kind
    raise AdaptationException("unknown adaptation method %r, expected one of %s" % (name, ', '.join(METHODS)))


def allpass_eta(delta):
    '''
    First-order all-pass coefficient for fractional delay delta: (1 - delta)/(1 + delta).
    '''
    if not 0.0 <= delta <= 1.0:
        raise AdaptationException("all-pass fractional delay must lie in [0, 1], got %r" % delta)
    return (1.0 - delta) / (1.0 + delta)


def lagrange_kernel(delta, order=3):
    '''
    Lagrange fractional-delay FIR coefficients l[n] = prod_{k != n} (delta - k)/(n - k).

    :param float delta: delay in samples, 0 <= delta <= 2 for the cubic kernel
    :return: numpy array of order+1 coefficients
    '''
    if not 0.0 <= delta <= order - 1:
        raise AdaptationException("Lagrange delay must lie in [0, %d], got %r" % (order - 1, delta))
    taps = np.arange(order + 1, dtype=np.float64)
    kernel = np.empty(order + 1)
    for n in range(order + 1):
        others = taps[taps != n]
        kernel[n] = np.prod((delta - others) / (n - others))
    return kernel


def cidl_params(M):
    '''
    Tap offset gamma and kernel delay delta placing the cubic window around n - M.

    Centered for M >= 2, asymmetric (gamma = 1) for 1 < M < 2.
    '''
    if not M > 1.0:
        raise AdaptationException("cubic interpolated delay needs M > 1, got %r" % M)
    shift = math.floor(abs(M - 2.0))
    return 1 + shift, M - shift - 1.0


@dataclass(frozen=True)
class AdaptationMethod(object):
    '''
    An adaptation kind together with the oversampling factor and its derived constants.

    delta   fractional delay: M - floor(M), or the CIDL kernel delay
    gamma   CIDL tap offset
    eta     APDL all-pass coefficient
    kernel  CIDL Lagrange coefficients
    delay   integer tap used by the pure delay path
    '''
    kind: str
    M: float = 1.0
    delta: float = field(init=False)
    gamma: int = field(init=False)
    eta: Optional[float] = field(init=False)
    kernel: Optional[Tuple[float, ...]] = field(init=False)
    delay: int = field(init=False)
    integer: bool = field(init=False)
    capacity: int = field(init=False)

    def __post_init__(self):
        log = logging.getLogger()
        kind = method_kind(self.kind)
        M = float(self.M)
        if not np.isfinite(M) or M < 1.0:
            raise AdaptationException("oversampling factor must be >= 1 (downsampling is not supported), "
                                      "got %r" % self.M)
        floor_m = math.floor(M)
        frac = M - floor_m
        integer = frac == 0.0
        delta, gamma, eta, kernel = frac, 0, None, None
        delay = 1

        if kind == 'Delay':
            delay = max(1, math.floor(M + 0.5))
        elif kind in DELAY_METHODS:
            delay = int(floor_m)
        if kind == 'APDL':
            eta = allpass_eta(frac)
            if not integer and frac < APDL_MIN_DELTA:
                log.warning("APDL fractional delay %.4f is below %.1f: the all-pass pole %.4f is close to "
                            "the unit circle and the method may become numerically unreliable, "
                            "particularly in single precision" % (frac, APDL_MIN_DELTA, -eta))
        if kind == 'CIDL':
            if M > 1.0:
                gamma, delta = cidl_params(M)
            else:
                gamma, delta = 1, 0.0
            kernel = tuple(float(c) for c in lagrange_kernel(delta))

        for name, value in (('kind', kind), ('M', M), ('delta', delta), ('gamma', gamma), ('eta', eta),
                            ('kernel', kernel), ('delay', delay), ('integer', integer),
                            ('capacity', int(floor_m) + 5)):
            object.__setattr__(self, name, value)
        log.debug("Adaptation %s: M=%r delta=%r gamma=%r eta=%r kernel=%r delay=%d capacity=%d" % (
            kind, M, delta, gamma, eta, kernel, delay, self.capacity))

    @classmethod
    def for_rate(cls, kind, rate, train_rate=44100.0):
        return cls(kind, rate / train_rate)

    @property
    def label(self):
        return "%s@%.6g" % (self.kind, self.M)

    def new_state(self, parent):
        '''
        Fresh per-stream adapter. parent is anything with state_width and dtype:
        the system being run, or a StreamShape.
        '''
        return getplugin(self.kind, self, parent)


def getplugin(name, method, parent):
    '''
    Instantiate the AdapterState subclass srirnn.plugins.adapt.<name>.<name>.
    '''
    log = logging.getLogger()
    log.debug("Creating %s adapter, state width %d, dtype %s" % (name, parent.state_width,
                                                                 np.dtype(parent.dtype)))
    try:
        adapter = pm.getplugin(parent=parent,
                               paths=['srirnn', 'plugins', 'adapt'],
                               name=name,
                               config=method,
                               section="plugin-%s" % name.lower())
    except AdaptationException:
        raise
    except Exception as e:
        raise AdaptationException("no adaptation plugin %s (%s)" % (name, e))
    if adapter is None:
        raise AdaptationException("no adaptation plugin %s" % name)
    return adapter


class AdaptedProcessor(object):
    '''
    Streams a system at M times its native rate through one adaptation method.

    The system supplies cell(vector, x), head(vector, x), state_width and dtype;
    RnnModel and the linear one-pole both qualify. Per sample: read the delayed
    state, evaluate the cell, store the new state, evaluate the head.
    '''
    def __init__(self, system, method):
        self.log = logging.getLogger()
        self.system = system
        self.method = method
        self.adapter = method.new_state(system)
        self.state = np.zeros(system.state_width, dtype=system.dtype)

    def reset(self):
        self.adapter.reset()
        self.state = np.zeros(self.system.state_width, dtype=self.system.dtype)

    def process(self, samples):
        system = self.system
        cell = system.cell
        head = system.head
        delayed = self.adapter.delayed
        blend = self.adapter.blend
        push = self.adapter.push
        xs = np.asarray(samples, dtype=system.dtype)
        out = np.empty(len(xs), dtype=system.dtype)
        state = self.state
        for n, x in enumerate(xs):
            state = blend(state, cell(delayed(state), x))
            push(state)
            out[n] = head(state, x)
        self.state = state
        return out


def step_adapted(model, method, adapter, state, x):
    '''
    Advance one sample at the oversampled rate.

    :param RnnModel model:
    :param AdaptationMethod method: must be the method the adapter was built for
    :param AdapterState adapter: per-stream ring (and all-pass state)
    :param CellState state: state produced at the previous sample
    :param float x: input sample at M*train_rate
    :return: (CellState, y)
    '''
    if adapter.method != method:
        raise AdaptationException("adapter was built for %s, not %s" % (adapter.method.label, method.label))
    vec = model.pack(state)
    x = model.dtype.type(x)
    fresh = adapter.blend(vec, model.cell(adapter.delayed(vec), x))
    adapter.push(fresh)
    return model.unpack(fresh), model.head(fresh, x)


def process_adapted(model, method, input):
    '''
    Run a model over a buffer sampled at method.M * model.train_rate, from zero state.
    '''
    check_rate(input.rate, method.M * model.train_rate,
               "%s at M=%.6g runs at M times the training rate" % (method.kind, method.M))
    return AudioBuffer(AdaptedProcessor(model, method).process(input.samples), input.rate)
