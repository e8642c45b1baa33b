#!/bin/env python
'''
One-pole test system h[n] = A*h[n-1] + x[n] and the closed-form responses of
each adaptation method applied to it. These are the analytic reference for
the simulated adapted processors.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging
import math

from dataclasses import dataclass

import numpy as np
from scipy import fft

from srirnn.adapt import AdaptationMethod, AdaptedProcessor, DELAY_METHODS
from srirnn.core import SignalException

BASE_RATE = 44100.0
# pole used for the single-pole comparisons: f_c = 10 kHz at 44.1 kHz
REFERENCE_CUTOFF = 10000.0
REFERENCE_POLE = math.exp(-2.0 * math.pi * REFERENCE_CUTOFF / BASE_RATE)

GRID_POINTS = 4096
GRID_FMIN = 10.0
GRID_FMAX = 22040.0
SWEEP_POINTS = 64
SWEEP_FMIN = 20.0
SWEEP_FMAX = 20000.0
EXTRA_POLES = (0.999, 0.9999)
IMPULSE_LENGTH = 2 ** 17
DECAY_FLOOR = 1e-12


@dataclass(frozen=True)
class OnePole(object):
    '''
    Pole A = exp(-2*pi*f_c/F_s) together with the cutoff and base rate it came from.
    '''
    A: float
    f_c: float
    F_s: float = BASE_RATE

    def __post_init__(self):
        if not 0.0 < self.A < 1.0:
            raise SignalException("one-pole coefficient must lie in (0, 1), got %r" % self.A)
        if abs(self.A - math.exp(-2.0 * math.pi * self.f_c / self.F_s)) > 1e-12:
            raise SignalException("pole %r does not match cutoff %r Hz at %r Hz" % (self.A, self.f_c, self.F_s))

    @classmethod
    def from_cutoff(cls, f_c, F_s=BASE_RATE):
        return cls(math.exp(-2.0 * math.pi * f_c / F_s), f_c, F_s)

    @classmethod
    def from_pole(cls, A, F_s=BASE_RATE):
        return cls(A, -math.log(A) * F_s / (2.0 * math.pi), F_s)


@dataclass(frozen=True, eq=False)
class FrequencyResponseCurve(object):
    '''
    Complex response on an angular-frequency grid (rad/s).
    '''
    omega: np.ndarray
    H: np.ndarray
    method: str
    M: float
    A: float
    T: float = 1.0 / BASE_RATE

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=np.float64)
        H = np.asarray(self.H, dtype=np.complex128)
        if omega.shape != H.shape:
            raise SignalException("grid of %d points carries %d response values" % (omega.size, H.size))
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, 'H', H)

    @property
    def frequency(self):
        return self.omega / (2.0 * np.pi)

    @property
    def magnitude_db(self):
        return 20.0 * np.log10(np.abs(self.H))


class OnePoleSystem(object):
    '''
    The one-pole recursion in the form the adapted processors drive:
    a one-element state, cell f(h, x) = A*h + x and head g(h, x) = h.
    '''
    state_width = 1

    def __init__(self, A, dtype=np.float64):
        self.dtype = np.dtype(dtype)
        self.A = self.dtype.type(A)

    def cell(self, vec, x):
        return self.A * vec + x

    def head(self, vec, x):
        return vec[0]


def _method(method, M):
    if isinstance(method, AdaptationMethod):
        if M is not None and float(M) != method.M:
            return AdaptationMethod(method.kind, M)
        return method
    return AdaptationMethod(method, 1.0 if M is None else M)


def base_response(omega, A, T=1.0 / BASE_RATE):
    '''
    1/(1 - A e^{-j omega T})
    '''
    return 1.0 / (1.0 - A * np.exp(-1j * np.asarray(omega, dtype=np.float64) * T))


def analytic_response(method, omega, A, M, T=1.0 / BASE_RATE):
    '''
    Closed-form response of the one-pole run at M times its rate through an adaptation method.

    :param method: method kind or AdaptationMethod
    :param omega: angular frequency, rad/s (scalar or array)
    :param float A: pole
    :param float M: oversampling factor
    :param float T: base sampling period, s
    :return: complex response, same shape as omega
    '''
    method = _method(method, M)
    M = method.M
    omega = np.asarray(omega, dtype=np.float64)
    z = np.exp(-1j * omega * (T / M))
    kind = method.kind
    d = math.floor(M)

    if kind == 'Naive':
        return 1.0 / (1.0 - A * z)
    if kind == 'STN':
        return 1.0 / (M - (M + A - 1.0) * z)
    if kind == 'Delay':
        return 1.0 / (1.0 - A * z ** method.delay)
    if kind in DELAY_METHODS and method.integer:
        return 1.0 / (1.0 - A * z ** d)
    if kind == 'LIDL':
        delta = method.delta
        return 1.0 / (1.0 - A * ((1.0 - delta) * z ** d + delta * z ** (d + 1)))
    if kind == 'APDL':
        eta = method.eta
        return (1.0 + eta * z) / (1.0 + eta * z - A * z ** d * (eta + z))
    if kind == 'CIDL':
        taps = sum(l * z ** (k + method.gamma) for k, l in enumerate(method.kernel))
        return 1.0 / (1.0 - A * taps)
    raise SignalException("no analytic response for method %r" % kind)


def response_curve(method, M, A, frequencies=None, base_rate=BASE_RATE):
    method = _method(method, M)
    if frequencies is None:
        frequencies = frequency_grid()
    omega = 2.0 * np.pi * np.asarray(frequencies, dtype=np.float64)
    T = 1.0 / base_rate
    return FrequencyResponseCurve(omega, analytic_response(method, omega, A, method.M, T),
                                  method.kind, method.M, A, T)


def simulate_onepole(method, M, A, n_samples=IMPULSE_LENGTH, dtype=np.float64):
    '''
    Unit-pulse response of the one-pole system streamed through an adapted processor.
    '''
    log = logging.getLogger()
    method = _method(method, M)
    pulse = np.zeros(int(n_samples), dtype=dtype)
    if len(pulse):
        pulse[0] = 1.0
    h = AdaptedProcessor(OnePoleSystem(A, dtype), method).process(pulse)
    tail = np.max(np.abs(h[-(method.capacity + 1):])) if len(h) else 0.0
    if tail > DECAY_FLOOR:
        log.warning("%s impulse response of %d samples has not decayed (tail %.3g > %g) for A=%r" % (
            method.label, len(h), tail, DECAY_FLOOR, A))
    return h


def oracle_error(method, M, A, n_samples=2 ** 14, base_rate=BASE_RATE):
    '''
    Largest relative difference between the DFT of the simulated impulse response and
    the analytic response, over the non-negative DFT bins.
    '''
    method = _method(method, M)
    h = simulate_onepole(method, method.M, A, n_samples)
    simulated = fft.rfft(h)
    omega = 2.0 * np.pi * np.arange(len(simulated)) * (method.M * base_rate) / n_samples
    analytic = analytic_response(method, omega, A, method.M, 1.0 / base_rate)
    return float(np.max(np.abs(simulated - analytic) / np.abs(analytic)))


def spectral_error(H_method, H_base, omega=None):
    '''
    20 log10 |H_method / H_base| in dB.

    Takes two FrequencyResponseCurves on the same grid, or two complex arrays.
    '''
    if isinstance(H_method, FrequencyResponseCurve) or isinstance(H_base, FrequencyResponseCurve):
        if not (isinstance(H_method, FrequencyResponseCurve) and isinstance(H_base, FrequencyResponseCurve)):
            raise SignalException("spectral error needs two curves or two arrays")
        if not np.array_equal(H_method.omega, H_base.omega):
            raise SignalException("cannot compare responses on different frequency grids")
        H_method, H_base = H_method.H, H_base.H
    H_method = np.asarray(H_method, dtype=np.complex128)
    H_base = np.asarray(H_base, dtype=np.complex128)
    if H_method.shape != H_base.shape:
        raise SignalException("response shapes differ: %s vs %s" % (H_method.shape, H_base.shape))
    if omega is not None and np.shape(omega) != H_base.shape:
        raise SignalException("grid shape %s does not match responses %s" % (np.shape(omega), H_base.shape))
    if np.any(H_base == 0):
        raise SignalException("base response is zero on the grid")
    return 20.0 * np.log10(np.abs(H_method / H_base))


def frequency_grid(points=GRID_POINTS, fmin=GRID_FMIN, fmax=GRID_FMAX):
    '''
    Logarithmically spaced frequencies in Hz, endpoints included.
    '''
    if points < 1 or not 0.0 < fmin <= fmax:
        raise SignalException("invalid frequency grid: %d points over [%r, %r] Hz" % (points, fmin, fmax))
    return np.geomspace(fmin, fmax, int(points))


def mean_spectral_error(method, M, A, frequencies=None, base_rate=BASE_RATE):
    '''
    Mean of |L| over the grid (default: 4096 log-spaced points, 10 Hz to 22.04 kHz).
    '''
    method = _method(method, M)
    if frequencies is None:
        frequencies = frequency_grid()
    frequencies = np.asarray(frequencies, dtype=np.float64)
    if np.any(frequencies <= 0.0) or np.any(frequencies >= base_rate / 2.0):
        raise SignalException("mean spectral error is taken strictly inside (0, %g) Hz" % (base_rate / 2.0))
    omega = 2.0 * np.pi * frequencies
    T = 1.0 / base_rate
    L = spectral_error(analytic_response(method, omega, A, method.M, T), base_response(omega, A, T))
    return float(np.mean(np.abs(L)))


def pole_grid(points=SWEEP_POINTS, fmin=SWEEP_FMIN, fmax=SWEEP_FMAX, extra=EXTRA_POLES, base_rate=BASE_RATE):
    '''
    OnePoles for log-spaced cutoffs fmin..fmax followed by the extra pole values,
    ordered by decreasing cutoff.
    '''
    poles = [OnePole.from_cutoff(f_c, base_rate) for f_c in frequency_grid(points, fmin, fmax)]
    poles.extend(OnePole.from_pole(A, base_rate) for A in extra)
    return sorted(poles, key=lambda p: -p.f_c)


def pole_sweep(method, M, A_grid, frequencies=None, base_rate=BASE_RATE):
    '''
    Mean spectral error at every pole of A_grid (floats or OnePoles).
    '''
    log = logging.getLogger()
    method = _method(method, M)
    if frequencies is None:
        frequencies = frequency_grid()
    values = np.array([mean_spectral_error(method, method.M, getattr(A, 'A', A), frequencies, base_rate)
                       for A in A_grid])
    log.debug("Pole sweep %s over %d poles" % (method.label, len(values)))
    return values
