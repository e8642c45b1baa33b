#!/bin/env python
'''
Fidelity metrics for adapted models.

    snr     energy ratio of a reference to its difference from a test signal
    snrh    agreement of the harmonic parts below the base Nyquist limit
    snra    energy of everything in the oversampled output that is not harmonic,
            aliasing mostly, over the base band

Harmonics are read off a Dolph-Chebyshev (120 dB) windowed spectrum. Two extractors:

    peak    the largest bin within a mainlobe (plus one bin) of each k*f0, its
            magnitude scaled by 2/(window gain) and its phase (the default)
    lsq     a weighted least-squares fit of DC plus cos/sin pairs at k*f0, exact
            for purely harmonic signals

snra compares the oversampled output with its harmonic resynthesis either on the
base-rate grid (N points at F_s, the default) or on the output's own N' point grid.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging
import math

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from scipy import fft, linalg
from scipy.signal import windows

from srirnn.adapt import process_adapted
from srirnn.core import AudioBuffer, BinSpacingException, NyquistException, SignalException
from srirnn.resample import resample_fft, resampled_length
from srirnn.rnn import process_baseline

ATTENUATION = 120.0
SETTLE = 0.1
TONE_AMPLITUDE = 0.1
TONE_DURATION = 1.0
# analysis lengths must cover the same time span to within this many seconds
BIN_SPACING_TOLERANCE = 1e-9
# rows of trig evaluations held in memory at once
CHUNK = 32
EXTRACTORS = ('peak', 'lsq')
ALIAS_GRIDS = ('base', 'over')
# faded run-out appended to a tone before FFT upsampling, cut again before analysis, s
TONE_TAIL = 0.1


def _ratio_db(signal, noise):
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def _samples(seconds, rate):
    return int(math.floor(seconds * rate + 0.5))


def _check_same(reference, test):
    if len(reference) != len(test):
        raise SignalException("signals differ in length: %d vs %d" % (len(reference), len(test)))
    if abs(reference.rate - test.rate) > 1e-9 * reference.rate:
        raise SignalException("signals differ in rate: %g vs %g Hz" % (reference.rate, test.rate))


def snr(reference, test):
    '''
    10 log10( sum y^2 / sum (y - y_hat)^2 ), +inf when the two signals are identical.

    :param AudioBuffer reference: y
    :param AudioBuffer test: y_hat
    '''
    _check_same(reference, test)
    y = np.asarray(reference.samples, dtype=np.float64)
    err = y - np.asarray(test.samples, dtype=np.float64)
    energy = float(np.dot(y, y))
    if energy == 0.0:
        raise SignalException("reference signal has zero energy")
    return _ratio_db(energy, float(np.dot(err, err)))


def chebyshev_window(N, attenuation=ATTENUATION):
    '''
    Symmetric Dolph-Chebyshev window with peak 1 and sidelobes at -attenuation dB.
    '''
    if int(N) != N or N < 2:
        raise SignalException("Chebyshev window needs an integer length >= 2, got %r" % N)
    if not attenuation > 0:
        raise SignalException("window attenuation must be positive, got %r" % attenuation)
    w = windows.chebwin(int(N), attenuation, sym=True)
    w = 0.5 * (w + w[::-1])
    return w / np.max(w)


def mainlobe_halfwidth(N, attenuation=ATTENUATION):
    '''
    Distance in DFT bins from the mainlobe peak to its first null.
    '''
    x0 = math.cosh(math.acosh(10.0 ** (attenuation / 20.0)) / (N - 1))
    return (N / math.pi) * math.acos(math.cos(math.pi / (2.0 * (N - 1))) / x0)


@dataclass(frozen=True)
class Harmonic(object):
    frequency: float
    amplitude: float
    phase: float


@dataclass(frozen=True)
class HarmonicSet(object):
    '''
    Harmonic k*f0 components of a periodic signal plus its mean level.
    A component is a*cos(2*pi*f*n/rate + phase), n counted from the first analysed sample.
    '''
    f0: float
    harmonics: Tuple[Harmonic, ...] = ()
    dc: float = 0.0

    def __post_init__(self):
        harmonics = tuple(self.harmonics)
        last = 0.0
        for h in harmonics:
            k = h.frequency / self.f0
            if abs(k - round(k)) > 1e-9 or h.frequency <= last:
                raise SignalException("harmonic frequencies must be increasing multiples of %g Hz" % self.f0)
            if not math.isfinite(h.amplitude) or h.amplitude < 0.0:
                raise SignalException("harmonic amplitude must be finite and non-negative")
            last = h.frequency
        object.__setattr__(self, 'harmonics', harmonics)

    def __len__(self):
        return len(self.harmonics)

    @property
    def frequencies(self):
        return np.array([h.frequency for h in self.harmonics])

    @property
    def amplitudes(self):
        return np.array([h.amplitude for h in self.harmonics])

    @property
    def phases(self):
        return np.array([h.phase for h in self.harmonics])

    def below(self, limit):
        return replace(self, harmonics=tuple(h for h in self.harmonics if h.frequency < limit))


def _window_gain(w, nu):
    '''
    sum_n w[n] cos(nu*(n - c)) for each nu (rad/sample), c the window centre: the
    spectrum of a symmetric window at nu with its linear phase taken out.
    '''
    nu = np.atleast_1d(np.asarray(nu, dtype=np.float64))
    t = np.arange(len(w)) - 0.5 * (len(w) - 1)
    R = np.empty(len(nu))
    for start in range(0, len(nu), CHUNK):
        part = nu[start:start + CHUNK]
        R[start:start + len(part)] = np.cos(np.outer(part, t)) @ w
    return R


def _window_moments(w, theta, count):
    '''
    R[m] = window gain at m*theta, m = 0..count-1.
    '''
    return _window_gain(w, theta * np.arange(count))


def _projections(wx, theta, K):
    '''
    sum_n wx[n] cos(k*theta*(n - c)) for k = 0..K and the matching sines for k = 1..K.
    '''
    t = np.arange(len(wx)) - 0.5 * (len(wx) - 1)
    cos_part = np.empty(K + 1)
    sin_part = np.empty(K + 1)
    for start in range(0, K + 1, CHUNK):
        k = np.arange(start, min(K + 1, start + CHUNK))
        arg = np.outer(k * theta, t)
        cos_part[start:start + len(k)] = np.cos(arg) @ wx
        sin_part[start:start + len(k)] = np.sin(arg) @ wx
    return cos_part, sin_part[1:]


def _solve(G, b):
    if not len(b):
        return b
    try:
        return linalg.solve(G, b, assume_a='pos')
    except (linalg.LinAlgError, ValueError):
        logging.getLogger().debug("normal equations not positive definite, using least squares")
        return linalg.lstsq(G, b)[0]


def _peak_bin(spectrum, target, halfwidth):
    '''
    Index of the largest value within ceil(halfwidth) + 1 bins of target.
    '''
    reach = int(math.ceil(halfwidth)) + 1
    lo = max(0, int(round(target)) - reach)
    hi = min(len(spectrum), int(round(target)) + reach + 1)
    return lo + int(np.argmax(spectrum[lo:hi]))


def _peak_fit(x, w, f0, rate, K, attenuation):
    '''
    Reads harmonics 1..K off the windowed spectrum, one peak bin each.

    The bin's magnitude is scaled by 2 over the window gain at the distance between
    k*f0 and that bin, which on the bin itself is 2/(coherent gain * length), and its
    phase is referred back to k*f0. DC is the window-weighted mean.
    '''
    N = len(x)
    X = fft.rfft(w * x)
    magnitude = np.abs(X)
    halfwidth = mainlobe_halfwidth(N, attenuation)
    target = np.arange(1, K + 1) * f0 * N / rate
    bins = np.array([_peak_bin(magnitude, b, halfwidth) for b in target], dtype=int)
    offset = target - bins
    # a pick further than one bin off lies on a neighbour's skirt, not this mainlobe
    offset[np.abs(offset) > 1.0] = 0.0
    nu = 2.0 * math.pi * offset / N
    amplitude = 2.0 * magnitude[bins] / _window_gain(w, nu)
    phase = np.angle(X[bins]) - nu * 0.5 * (N - 1)
    harmonics = tuple(Harmonic(j * f0, float(a), math.remainder(float(p), 2.0 * math.pi))
                      for j, a, p in zip(range(1, K + 1), amplitude, phase))
    return harmonics, float(X[0].real) / float(np.sum(w))


def _lsq_fit(x, w, f0, rate, K):
    '''
    Weighted least-squares fit of DC and harmonics 1..K. The normal equations come
    from window moments, so leakage between harmonics drops out.
    '''
    N = len(x)
    theta = 2.0 * math.pi * f0 / rate
    R = _window_moments(w, theta, 2 * K + 1)

    k = np.arange(K + 1)
    diff = np.abs(k[:, None] - k[None, :])
    total = k[:, None] + k[None, :]
    G_cos = 0.5 * (R[diff] + R[total])
    G_sin = 0.5 * (R[diff[1:, 1:]] - R[total[1:, 1:]])
    b_cos, b_sin = _projections(w * x, theta, K)
    p = _solve(G_cos, b_cos)
    s = _solve(G_sin, b_sin)

    centre = 0.5 * (N - 1)
    harmonics = []
    for j in range(1, K + 1):
        amplitude = math.hypot(p[j], s[j - 1])
        phase = math.remainder(math.atan2(-s[j - 1], p[j]) - j * theta * centre, 2.0 * math.pi)
        harmonics.append(Harmonic(j * f0, amplitude, phase))
    return tuple(harmonics), float(p[0])


def _check_extractor(extractor):
    if extractor not in EXTRACTORS:
        raise SignalException("unknown harmonic extractor %r, expected one of %s" % (extractor,
                                                                                    list(EXTRACTORS)))


def extract_harmonics(signal, f0, f_max=None, attenuation=ATTENUATION, extractor='peak'):
    '''
    Amplitude and phase of every harmonic k*f0 <= f_max (and below Nyquist), plus DC.

    The signal is weighted with chebyshev_window(len, attenuation). The 'peak'
    extractor reads each harmonic off the spectrum on its own; 'lsq' fits the whole
    series at once and recovers harmonic signals exactly.

    :param AudioBuffer signal:
    :param float f0: fundamental, Hz
    :param float f_max: highest harmonic frequency, defaults to rate/2
    :param str extractor: 'peak' or 'lsq'
    :rtype: HarmonicSet
    '''
    _check_extractor(extractor)
    rate = signal.rate
    if not f0 > 0:
        raise SignalException("fundamental must be positive, got %r" % f0)
    if f0 >= rate / 2.0:
        raise NyquistException("fundamental %g Hz is not below the Nyquist limit of %g Hz" % (f0, rate / 2.0))
    if f_max is None:
        f_max = rate / 2.0
    x = np.asarray(signal.samples, dtype=np.float64)
    w = chebyshev_window(len(x), attenuation)

    K = int(math.floor(f_max / f0 + 1e-9))
    while K > 0 and K * f0 >= rate / 2.0:
        K -= 1
    if extractor == 'peak':
        harmonics, dc = _peak_fit(x, w, f0, rate, K, attenuation)
    else:
        harmonics, dc = _lsq_fit(x, w, f0, rate, K)
    logging.getLogger().debug("Extracted %d harmonics of %g Hz over %d samples at %g Hz (%s)" % (
        K, f0, len(x), rate, extractor))
    return HarmonicSet(f0, harmonics, dc)


def synth_harmonics(harmonics, rate, n):
    '''
    dc + sum_k a_k cos(2*pi*f_k*n/rate + phi_k) over n samples.
    '''
    for h in harmonics.harmonics:
        if h.frequency >= rate / 2.0:
            raise NyquistException("harmonic at %g Hz is not below the Nyquist limit of %g Hz" % (
                h.frequency, rate / 2.0))
    t = np.arange(int(n), dtype=np.float64)
    y = np.full(int(n), harmonics.dc, dtype=np.float64)
    items = harmonics.harmonics
    for start in range(0, len(items), CHUNK):
        part = items[start:start + CHUNK]
        omega = np.array([2.0 * math.pi * h.frequency / rate for h in part])
        amp = np.array([h.amplitude for h in part])
        phase = np.array([h.phase for h in part])
        y += amp @ np.cos(np.outer(omega, t) + phase[:, None])
    return AudioBuffer(y, rate)


def _settled(signal, settle):
    skip = _samples(settle, signal.rate) if settle > 0 else 0
    if skip >= len(signal) - 1:
        raise SignalException("%g s settling time leaves nothing of a %d sample signal" % (settle, len(signal)))
    return AudioBuffer(signal.samples[skip:], signal.rate)


def _base_length(n_over, rate_over, base_rate):
    '''
    Base-rate length spanning the same time as n_over samples at rate_over.
    '''
    n = int(round(n_over * base_rate / rate_over))
    if abs(n / base_rate - n_over / rate_over) > BIN_SPACING_TOLERANCE:
        raise BinSpacingException("%d samples at %g Hz and %d samples at %g Hz have different bin spacings" % (
            n_over, rate_over, n, base_rate))
    return n


def _check_grid(grid):
    if grid not in ALIAS_GRIDS:
        raise SignalException("unknown alias grid %r, expected one of %s" % (grid, list(ALIAS_GRIDS)))


def snra(y_tilde, f0, F_s, settle=SETTLE, attenuation=ATTENUATION, extractor='peak', grid='base'):
    '''
    Aliasing metric of an oversampled output, in dB.

    After the settling time the N' analysed samples of y_tilde are windowed and
    transformed, and its harmonics below F_s/2 are resynthesised as the alias-free
    y_BL. With grid 'base' y_BL is synthesised at F_s over N = N'*F_s/rate samples
    and windowed with an N point window; with grid 'over' it is synthesised on
    y_tilde's own N' point grid. Both spectra have the same bin spacing. Y_BL is
    scaled so the first harmonics peak equally and the result is

        sum |Y_BL[k]|^2 / sum (|Y[k]| - |Y_BL[k]|)^2,   k = 0..N/2

    :param AudioBuffer y_tilde: adapted output at M*F_s
    :param str extractor: 'peak' or 'lsq', see extract_harmonics
    :param str grid: 'base' or 'over'
    '''
    _check_extractor(extractor)
    _check_grid(grid)
    ys = _settled(y_tilde, settle)
    rate = ys.rate
    n_over = len(ys)
    N = _base_length(n_over, rate, F_s)
    if f0 >= F_s / 2.0:
        raise NyquistException("fundamental %g Hz is not below the base Nyquist limit of %g Hz" % (f0, F_s / 2.0))

    bins = N // 2 + 1
    Y = np.abs(fft.rfft(chebyshev_window(n_over, attenuation) * ys.samples.astype(np.float64)))[:bins]
    # the joint fit needs every harmonic in the signal, peak reading only the ones kept
    f_max = rate / 2.0 if extractor == 'lsq' else F_s / 2.0
    harmonics = extract_harmonics(ys, f0, f_max, attenuation, extractor).below(F_s / 2.0)
    if grid == 'base':
        y_bl = synth_harmonics(harmonics, F_s, N)
    else:
        y_bl = synth_harmonics(harmonics, rate, n_over)
    n_bl = len(y_bl)
    Y_bl = np.abs(fft.rfft(chebyshev_window(n_bl, attenuation) * y_bl.samples))[:bins]

    target = f0 * N / F_s
    peak = Y[_peak_bin(Y, target, mainlobe_halfwidth(n_over, attenuation))]
    peak_bl = Y_bl[_peak_bin(Y_bl, target, mainlobe_halfwidth(n_bl, attenuation))]
    if peak_bl == 0.0:
        raise SignalException("no first harmonic at %g Hz to scale against" % f0)
    Y_bl = Y_bl * (peak / peak_bl)
    return _ratio_db(float(np.dot(Y_bl, Y_bl)), float(np.sum((Y - Y_bl) ** 2)))


def snrh(y_base, y_tilde, f0, F_s, settle=SETTLE, attenuation=ATTENUATION, extractor='peak'):
    '''
    Harmonic agreement of the adapted output with the baseline, in dB.

    Harmonics below F_s/2 are extracted from both signals and synthesised at F_s
    over the N analysed baseline samples:

        sum y_BL^2 / sum (y_BL - y~_BL)^2
    '''
    _check_extractor(extractor)
    if abs(y_base.rate - F_s) > 1e-9 * F_s:
        raise BinSpacingException("baseline is at %g Hz, not the base rate %g Hz" % (y_base.rate, F_s))
    yb = _settled(y_base, settle)
    yt = _settled(y_tilde, settle)
    N = _base_length(len(yt), yt.rate, F_s)
    if N != len(yb):
        raise BinSpacingException("%d baseline samples and %d samples at %g Hz have different bin spacings" % (
            len(yb), len(yt), yt.rate))

    f_max = yt.rate / 2.0 if extractor == 'lsq' else F_s / 2.0
    base_set = extract_harmonics(yb, f0, F_s / 2.0, attenuation, extractor)
    tilde_set = extract_harmonics(yt, f0, f_max, attenuation, extractor).below(F_s / 2.0)
    y_bl = synth_harmonics(base_set.below(F_s / 2.0), F_s, N).samples
    yt_bl = synth_harmonics(tilde_set, F_s, N).samples
    err = y_bl - yt_bl
    energy = float(np.dot(y_bl, y_bl))
    if energy == 0.0:
        raise SignalException("baseline has no harmonic content at %g Hz" % f0)
    return _ratio_db(energy, float(np.dot(err, err)))


def piano_tones():
    '''
    The 88 piano key fundamentals, 27.5 Hz to about 4186 Hz.
    '''
    return [27.5 * 2.0 ** (k / 12.0) for k in range(88)]


@dataclass(frozen=True)
class ToneSpec(object):
    f0: float
    rate: float
    duration: float = TONE_DURATION
    amplitude: float = TONE_AMPLITUDE

    def __post_init__(self):
        if not self.f0 > 0:
            raise SignalException("tone frequency must be positive, got %r" % self.f0)
        if self.f0 >= self.rate / 2.0:
            raise NyquistException("tone at %g Hz is not below the Nyquist limit of %g Hz" % (self.f0,
                                                                                            self.rate / 2.0))
        if not self.duration > 0:
            raise SignalException("tone duration must be positive, got %r" % self.duration)

    @property
    def length(self):
        return _samples(self.duration, self.rate)

    def at(self, rate):
        return replace(self, rate=float(rate))

    def render(self, tail=0.0):
        '''
        The tone, continued for `tail` seconds under a raised-cosine fade to zero.
        '''
        fade = _samples(tail, self.rate) if tail > 0 else 0
        n = np.arange(self.length + fade, dtype=np.float64)
        y = self.amplitude * np.sin(2.0 * np.pi * self.f0 * n / self.rate)
        if fade:
            y[self.length:] *= 0.5 * (1.0 + np.cos(np.pi * np.arange(1, fade + 1) / fade))
        return AudioBuffer(y, self.rate)


@dataclass(frozen=True)
class ToneMeasurement(object):
    f0: float
    snrh_db: float
    snra_db: float


def upsampled_tone(tone, rate, tail=TONE_TAIL):
    '''
    The tone rendered at its own rate and FFT-resampled to `rate`.

    The FFT treats the tone as periodic, so it is rendered with a faded run-out
    that keeps the wrap-around smooth; the run-out is part of the returned buffer.
    '''
    return resample_fft(tone.render(tail), rate)


def measure_tone(model, method, tone, baseline=None, settle=SETTLE, extractor='peak', grid='base'):
    '''
    SNRH and SNRA of one adapted model on one tone.

    The tone is rendered at the model's training rate for the baseline. For the
    adapted run that rendering is FFT-upsampled to M times the rate, processed,
    and cut back to the tone's length before measuring.

    :param RnnModel model:
    :param AdaptationMethod method:
    :param ToneSpec tone: rate is replaced by the model's training rate
    :param AudioBuffer baseline: precomputed baseline output for this tone, optional
    :param str extractor: harmonic extractor, 'peak' or 'lsq'
    :param str grid: SNRA comparison grid, 'base' or 'over'
    :rtype: ToneMeasurement
    '''
    F_s = model.train_rate
    tone = tone.at(F_s)
    if baseline is None:
        baseline = process_baseline(model, tone.render())
    rate = method.M * F_s
    y_tilde = process_adapted(model, method, upsampled_tone(tone, rate))
    y_tilde = AudioBuffer(y_tilde.samples[:resampled_length(tone.length, F_s, rate)], y_tilde.rate)
    return ToneMeasurement(tone.f0,
                           snrh(baseline, y_tilde, tone.f0, F_s, settle, extractor=extractor),
                           snra(y_tilde, tone.f0, F_s, settle, extractor=extractor, grid=grid))


def audio_snr(model, method, audio):
    '''
    SNR of the adapted model against the baseline on recorded audio at the training rate.
    The input is FFT-resampled to M*F_s, processed, and resampled back.
    '''
    baseline = process_baseline(model, audio)
    up = resample_fft(audio, method.M * model.train_rate)
    down = resample_fft(process_adapted(model, method, up), model.train_rate)
    n = min(len(baseline), len(down))
    return snr(AudioBuffer(baseline.samples[:n], baseline.rate), AudioBuffer(down.samples[:n], down.rate))
