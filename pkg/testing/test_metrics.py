#
# SNR, harmonic extraction, SNRA and SNRH.
#
import math

import numpy as np
import pytest
from scipy import fft

from srirnn.adapt import AdaptationMethod
from srirnn.core import AudioBuffer, BinSpacingException, NyquistException, SignalException
from srirnn.metrics import Harmonic, HarmonicSet, ToneSpec, audio_snr, chebyshev_window, extract_harmonics
from srirnn.metrics import TONE_TAIL, mainlobe_halfwidth, measure_tone, piano_tones, snr, snra, snrh, synth_harmonics
from srirnn.metrics import upsampled_tone
from srirnn.resample import resample_fft


def tone(f0, rate, n, amplitude=1.0, phase=0.0):
    return amplitude * np.sin(2.0 * np.pi * f0 * np.arange(n) / rate + phase)


def clipped(f0, rate, n):
    return AudioBuffer(np.clip(tone(f0, rate, n), -0.5, 0.5), rate)


def test_snr_values(rng):
    y = AudioBuffer(rng.uniform(-1, 1, 1000), 44100)
    assert snr(y, y) == math.inf
    assert snr(y, AudioBuffer(y.samples * (1.0 - 1e-3), 44100)) == pytest.approx(60.0, abs=1e-9)

    ones = AudioBuffer(np.ones(4), 44100)
    bumped = np.ones(4)
    bumped[2] += 0.5
    assert snr(ones, AudioBuffer(bumped, 44100)) == pytest.approx(10.0 * math.log10(4.0 / 0.25), abs=1e-12)


def test_snr_is_scale_invariant(rng):
    y = rng.uniform(-1, 1, 500)
    y_hat = y + rng.normal(0, 1e-3, 500)
    a = snr(AudioBuffer(y, 44100), AudioBuffer(y_hat, 44100))
    b = snr(AudioBuffer(4.0 * y, 44100), AudioBuffer(4.0 * y_hat, 44100))
    assert a == b


def test_snr_errors():
    with pytest.raises(SignalException):
        snr(AudioBuffer(np.ones(4), 44100), AudioBuffer(np.ones(5), 44100))
    with pytest.raises(SignalException):
        snr(AudioBuffer(np.zeros(4), 44100), AudioBuffer(np.ones(4), 44100))
    with pytest.raises(SignalException):
        AudioBuffer(np.array([0.0, np.inf]), 44100)


def test_chebyshev_window_shape():
    w = chebyshev_window(64)
    assert len(w) == 64
    assert np.max(w) == 1.0
    np.testing.assert_array_equal(w, w[::-1])
    with pytest.raises(SignalException):
        chebyshev_window(1)
    with pytest.raises(SignalException):
        chebyshev_window(10.5)


def test_chebyshev_sidelobes():
    N = 64
    pad = 64
    W = np.abs(fft.rfft(chebyshev_window(N), N * pad))
    W_db = 20.0 * np.log10(np.maximum(W / W[0], 1e-300))
    first_null = int(math.ceil(mainlobe_halfwidth(N) * pad))
    assert np.max(W_db[first_null:]) <= -119.5
    assert mainlobe_halfwidth(N, 120.0) > mainlobe_halfwidth(N, 60.0)


# worst-case leakage through 120 dB sidelobes, relative to the largest component
PEAK_LEAKAGE = 5e-6
EXACT = {'peak': PEAK_LEAKAGE, 'lsq': 1e-9}


@pytest.mark.parametrize('extractor', ['peak', 'lsq'])
def test_extract_single_sine(extractor):
    x = AudioBuffer(tone(441, 44100, 44100, 0.5), 44100)
    harmonics = extract_harmonics(x, 441, 441, extractor=extractor)
    assert len(harmonics) == 1
    h = harmonics.harmonics[0]
    assert h.frequency == 441
    assert h.amplitude == pytest.approx(0.5, abs=EXACT[extractor])
    assert h.phase == pytest.approx(-math.pi / 2.0, abs=EXACT[extractor])
    assert abs(harmonics.dc) < EXACT[extractor]

    full = extract_harmonics(x, 441, extractor=extractor)
    assert len(full) == 49
    assert np.all(full.amplitudes[1:] < EXACT[extractor])


def test_peak_reading_of_an_off_bin_sine():
    n = 44100
    x = AudioBuffer(tone(441.37, 44100, n, 0.25, 0.4), 44100)
    X = fft.rfft(chebyshev_window(n) * x.samples)
    assert int(np.argmax(np.abs(X))) == 441
    h = extract_harmonics(x, 441.37, 441.37).harmonics[0]
    assert h.amplitude == pytest.approx(0.25, abs=PEAK_LEAKAGE)
    assert h.phase == pytest.approx(0.4 - math.pi / 2.0, abs=PEAK_LEAKAGE)


@pytest.mark.parametrize('extractor, even_limit', [('peak', 1e-5), ('lsq', 1e-6)])
def test_extract_clipped_sine_has_odd_harmonics_only(extractor, even_limit):
    harmonics = extract_harmonics(clipped(441, 44100, 44100), 441, 20000, extractor=extractor)
    a = harmonics.amplitudes
    assert len(a) == 45
    assert np.all(a[1::2] < even_limit * a[0])
    assert a[2] > 1e-3 * a[0]


@pytest.mark.parametrize('extractor', ['peak', 'lsq'])
@pytest.mark.parametrize('f0', [440.0, 441.3])
def test_extract_two_components(f0, extractor):
    n = 44100
    x = AudioBuffer(tone(f0, 44100, n) + tone(3 * f0, 44100, n, 0.1, 0.7), 44100)
    harmonics = extract_harmonics(x, f0, 3 * f0, extractor=extractor)
    a = harmonics.amplitudes
    tol = max(EXACT[extractor], 1e-6)
    assert a[0] == pytest.approx(1.0, abs=tol)
    assert a[1] == pytest.approx(0.0, abs=tol)
    assert a[2] == pytest.approx(0.1, abs=tol)
    assert harmonics.phases[0] == pytest.approx(-math.pi / 2.0, abs=tol)
    # the weaker component carries the fundamental's leakage relative to its own size
    assert harmonics.phases[2] == pytest.approx(0.7 - math.pi / 2.0, abs=10.0 * tol)


def test_extract_errors():
    x = AudioBuffer(np.ones(100), 44100)
    with pytest.raises(NyquistException):
        extract_harmonics(x, 22050)
    with pytest.raises(SignalException):
        extract_harmonics(x, 0.0)
    with pytest.raises(SignalException):
        extract_harmonics(x, 441, extractor='fit')


@pytest.mark.parametrize('extractor', ['peak', 'lsq'])
def test_synth_and_extract_agree(extractor):
    x = clipped(441, 44100, 44100)
    first = extract_harmonics(x, 441, 20000, extractor=extractor)
    y = synth_harmonics(first, 44100, len(x))
    second = extract_harmonics(y, 441, 20000, extractor=extractor)
    tol = EXACT[extractor]
    np.testing.assert_allclose(second.amplitudes, first.amplitudes, rtol=0, atol=tol)
    strong = first.amplitudes > 1e-3 if extractor == 'lsq' else first.amplitudes > 0.05
    np.testing.assert_allclose(second.phases[strong], first.phases[strong], rtol=0, atol=20.0 * tol)
    assert second.dc == pytest.approx(first.dc, abs=tol)


def test_synth_edge_cases():
    assert not np.any(synth_harmonics(HarmonicSet(440.0), 44100, 64).samples)
    with pytest.raises(NyquistException):
        synth_harmonics(HarmonicSet(10000.0, (Harmonic(30000.0, 1.0, 0.0),)), 44100, 64)


def test_harmonic_set():
    s = HarmonicSet(100.0, (Harmonic(100.0, 1.0, 0.0), Harmonic(200.0, 0.5, 0.1), Harmonic(300.0, 0.2, 0.0)))
    assert len(s) == 3
    assert len(s.below(300.0)) == 2
    np.testing.assert_array_equal(s.frequencies, [100.0, 200.0, 300.0])
    with pytest.raises(SignalException):
        HarmonicSet(100.0, (Harmonic(150.0, 1.0, 0.0),))
    with pytest.raises(SignalException):
        HarmonicSet(100.0, (Harmonic(100.0, -1.0, 0.0),))


@pytest.mark.parametrize('extractor', ['peak', 'lsq'])
@pytest.mark.parametrize('grid', ['base', 'over'])
def test_snra_constructed_alias(extractor, grid):
    rate, n, b = 88200, 88200, 1e-3
    t = np.arange(n) / rate
    y = (np.cos(2.0 * np.pi * 441 * t) + 0.1 * np.cos(2.0 * np.pi * 1323 * t + 0.7)
         + b * np.cos(2.0 * np.pi * 1000 * t + 0.3))
    expected = 10.0 * math.log10((1.0 + 0.01) / b ** 2)
    measured = snra(AudioBuffer(y, rate), 441, 44100, extractor=extractor, grid=grid)
    assert measured == pytest.approx(expected, abs=0.1)


def test_snra_of_pure_tone_is_high():
    y = AudioBuffer(tone(1000, 88200, 88200, 0.1), 88200)
    # base grid: the N and N' point windows' sidelobes differ, which bounds the result
    assert snra(y, 1000, 44100) > 80.0
    assert snra(y, 1000, 44100, grid='over') > 100.0
    assert snra(y, 1000, 44100, extractor='lsq', grid='over') > 100.0


def test_snra_at_base_rate_is_grid_independent():
    y = clipped(1000, 44100, 44100)
    assert snra(y, 1000, 44100) == snra(y, 1000, 44100, grid='over')


def test_snra_improves_with_oversampling():
    f0 = 4186.0
    base = snra(clipped(f0, 44100, 44100), f0, 44100)
    doubled = snra(clipped(f0, 88200, 88200), f0, 44100)
    assert doubled > base + 3.0


def test_snra_bin_spacing_and_nyquist():
    with pytest.raises(BinSpacingException):
        snra(AudioBuffer(tone(1000, 96000, 96001), 96000), 1000, 44100)
    with pytest.raises(NyquistException):
        snra(AudioBuffer(tone(1000, 88200, 88200), 88200), 23000, 44100)
    with pytest.raises(SignalException):
        snra(AudioBuffer(tone(1000, 88200, 88200), 88200), 1000, 44100, grid='fine')


@pytest.mark.parametrize('extractor', ['peak', 'lsq'])
def test_snrh_of_exact_resample(extractor):
    base = AudioBuffer(tone(441, 44100, 44100, 0.1), 44100)
    assert snrh(base, resample_fft(base, 88200), 441, 44100, extractor=extractor) > 100.0


def test_snrh_bin_spacing():
    base = AudioBuffer(tone(441, 44100, 44100, 0.1), 44100)
    with pytest.raises(BinSpacingException):
        snrh(base, AudioBuffer(tone(441, 88200, 88000, 0.1), 88200), 441, 44100)
    with pytest.raises(BinSpacingException):
        snrh(AudioBuffer(base.samples, 48000), resample_fft(base, 88200), 441, 44100)


def test_identity_model_measurements(identity_model):
    at_one = measure_tone(identity_model, AdaptationMethod('Delay', 1.0), ToneSpec(441.0, 44100))
    assert at_one.snrh_db == math.inf
    assert at_one.snra_db > 100.0
    at_two = measure_tone(identity_model, AdaptationMethod('Delay', 2.0), ToneSpec(441.0, 44100))
    assert at_two.snrh_db > 100.0
    exact = measure_tone(identity_model, AdaptationMethod('Delay', 2.0), ToneSpec(441.0, 44100),
                         extractor='lsq', grid='over')
    assert exact.snrh_db > 100.0
    assert exact.snra_db > 100.0


def test_tone_is_upsampled_from_the_base_rendering():
    tone_spec = ToneSpec(1000.0, 44100, 0.5)
    up = upsampled_tone(tone_spec, 88200)
    assert up.rate == 88200
    assert len(up) == 2 * (tone_spec.length + 4410)
    base = tone_spec.render(TONE_TAIL).samples
    np.testing.assert_allclose(up.samples[::2], base, rtol=0, atol=1e-12)
    direct = tone_spec.at(88200).render().samples
    settled = slice(8820, 2 * tone_spec.length)
    np.testing.assert_allclose(up.samples[settled], direct[settled], rtol=0, atol=1e-5)


def test_tone_tail_fades_out():
    tone_spec = ToneSpec(1000.0, 44100, 0.2)
    plain = tone_spec.render().samples
    tailed = tone_spec.render(0.05).samples
    assert len(tailed) == len(plain) + 2205
    np.testing.assert_allclose(tailed[:len(plain)], plain, rtol=0, atol=1e-15)
    assert tailed[-1] == 0.0
    assert np.all(np.abs(tailed[len(plain):]) <= 0.1)


def test_fractional_rate_measurement_of_identity(identity_model):
    method = AdaptationMethod('CIDL', 96000.0 / 44100.0)
    result = measure_tone(identity_model, method, ToneSpec(1000.0, 44100, 0.5))
    assert result.snrh_db > 100.0
    assert result.snra_db > 80.0


def test_delay_at_integer_m_keeps_harmonics(driven_lstm):
    result = measure_tone(driven_lstm, AdaptationMethod('Delay', 2.0), ToneSpec(440.0, 44100, duration=0.5))
    assert result.f0 == 440.0
    assert result.snrh_db >= 90.0


def test_audio_snr(identity_model, rng):
    audio = AudioBuffer(rng.uniform(-0.5, 0.5, 4410), 44100)
    assert audio_snr(identity_model, AdaptationMethod('CIDL', 1.0), audio) == math.inf
    assert audio_snr(identity_model, AdaptationMethod('LIDL', 2.0), audio) > 200.0


def test_piano_tones():
    tones = piano_tones()
    assert len(tones) == 88
    assert tones[0] == 27.5
    assert tones[48] == 440.0
    assert tones[87] == pytest.approx(4186.009, abs=0.01)


def test_tone_spec():
    tone_spec = ToneSpec(1000.0, 44100)
    assert tone_spec.length == 44100
    assert tone_spec.at(88200).length == 88200
    rendered = tone_spec.render()
    assert rendered.rate == 44100.0
    assert np.max(np.abs(rendered.samples)) == pytest.approx(0.1, abs=1e-5)
    with pytest.raises(NyquistException):
        ToneSpec(22050.0, 44100)
