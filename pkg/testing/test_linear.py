#
# One-pole analysis: closed-form responses against simulation, spectral error, pole sweeps.
#
import math

import numpy as np
import pytest
from scipy import fft

from srirnn.adapt import METHODS, AdaptationMethod
from srirnn.core import SignalException
from srirnn.linear import BASE_RATE, REFERENCE_POLE, FrequencyResponseCurve, OnePole, analytic_response
from srirnn.linear import base_response, frequency_grid, mean_spectral_error, oracle_error, pole_grid
from srirnn.linear import pole_sweep, response_curve, simulate_onepole, spectral_error

DELAY_KINDS = ('Delay', 'LIDL', 'APDL', 'CIDL')
FRACTIONAL = ('LIDL', 'APDL', 'CIDL')


def test_reference_pole():
    assert REFERENCE_POLE == pytest.approx(math.exp(-20.0 * math.pi / 44.1), rel=1e-14)
    assert REFERENCE_POLE == pytest.approx(0.24057, abs=1e-5)
    assert abs(base_response(0.0, REFERENCE_POLE)) == pytest.approx(1.0 / (1.0 - REFERENCE_POLE), rel=1e-12)
    assert abs(base_response(0.0, REFERENCE_POLE)) == pytest.approx(1.31677, abs=1e-5)
    pole = OnePole.from_cutoff(10000.0)
    assert pole.A == REFERENCE_POLE
    assert OnePole.from_pole(pole.A).f_c == pytest.approx(10000.0, rel=1e-12)


def test_one_pole_validation():
    with pytest.raises(SignalException):
        OnePole(1.0, 0.0)
    with pytest.raises(SignalException):
        OnePole(0.5, 1000.0)


@pytest.mark.parametrize('M', [1.0, 1.0884, 2.0, 2.1768, 3.5])
@pytest.mark.parametrize('kind', METHODS)
def test_dc_gain(kind, M):
    H = analytic_response(kind, 0.0, REFERENCE_POLE, M)
    assert abs(H - 1.0 / (1.0 - REFERENCE_POLE)) <= 1e-12


@pytest.mark.parametrize('M', [1.0884, 2.0, 2.1768])
@pytest.mark.parametrize('kind', METHODS)
def test_simulation_matches_closed_form(kind, M):
    assert oracle_error(kind, M, REFERENCE_POLE) <= 1e-9


def test_pulse_responses():
    A = 0.5
    h = simulate_onepole('Naive', 1.0, A, 32)
    np.testing.assert_allclose(h, A ** np.arange(32), rtol=1e-15, atol=0)
    h = simulate_onepole('Delay', 2.0, A, 32)
    np.testing.assert_allclose(h[::2], A ** np.arange(16), rtol=1e-15, atol=0)
    assert not np.any(h[1::2])


def test_short_pulse_response_warns(caplog):
    simulate_onepole('LIDL', 2.5, 0.9999, 256)
    assert 'has not decayed' in caplog.text


@pytest.mark.parametrize('M', [2.0, 4.0])
@pytest.mark.parametrize('kind', DELAY_KINDS)
def test_integer_m_is_exact(kind, M):
    grid = frequency_grid(2048, 10.0, 22049.0)
    curve = response_curve(kind, M, REFERENCE_POLE, grid)
    base = response_curve('Naive', 1.0, REFERENCE_POLE, grid)
    assert np.max(np.abs(spectral_error(curve, base))) <= 1e-9
    assert mean_spectral_error(kind, M, REFERENCE_POLE, grid) <= 1e-9


def test_delay_mirrors_about_base_nyquist():
    n = 2 ** 14
    H = fft.rfft(simulate_onepole('Delay', 2.0, REFERENCE_POLE, n))
    k = np.arange(1, n // 4)
    np.testing.assert_allclose(np.abs(H[n // 4 + k]), np.abs(H[n // 4 - k]), rtol=1e-9, atol=0)


def test_spectral_error_values():
    H = np.array([1.0 + 1.0j, 0.5, -2.0])
    np.testing.assert_allclose(spectral_error(H, H), 0.0, rtol=0, atol=1e-14)
    np.testing.assert_allclose(spectral_error(2.0 * H, H), 20.0 * math.log10(2.0), rtol=1e-14)
    with pytest.raises(SignalException):
        spectral_error(H, np.array([1.0, 0.0, 1.0]))
    with pytest.raises(SignalException):
        spectral_error(H, H[:2])


def test_curves_need_the_same_grid():
    a = response_curve('LIDL', 1.5, REFERENCE_POLE, frequency_grid(64))
    b = response_curve('Naive', 1.0, REFERENCE_POLE, frequency_grid(65))
    with pytest.raises(SignalException):
        spectral_error(a, b)
    with pytest.raises(SignalException):
        spectral_error(a, b.H[:64])


def test_response_curve():
    curve = response_curve('APDL', 2.1768, REFERENCE_POLE)
    assert isinstance(curve, FrequencyResponseCurve)
    assert len(curve.omega) == 4096
    assert curve.frequency[0] == pytest.approx(10.0)
    assert curve.frequency[-1] == pytest.approx(22040.0)
    assert curve.method == 'APDL'
    assert curve.M == 2.1768
    np.testing.assert_allclose(curve.magnitude_db, 20.0 * np.log10(np.abs(curve.H)))
    method = AdaptationMethod('CIDL', 2.1768)
    np.testing.assert_array_equal(response_curve(method, None, REFERENCE_POLE).H,
                                  response_curve('CIDL', 2.1768, REFERENCE_POLE).H)


def test_mean_error_grid_is_inside_base_band():
    with pytest.raises(SignalException):
        mean_spectral_error('LIDL', 1.5, REFERENCE_POLE, [100.0, BASE_RATE / 2.0])


def test_method_ordering_at_reference_pole():
    M = 96000.0 / 44100.0
    errors = dict((kind, mean_spectral_error(kind, M, REFERENCE_POLE)) for kind in METHODS)
    assert errors['APDL'] < errors['CIDL'] < errors['LIDL'] < errors['STN']
    assert errors['Naive'] > errors['LIDL']


def test_pole_grid():
    poles = pole_grid()
    assert len(poles) == 66
    cutoffs = [p.f_c for p in poles]
    assert cutoffs == sorted(cutoffs, reverse=True)
    assert poles[0].f_c == pytest.approx(20000.0)
    assert [p.A for p in poles[-2:]] == [0.999, 0.9999]


@pytest.mark.slow
def test_pole_sweep_ordering():
    poles = pole_grid(extra=())
    sweeps = dict((kind, pole_sweep(kind, 2.1768, poles)) for kind in FRACTIONAL)
    assert np.all(sweeps['APDL'] < sweeps['CIDL'])
    assert np.all(sweeps['CIDL'] < sweeps['LIDL'])


def test_vanishing_pole_limits():
    A = 1e-6
    for kind in DELAY_KINDS:
        assert mean_spectral_error(kind, 2.1768, A) < 1e-4
    assert mean_spectral_error('STN', 2.1768, A) > 0.1


def test_stn_error_grows_with_m():
    assert mean_spectral_error('STN', 2.1768, REFERENCE_POLE) > mean_spectral_error('STN', 1.0884, REFERENCE_POLE)


def test_pole_sweep_accepts_floats():
    values = pole_sweep('LIDL', 1.5, [0.1, 0.5, 0.9], frequency_grid(256))
    assert values.shape == (3,)
    assert np.all(values > 0.0)
