#
# Shared fixtures and scalar-loop oracles for the sri-rnn suites.
#
import math

import numpy as np
import pytest

from srirnn.rnn import CELL_TYPES, RnnModel, random_model


def zero_model(cell_type='LSTM', hidden_size=4, skip=False, b_out=0.0, train_rate=44100.0):
    '''
    Every weight and bias zero: all gates sit at 0.5 and the candidate at 0.
    '''
    G = CELL_TYPES[cell_type]
    H = hidden_size
    return RnnModel(cell_type=cell_type, hidden_size=H, input_size=1,
                    w_ih=np.zeros((G * H, 1)), w_hh=np.zeros((G * H, H)),
                    b_ih=np.zeros(G * H), b_hh=np.zeros(G * H),
                    w_out=np.zeros((1, H)), b_out=b_out, skip=skip, train_rate=train_rate)


def _sigmoid(a):
    return 1.0 / (1.0 + math.exp(-a))


def _gate_sums(model, h, x, rows):
    H = model.hidden_size
    sums = []
    for r in rows:
        a = model.w_ih[r, 0] * x + model.b_ih[r] + model.b_hh[r]
        for j in range(H):
            a += model.w_hh[r, j] * h[j]
        sums.append(a)
    return sums


def scalar_lstm(model, h, c, x):
    H = model.hidden_size
    a = _gate_sums(model, h, x, range(4 * H))
    h_new, c_new = [], []
    for u in range(H):
        i = _sigmoid(a[u])
        f = _sigmoid(a[H + u])
        g = math.tanh(a[2 * H + u])
        o = _sigmoid(a[3 * H + u])
        cu = f * c[u] + i * g
        c_new.append(cu)
        h_new.append(o * math.tanh(cu))
    return h_new, c_new


def scalar_gru(model, h, x):
    H = model.hidden_size
    h_new = []
    for u in range(H):
        rs = model.w_ih[u, 0] * x + model.b_ih[u] + model.b_hh[u]
        zs = model.w_ih[H + u, 0] * x + model.b_ih[H + u] + model.b_hh[H + u]
        hn = model.b_hh[2 * H + u]
        for j in range(H):
            rs += model.w_hh[u, j] * h[j]
            zs += model.w_hh[H + u, j] * h[j]
            hn += model.w_hh[2 * H + u, j] * h[j]
        r = _sigmoid(rs)
        z = _sigmoid(zs)
        n = math.tanh(model.w_ih[2 * H + u, 0] * x + model.b_ih[2 * H + u] + r * hn)
        h_new.append((1.0 - z) * n + z * h[u])
    return h_new


def scalar_head(model, h, x):
    y = model.b_out
    for j in range(model.hidden_size):
        y += model.w_out[0, j] * h[j]
    if model.skip:
        y += x
    return y


def scalar_baseline(model, xs):
    '''
    Sample loop over the scalar oracles, zero initial state.
    '''
    H = model.hidden_size
    h = [0.0] * H
    c = [0.0] * H
    out = []
    for x in xs:
        x = float(x)
        if model.cell_type == 'LSTM':
            h, c = scalar_lstm(model, h, c, x)
        else:
            h = scalar_gru(model, h, x)
        out.append(scalar_head(model, h, x))
    return np.array(out)


def rel_rms(reference, test):
    reference = np.asarray(reference, dtype=np.float64)
    err = reference - np.asarray(test, dtype=np.float64)
    return math.sqrt(np.dot(err, err) / np.dot(reference, reference))


@pytest.fixture
def rng():
    return np.random.default_rng(20231017)


@pytest.fixture
def lstm16():
    return random_model('LSTM', 16, seed=1234)


@pytest.fixture
def gru8():
    return random_model('GRU', 8, seed=99)


@pytest.fixture
def driven_lstm():
    '''
    Synthetic LSTM whose gates a 0.1 tone drives into their nonlinear range.
    '''
    return random_model('LSTM', 16, seed=7, input_scale=40.0)


@pytest.fixture
def identity_model():
    return zero_model('LSTM', 4, skip=True)
