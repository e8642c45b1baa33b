#!/bin/env python
'''
Baseline recurrent model: one LSTM or GRU cell followed by an affine output head,
run sample by sample.

Gate rows are stacked the way the training toolchain exports them:
LSTM (input, forget, candidate, output), GRU (reset, update, new).
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import logging

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import expit

from srirnn.core import AudioBuffer, ModelFormatException, ModelShapeException, ModelValueException
from srirnn.core import RateMismatchException

CELL_TYPES = {'LSTM': 4, 'GRU': 3}

# relative tolerance used wherever a buffer rate is checked against a model rate
RATE_TOLERANCE = 1e-4


@dataclass(frozen=True, eq=False)
class RnnModel(object):
    '''
    Weights and topology of a single recurrent cell plus affine head.

    :param str cell_type: 'LSTM' or 'GRU'
    :param int hidden_size: H
    :param int input_size: must be 1, conditioned models are not supported
    :param w_ih: (G*H, input_size) input-to-hidden weights
    :param w_hh: (G*H, H) hidden-to-hidden weights
    :param b_ih: (G*H,) input bias
    :param b_hh: (G*H,) hidden bias
    :param w_out: (1, H) output weights
    :param float b_out: output bias
    :param bool skip: add the raw input sample to the output
    :param float train_rate: sample rate the model was trained at, Hz
    '''
    cell_type: str
    hidden_size: int
    input_size: int
    w_ih: np.ndarray
    w_hh: np.ndarray
    b_ih: np.ndarray
    b_hh: np.ndarray
    w_out: np.ndarray
    b_out: float
    skip: bool = False
    train_rate: float = 44100.0

    def __post_init__(self):
        cell_type = str(self.cell_type).upper()
        if cell_type not in CELL_TYPES:
            raise ModelFormatException("unknown cell type %r, expected one of %s" % (self.cell_type,
                                                                                   sorted(CELL_TYPES)))
        H = int(self.hidden_size)
        if H < 1:
            raise ModelShapeException('hidden_size', (1,), (H,))
        if int(self.input_size) != 1:
            raise ModelFormatException("input_size %s not supported: only unconditioned single-input "
                                       "models can be run" % self.input_size)
        if not self.train_rate > 0:
            raise ModelFormatException("train_rate must be positive, got %r" % self.train_rate)
        G = CELL_TYPES[cell_type]
        dtype = np.result_type(*[np.asarray(a).dtype for a in (self.w_ih, self.w_hh, self.b_ih,
                                                             self.b_hh, self.w_out)])
        if dtype != np.float32:
            dtype = np.dtype(np.float64)

        shapes = (('w_ih', (G * H, 1)),
                  ('w_hh', (G * H, H)),
                  ('b_ih', (G * H,)),
                  ('b_hh', (G * H,)),
                  ('w_out', (1, H)))
        for name, expected in shapes:
            arr = np.array(getattr(self, name), dtype=dtype)
            if arr.shape != expected:
                raise ModelShapeException(name, expected, arr.shape)
            if not np.all(np.isfinite(arr)):
                raise ModelValueException("%s contains non-finite values" % name)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

        b_out = dtype.type(self.b_out)
        if not np.isfinite(b_out):
            raise ModelValueException("b_out is not finite")
        object.__setattr__(self, 'b_out', b_out)
        object.__setattr__(self, 'cell_type', cell_type)
        object.__setattr__(self, 'hidden_size', H)
        object.__setattr__(self, 'input_size', 1)
        object.__setattr__(self, 'skip', bool(self.skip))
        object.__setattr__(self, 'train_rate', float(self.train_rate))

        # fused views used on the per-sample path
        object.__setattr__(self, '_w_in', self.w_ih[:, 0])
        object.__setattr__(self, '_w_head', self.w_out[0])
        if cell_type == 'LSTM':
            object.__setattr__(self, '_bias', self.b_ih + self.b_hh)
            object.__setattr__(self, 'cell', self._lstm)
        else:
            object.__setattr__(self, 'cell', self._gru)

    @property
    def gates(self):
        return CELL_TYPES[self.cell_type]

    @property
    def dtype(self):
        return self.w_hh.dtype

    @property
    def state_width(self):
        '''
        Length of the concatenated state vector the adaptation methods delay.
        '''
        return 2 * self.hidden_size if self.cell_type == 'LSTM' else self.hidden_size

    def astype(self, dtype):
        dtype = np.dtype(dtype)
        return replace(self,
                       w_ih=self.w_ih.astype(dtype), w_hh=self.w_hh.astype(dtype),
                       b_ih=self.b_ih.astype(dtype), b_hh=self.b_hh.astype(dtype),
                       w_out=self.w_out.astype(dtype), b_out=dtype.type(self.b_out))

    def zero_state(self):
        return np.zeros(self.state_width, dtype=self.dtype)

    def pack(self, state):
        '''
        CellState -> concatenated vector (h | c for LSTM, h for GRU).
        '''
        H = self.hidden_size
        h = np.asarray(state.h, dtype=self.dtype)
        if h.shape != (H,):
            raise ModelShapeException('state.h', (H,), h.shape)
        if self.cell_type == 'GRU':
            return h.copy()
        if state.c is None:
            raise ModelShapeException('state.c', (H,), ())
        c = np.asarray(state.c, dtype=self.dtype)
        if c.shape != (H,):
            raise ModelShapeException('state.c', (H,), c.shape)
        return np.concatenate((h, c))

    def unpack(self, vec):
        H = self.hidden_size
        if self.cell_type == 'LSTM':
            return CellState(vec[:H].copy(), vec[H:].copy())
        return CellState(vec.copy())

    def _lstm(self, vec, x):
        H = self.hidden_size
        g = self._w_in * x + self.w_hh @ vec[:H] + self._bias
        i = expit(g[:H])
        f = expit(g[H:2 * H])
        cand = np.tanh(g[2 * H:3 * H])
        o = expit(g[3 * H:])
        c = f * vec[H:] + i * cand
        return np.concatenate((o * np.tanh(c), c))

    def _gru(self, vec, x):
        H = self.hidden_size
        gi = self._w_in * x
        gh = self.w_hh @ vec + self.b_hh
        rz = expit(gi[:2 * H] + gh[:2 * H] + self.b_ih[:2 * H])
        r = rz[:H]
        z = rz[H:]
        n = np.tanh(gi[2 * H:] + self.b_ih[2 * H:] + r * gh[2 * H:])
        return (1 - z) * n + z * vec

    def head(self, vec, x):
        y = self._w_head @ vec[:self.hidden_size] + self.b_out
        if self.skip:
            y = y + x
        return y


@dataclass(frozen=True, eq=False)
class CellState(object):
    '''
    Recurrent state: h, plus the cell state c for LSTM models.
    '''
    h: np.ndarray
    c: Optional[np.ndarray] = None

    @classmethod
    def zeros(cls, model):
        H = model.hidden_size
        if model.cell_type == 'LSTM':
            return cls(np.zeros(H, dtype=model.dtype), np.zeros(H, dtype=model.dtype))
        return cls(np.zeros(H, dtype=model.dtype))


def _check_cell(model, cell_type):
    if model.cell_type != cell_type:
        raise ModelFormatException("%s step called on a %s model" % (cell_type, model.cell_type))


def lstm_step(model, state, x):
    '''
    One LSTM update: c' = f*c + i*g, h' = o*tanh(c').
    '''
    _check_cell(model, 'LSTM')
    return model.unpack(model.cell(model.pack(state), model.dtype.type(x)))


def gru_step(model, state, x):
    '''
    One GRU update, reset gate applied to the recurrent candidate term (b_hn included).
    '''
    _check_cell(model, 'GRU')
    return model.unpack(model.cell(model.pack(state), model.dtype.type(x)))


def output_head(model, h, x):
    h = np.asarray(h, dtype=model.dtype)
    if h.shape != (model.hidden_size,):
        raise ModelShapeException('h', (model.hidden_size,), h.shape)
    return model.head(h, model.dtype.type(x))


class StreamProcessor(object):
    '''
    Runs a model at its training rate, carrying state between process() calls.
    '''
    def __init__(self, model):
        self.model = model
        self.state = model.zero_state()

    def reset(self):
        self.state = self.model.zero_state()

    def process(self, samples):
        model = self.model
        cell = model.cell
        head = model.head
        xs = np.asarray(samples, dtype=model.dtype)
        out = np.empty(len(xs), dtype=model.dtype)
        state = self.state
        for n, x in enumerate(xs):
            state = cell(state, x)
            out[n] = head(state, x)
        self.state = state
        return out


def check_rate(actual, expected, hint=''):
    if abs(actual - expected) > RATE_TOLERANCE * expected:
        raise RateMismatchException(expected, actual, hint)


def process_baseline(model, input):
    '''
    Stream the model over a buffer at its training rate from zero state.

    :param RnnModel model:
    :param AudioBuffer input: must be at model.train_rate
    :rtype: AudioBuffer
    '''
    check_rate(input.rate, model.train_rate,
               "the baseline only runs at the training rate, use srirnn.adapt.process_adapted")
    return AudioBuffer(StreamProcessor(model).process(input.samples), input.rate)


def random_model(cell_type='LSTM', hidden_size=16, seed=0, input_scale=1.0, skip=False,
                 train_rate=44100.0):
    '''
    Seeded synthetic model, every tensor uniform in +-1/sqrt(H).
    input_scale multiplies w_ih and sets how hard a given input level drives the gates.
    '''
    log = logging.getLogger()
    cell_type = str(cell_type).upper()
    if cell_type not in CELL_TYPES:
        raise ModelFormatException("unknown cell type %r" % cell_type)
    G = CELL_TYPES[cell_type]
    H = int(hidden_size)
    if H < 1:
        raise ModelShapeException('hidden_size', (1,), (H,))
    rng = np.random.default_rng(seed)
    k = 1.0 / np.sqrt(H)

    def draw(*shape):
        return rng.uniform(-k, k, size=shape)

    model = RnnModel(cell_type=cell_type, hidden_size=H, input_size=1,
                     w_ih=draw(G * H, 1) * input_scale, w_hh=draw(G * H, H),
                     b_ih=draw(G * H), b_hh=draw(G * H),
                     w_out=draw(1, H), b_out=float(draw(1)[0]),
                     skip=skip, train_rate=train_rate)
    log.debug("Synthetic %s model H=%d seed=%s input_scale=%g" % (cell_type, H, seed, input_scale))
    return model
