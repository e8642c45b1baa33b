#!/bin/env python
'''
Weight files in the tone-library JSON layout. See docs/weight-format.md.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import json
import logging
import os
import tempfile

import numpy as np

from srirnn.core import ModelFormatException, ModelShapeException, ModelValueException
from srirnn.rnn import CELL_TYPES, RnnModel

DEFAULT_TRAIN_RATE = 44100.0

STATE_KEYS = {'rec.weight_ih_l0': 'w_ih',
              'rec.weight_hh_l0': 'w_hh',
              'rec.bias_ih_l0': 'b_ih',
              'rec.bias_hh_l0': 'b_hh',
              'lin.weight': 'w_out',
              'lin.bias': 'b_out'}

MODEL_KEYS = ('unit_type', 'hidden_size', 'input_size', 'skip')
KNOWN_MODEL_KEYS = set(MODEL_KEYS) | set(['model', 'output_size', 'num_layers', 'bias_fl',
                                          'sample_rate', 'samplerate'])


def _array(key, value, expected):
    try:
        arr = np.array(value, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ModelFormatException("%s is not a numeric array (%s)" % (key, e))
    if arr.shape != expected:
        raise ModelShapeException(key, expected, arr.shape)
    if not np.all(np.isfinite(arr)):
        raise ModelValueException("%s contains non-finite values" % key)
    return arr


def _required(block, key, where):
    try:
        return block[key]
    except KeyError:
        raise ModelFormatException("missing key %s.%s" % (where, key))


def model_from_dict(doc, source='<dict>'):
    '''
    Validate a parsed weight document and build the RnnModel.
    '''
    log = logging.getLogger()
    if not isinstance(doc, dict):
        raise ModelFormatException("%s: top level is not an object" % source)
    meta = _required(doc, 'model_data', 'file')
    state = _required(doc, 'state_dict', 'file')
    if not isinstance(meta, dict) or not isinstance(state, dict):
        raise ModelFormatException("%s: model_data and state_dict must be objects" % source)

    unit = str(_required(meta, 'unit_type', 'model_data')).upper()
    if unit not in CELL_TYPES:
        raise ModelFormatException("%s: unsupported unit_type %r" % (source, meta['unit_type']))
    try:
        H = int(_required(meta, 'hidden_size', 'model_data'))
        input_size = int(_required(meta, 'input_size', 'model_data'))
        skip = bool(int(_required(meta, 'skip', 'model_data')))
    except (TypeError, ValueError) as e:
        raise ModelFormatException("%s: bad model_data value (%s)" % (source, e))
    if input_size != 1:
        raise ModelFormatException("%s: input_size %d declares a conditioned model; only single-input "
                                   "models are supported" % (source, input_size))
    if H < 1:
        raise ModelShapeException('model_data.hidden_size', (1,), (H,))
    rate = meta.get('sample_rate', meta.get('samplerate', DEFAULT_TRAIN_RATE))
    try:
        rate = float(rate)
    except (TypeError, ValueError):
        raise ModelFormatException("%s: bad sample rate %r" % (source, rate))

    for extra in sorted(set(meta) - KNOWN_MODEL_KEYS):
        log.info("%s: ignoring unknown model_data key %s" % (source, extra))
    for extra in sorted(set(state) - set(STATE_KEYS)):
        log.info("%s: ignoring unknown state_dict key %s" % (source, extra))

    G = CELL_TYPES[unit]
    shapes = {'rec.weight_ih_l0': (G * H, input_size),
              'rec.weight_hh_l0': (G * H, H),
              'rec.bias_ih_l0': (G * H,),
              'rec.bias_hh_l0': (G * H,),
              'lin.weight': (1, H)}
    weights = {}
    for key, expected in shapes.items():
        weights[STATE_KEYS[key]] = _array(key, _required(state, key, 'state_dict'), expected)
    b_out = np.array(_required(state, 'lin.bias', 'state_dict'), dtype=np.float64).reshape(-1)
    if b_out.shape != (1,):
        raise ModelShapeException('lin.bias', (1,), b_out.shape)
    if not np.isfinite(b_out[0]):
        raise ModelValueException("lin.bias is not finite")

    model = RnnModel(cell_type=unit, hidden_size=H, input_size=input_size, b_out=float(b_out[0]),
                     skip=skip, train_rate=rate, **weights)
    log.info("Loaded %s model H=%d skip=%s train_rate=%g from %s" % (unit, H, skip, rate, source))
    return model


def model_to_dict(model):
    return {'model_data': {'model': 'SimpleRNN',
                           'unit_type': model.cell_type,
                           'input_size': model.input_size,
                           'output_size': 1,
                           'num_layers': 1,
                           'hidden_size': model.hidden_size,
                           'skip': int(model.skip),
                           'bias_fl': True,
                           'sample_rate': model.train_rate},
            'state_dict': {'rec.weight_ih_l0': model.w_ih.astype(np.float64).tolist(),
                           'rec.weight_hh_l0': model.w_hh.astype(np.float64).tolist(),
                           'rec.bias_ih_l0': model.b_ih.astype(np.float64).tolist(),
                           'rec.bias_hh_l0': model.b_hh.astype(np.float64).tolist(),
                           'lin.weight': model.w_out.astype(np.float64).tolist(),
                           'lin.bias': [float(model.b_out)]}}


def load_model(path):
    '''
    Load and validate a weight file.

    :param str path: JSON weight file
    :rtype: RnnModel
    '''
    path = os.path.expanduser(path)
    try:
        with open(path) as f:
            doc = json.load(f)
    except (IOError, OSError) as e:
        raise ModelFormatException("cannot read %s (%s)" % (path, e))
    except ValueError as e:
        raise ModelFormatException("cannot parse %s (%s)" % (path, e))
    return model_from_dict(doc, path)


def save_model(model, path):
    '''
    Write a model as a weight file. The document goes to a temporary file
    next to the target, which is then renamed over it.
    '''
    log = logging.getLogger()
    if model.hidden_size < 1:
        raise ModelShapeException('hidden_size', (1,), (model.hidden_size,))
    path = os.path.expanduser(path)
    dump = json.dumps(model_to_dict(model), sort_keys=True, indent=4, separators=(',', ': '))
    tmpfile = tempfile.NamedTemporaryFile(mode='w', prefix=os.path.basename(path) + '.',
                                          dir=os.path.dirname(os.path.abspath(path)), delete=False)
    try:
        tmpfile.write(dump)
        tmpfile.flush()
        tmpfile.close()
        log.debug("renaming %s to %s" % (tmpfile.name, path))
        os.replace(tmpfile.name, path)
    except Exception:
        if os.path.exists(tmpfile.name):
            os.unlink(tmpfile.name)
        raise
    log.info("Saved %s model H=%d to %s" % (model.cell_type, model.hidden_size, path))
    return path
