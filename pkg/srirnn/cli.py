#!/bin/env python
'''
Command line front end: process, linear, metrics and bench subcommands.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import argparse
import csv
import json
import logging
import logging.handlers
import math
import os
import platform
import sys
import time
import traceback

from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from srirnn import bench, linear
from srirnn.adapt import METHODS, AdaptationMethod, method_kind, process_adapted
from srirnn.audioio import read_wav, write_wav
from srirnn.core import AdaptationException, ModelFormatException, SignalException, SRIRNNException
from srirnn.metrics import ALIAS_GRIDS, EXTRACTORS, ToneMeasurement, ToneSpec, audio_snr, measure_tone
from srirnn.metrics import piano_tones
from srirnn.modelio import load_model
from srirnn.rnn import process_baseline, random_model

REPO_CONF = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'etc', 'sri-rnn.conf')
DEFAULT_CONF = ','.join(['/etc/sri-rnn/sri-rnn.conf', '~/.sri-rnn.conf', REPO_CONF])

METRICS_COLUMNS = ('model', 'method', 'M', 'f0_hz', 'snrh_db', 'snra_db', 'amplitude')
AUDIO_COLUMNS = ('model', 'method', 'M', 'snr_db')
RESPONSE_COLUMNS = ('method', 'M', 'A', 'f_c', 'omega', 'H_re', 'H_im', 'H_dB')
ORACLE_COLUMNS = ('method', 'M', 'A', 'f_c', 'max_rel_error')
ERROR_COLUMNS = ('method', 'M', 'A', 'f_c', 'omega', 'L_dB')

# SNRH below this under APDL is reported as a numerical failure
APDL_FAILURE_DB = 10.0


def _names(value):
    return tuple(v.strip() for v in str(value).split(',') if v.strip())


def _floats(value):
    return tuple(float(v) for v in _names(value))


def _ints(value):
    return tuple(int(v) for v in _names(value))


def _bool(value):
    if isinstance(value, bool):
        return value
    state = ConfigParser.BOOLEAN_STATES.get(str(value).strip().lower())
    if state is None:
        raise ValueError("not a boolean: %r" % value)
    return state


def _tones(value):
    if str(value).strip().lower() == 'piano':
        return tuple(piano_tones())
    return _floats(value)


def _cpu(value):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return int(value)


def _synthetic(values, hidden_size):
    '''
    --synthetic values as (H, seed) pairs; a lone number is a seed for the configured hidden size.
    '''
    pairs = []
    for value in values:
        try:
            parts = _ints(value)
        except ValueError:
            parts = ()
        if len(parts) == 1:
            parts = (hidden_size, parts[0])
        if len(parts) != 2:
            raise ModelFormatException("--synthetic takes H,seed or seed, got %r" % value)
        pairs.append(parts)
    return tuple(pairs)


# field: (section, converter, built-in default); the section 'command' means the running subcommand's
SETTINGS = {
    'precision': ('global', str, 'double'),
    'train_rate': ('global', float, 44100.0),
    'method': ('process', str, 'CIDL'),
    'methods': ('command', _names, METHODS),
    'm_values': ('linear', _floats, (1.0884, 2.0, 2.1768)),
    'points': ('linear', int, linear.GRID_POINTS),
    'fmin': ('linear', float, linear.GRID_FMIN),
    'fmax': ('linear', float, linear.GRID_FMAX),
    'n_samples': ('linear', int, linear.IMPULSE_LENGTH),
    'cutoff': ('linear', float, linear.REFERENCE_CUTOFF),
    'sweep_points': ('linear', int, linear.SWEEP_POINTS),
    'sweep_fmin': ('linear', float, linear.SWEEP_FMIN),
    'sweep_fmax': ('linear', float, linear.SWEEP_FMAX),
    'extra_poles': ('linear', _floats, linear.EXTRA_POLES),
    'rates': ('metrics', _floats, (48000.0, 88200.0, 96000.0)),
    'tones': ('metrics', _tones, tuple(piano_tones())),
    'amplitude': ('metrics', float, 0.1),
    'duration': ('command', float, None),
    'settle': ('metrics', float, 0.1),
    'extractor': ('metrics', str, 'peak'),
    'alias_grid': ('metrics', str, 'base'),
    'workers': ('metrics', int, 4),
    'cell': ('synthetic', str, 'LSTM'),
    'hidden_size': ('synthetic', int, 16),
    'seed': ('command', int, 0),
    'input_scale': ('synthetic', float, 40.0),
    'skip': ('synthetic', _bool, False),
    'sizes': ('bench', _ints, bench.SIZES),
    'rate': ('bench', float, 96000.0),
    'repeats': ('bench', int, 5),
    'warmup': ('bench', float, 1.0),
    'cpu': ('bench', _cpu, None),
}

DURATIONS = {'metrics': 1.0, 'bench': 100.0}


@dataclass(frozen=True)
class RunConfig(object):
    '''
    Every setting of one run, resolved from flags, configuration files and built-in defaults.
    '''
    command: str
    models: Tuple[str, ...] = ()
    synthetic: Tuple[Tuple[int, int], ...] = ()
    input: Optional[str] = None
    output: Optional[str] = None
    outdir: str = '.'
    audio: Optional[str] = None
    audio_output: Optional[str] = None
    precision: str = 'double'
    train_rate: float = 44100.0
    method: str = 'CIDL'
    methods: Tuple[str, ...] = METHODS
    m_values: Tuple[float, ...] = (1.0884, 2.0, 2.1768)
    points: int = linear.GRID_POINTS
    fmin: float = linear.GRID_FMIN
    fmax: float = linear.GRID_FMAX
    n_samples: int = linear.IMPULSE_LENGTH
    cutoff: float = linear.REFERENCE_CUTOFF
    sweep_points: int = linear.SWEEP_POINTS
    sweep_fmin: float = linear.SWEEP_FMIN
    sweep_fmax: float = linear.SWEEP_FMAX
    extra_poles: Tuple[float, ...] = linear.EXTRA_POLES
    rates: Tuple[float, ...] = (48000.0, 88200.0, 96000.0)
    tones: Tuple[float, ...] = tuple(piano_tones())
    amplitude: float = 0.1
    duration: float = 1.0
    settle: float = 0.1
    extractor: str = 'peak'
    alias_grid: str = 'base'
    workers: int = 4
    cell: str = 'LSTM'
    hidden_size: int = 16
    seed: int = 0
    input_scale: float = 40.0
    skip: bool = False
    sizes: Tuple[int, ...] = bench.SIZES
    rate: float = 96000.0
    repeats: int = 5
    warmup: float = 1.0
    cpu: Optional[int] = None

    def __post_init__(self):
        if self.precision not in ('double', 'single'):
            raise SRIRNNException("precision must be 'double' or 'single', got %r" % self.precision)
        for M in self.m_values:
            if M < 1.0:
                raise AdaptationException("oversampling factor %r is below 1, downsampling is not supported" % M)
        for rate in self.rates + (self.rate,):
            if rate < self.train_rate:
                raise AdaptationException("target rate %g Hz is below the training rate %g Hz" % (rate,
                                                                                                self.train_rate))
        if self.workers < 1:
            raise SRIRNNException("workers must be at least 1, got %r" % self.workers)
        if not self.amplitude > 0:
            raise SRIRNNException("tone amplitude must be positive, got %r" % self.amplitude)
        if self.extractor not in EXTRACTORS:
            raise SRIRNNException("extractor must be one of %s, got %r" % (list(EXTRACTORS), self.extractor))
        if self.alias_grid not in ALIAS_GRIDS:
            raise SRIRNNException("alias grid must be one of %s, got %r" % (list(ALIAS_GRIDS), self.alias_grid))

    @property
    def dtype(self):
        return np.float32 if self.precision == 'single' else np.float64

    @classmethod
    def from_sources(cls, options, config=None):
        '''
        Flags win over configuration options, which win over built-in defaults.

        :param options: argparse namespace, missing flags are None
        :param ConfigParser config: may be None
        '''
        command = options.command
        values = {'command': command}
        for name, (section, conv, default) in SETTINGS.items():
            if section == 'command':
                section = command
            if name == 'duration':
                default = DURATIONS.get(command, 1.0)
            flag = getattr(options, name, None)
            try:
                if flag is not None:
                    values[name] = conv(flag) if isinstance(flag, str) else flag
                elif config is not None and config.has_option(section, name):
                    values[name] = conv(config.get(section, name))
                else:
                    values[name] = default
            except ValueError as e:
                raise SRIRNNException("bad value for %s (%s)" % (name, e))
        values['methods'] = tuple(method_kind(kind) for kind in values['methods'])
        values['method'] = method_kind(values['method'])
        for name in ('input', 'output', 'audio', 'audio_output'):
            values[name] = getattr(options, name, None)
        values['outdir'] = getattr(options, 'outdir', None) or '.'
        models = getattr(options, 'model', None) or ()
        values['models'] = (models,) if isinstance(models, str) else tuple(models)
        values['synthetic'] = _synthetic(getattr(options, 'synthetic', None) or (), values['hidden_size'])
        return cls(**values)


def load_models(config):
    '''
    (name, RnnModel) for every weight file and synthetic model requested, at the run's precision.
    '''
    log = logging.getLogger()
    models = []
    for path in config.models:
        name = os.path.splitext(os.path.basename(path))[0]
        models.append((name, load_model(path)))
    for H, seed in config.synthetic:
        models.append(("synthetic-H%d-s%d" % (H, seed),
                       random_model(config.cell, H, seed=seed, input_scale=config.input_scale,
                                    skip=config.skip, train_rate=config.train_rate)))
    if not models:
        raise ModelFormatException("no model given, use --model FILE or --synthetic H,seed")
    if config.precision == 'single':
        models = [(name, model.astype(config.dtype)) for name, model in models]
    log.info("Models: %s" % ', '.join(name for name, _ in models))
    return models


def _open(path):
    if path is None or path == '-':
        return sys.stdout, False
    return open(os.path.expanduser(path), 'w', newline=''), True


def _write_rows(path, columns, rows):
    stream, owned = _open(path)
    try:
        writer = csv.writer(stream)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    finally:
        if owned:
            stream.close()
        else:
            stream.flush()
    return path


def cmd_process(config):
    '''
    Run the model over a WAV file at the file's own rate, M = rate/train_rate.
    '''
    log = logging.getLogger()
    if not config.input or not config.output:
        raise SRIRNNException("process needs --input and --output")
    name, model = load_models(config)[0]
    audio = read_wav(config.input)
    M = audio.rate / model.train_rate
    if M < 1.0:
        raise AdaptationException("input at %g Hz is below the training rate %g Hz, downsampling is not supported"
                                  % (audio.rate, model.train_rate))
    method = AdaptationMethod(config.method, M)
    log.info("Processing %s with %s through %s" % (config.input, name, method.label))
    write_wav(config.output, process_adapted(model, method, audio))
    return config.output


def cmd_linear(config):
    '''
    Analytic responses, oracle errors, spectral errors and pole sweeps of the one-pole system.
    '''
    log = logging.getLogger()
    outdir = os.path.expanduser(config.outdir)
    if not os.path.isdir(outdir):
        os.makedirs(outdir)
    pole = linear.OnePole.from_cutoff(config.cutoff, config.train_rate)
    frequencies = linear.frequency_grid(config.points, config.fmin, config.fmax)
    poles = linear.pole_grid(config.sweep_points, config.sweep_fmin, config.sweep_fmax, config.extra_poles,
                             config.train_rate)
    T = 1.0 / config.train_rate
    omega = 2.0 * np.pi * frequencies
    H_base = linear.base_response(omega, pole.A, T)

    responses = [('Base', 1.0, pole.A, pole.f_c, w, h.real, h.imag, 20.0 * np.log10(abs(h)))
                 for w, h in zip(omega, H_base)]
    oracle, errors, sweep = [], [], []
    for M in config.m_values:
        for kind in config.methods:
            method = AdaptationMethod(kind, M)
            curve = linear.response_curve(method, M, pole.A, frequencies, config.train_rate)
            L = linear.spectral_error(curve.H, H_base)
            responses.extend((kind, M, pole.A, pole.f_c, w, h.real, h.imag, db)
                             for w, h, db in zip(curve.omega, curve.H, curve.magnitude_db))
            errors.extend((kind, M, pole.A, pole.f_c, w, l) for w, l in zip(curve.omega, L))
            oracle.append((kind, M, pole.A, pole.f_c,
                           linear.oracle_error(method, M, pole.A, config.n_samples, config.train_rate)))
            values = linear.pole_sweep(method, M, poles, frequencies, config.train_rate)
            sweep.extend((kind, M, p.A, p.f_c, '', v) for p, v in zip(poles, values))
            log.info("Linear analysis %s done" % method.label)

    written = []
    for filename, columns, rows in (('responses.csv', RESPONSE_COLUMNS, responses),
                                    ('oracle.csv', ORACLE_COLUMNS, oracle),
                                    ('spectral_error.csv', ERROR_COLUMNS, errors),
                                    ('pole_sweep.csv', ERROR_COLUMNS, sweep)):
        path = os.path.join(outdir, filename)
        _write_rows(path, columns, rows)
        log.info("Wrote %d rows to %s" % (len(rows), path))
        written.append(path)
    return written


def cmd_metrics(config):
    '''
    SNRH and SNRA per (model, method, rate, tone), plus the audio-file SNR when --audio is given.
    '''
    log = logging.getLogger()
    models = load_models(config)
    tasks = []
    for name, model in models:
        for rate in config.rates:
            for kind in config.methods:
                method = AdaptationMethod.for_rate(kind, rate, model.train_rate)
                for f0 in config.tones:
                    tasks.append((name, model, method, f0))
    log.info("Measuring %d tones with %d workers" % (len(tasks), config.workers))

    def tone(model, f0):
        return ToneSpec(f0, model.train_rate, config.duration, config.amplitude)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        keys = [(name, model, f0) for name, model in models for f0 in config.tones]
        futures = [pool.submit(process_baseline, model, tone(model, f0).render()) for _, model, f0 in keys]
        baselines = dict(((name, f0), future.result()) for (name, _, f0), future in zip(keys, futures))
        futures = [pool.submit(measure_tone, model, method, tone(model, f0), baselines[(name, f0)], config.settle,
                               config.extractor, config.alias_grid)
                   for name, model, method, f0 in tasks]
        rows = []
        for (name, model, method, f0), future in zip(tasks, futures):
            try:
                result = future.result()
            except SignalException as e:
                log.warning("%s %s at f0=%g Hz could not be measured: %s" % (name, method.label, f0, e))
                result = ToneMeasurement(f0, math.nan, math.nan)
            if method.kind == 'APDL' and not result.snrh_db >= APDL_FAILURE_DB:
                log.warning("%s %s at f0=%g Hz: SNRH %.2f dB, the all-pass delay line has failed numerically" % (
                    name, method.label, f0, result.snrh_db))
            rows.append((name, method.kind, method.M, result.f0, result.snrh_db, result.snra_db, config.amplitude))
    _write_rows(config.output, METRICS_COLUMNS, rows)
    log.info("Wrote %d metric rows" % len(rows))

    if config.audio:
        audio = read_wav(config.audio)
        audio_rows = []
        for name, model in models:
            for rate in config.rates:
                for kind in config.methods:
                    method = AdaptationMethod.for_rate(kind, rate, model.train_rate)
                    audio_rows.append((name, method.kind, method.M, audio_snr(model, method, audio)))
        _write_rows(config.audio_output, AUDIO_COLUMNS, audio_rows)
        log.info("Wrote %d audio SNR rows" % len(audio_rows))
    return rows


def cmd_bench(config):
    '''
    Real-time factor of synthetic GRU models per hidden size and method.
    '''
    benchmark = bench.Benchmark(config.sizes, config.methods, config.duration, config.rate, config.repeats,
                                config.warmup, config.seed, config.train_rate, config.cpu)
    results = benchmark.run()
    stream, owned = _open(config.output)
    try:
        bench.write_csv(results, stream)
    finally:
        if owned:
            stream.close()
    if not owned:
        sys.stdout.write("\n")
    sys.stdout.write(bench.format_table(results, bench.platform_info()))
    sys.stdout.flush()
    return results


COMMANDS = {'process': cmd_process,
            'linear': cmd_linear,
            'metrics': cmd_metrics,
            'bench': cmd_bench}


class SRIRNNCLI(object):
    '''
    Parses the command line, sets up logging and configuration, and runs one subcommand.
    '''
    # handlers installed by the last instance, replaced when another one sets up logging
    _handlers = []

    def __init__(self, argv=None):
        self.options = None
        self.log = None
        self.config = None
        self.runconfig = None

        self.__parseopts(argv)
        self.__setuplogging()
        self.__platforminfo()
        self.__createconfig()

    def __parseopts(self, argv):
        parser = argparse.ArgumentParser(prog='sri-rnn', description='''sri-rnn runs recurrent audio-effect models
at sample rates above the one they were trained at, and measures how well each
adaptation method does it.

This program is licenced under the GPL, as set out in LICENSE file.''')
        parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
        parser.add_argument("-d", "--debug", dest="logLevel", default=logging.WARNING, action="store_const",
                            const=logging.DEBUG, help="Set logging level to DEBUG [default WARNING]")
        parser.add_argument("-v", "--info", dest="logLevel", default=logging.WARNING, action="store_const",
                            const=logging.INFO, help="Set logging level to INFO [default WARNING]")
        parser.add_argument("--quiet", dest="logLevel", default=logging.WARNING, action="store_const",
                            const=logging.WARNING, help="Set logging level to WARNING [default]")
        parser.add_argument("--console", dest="console", default=False, action="store_true",
                            help="Forces debug and info messages to be sent to the console")
        parser.add_argument("--log", dest="logfile", default="stdout", metavar="LOGFILE",
                            help="Send logging output to LOGFILE or stdout [default stdout]")
        parser.add_argument("--maxlogsize", dest="maxlogsize", default=4096, type=int, help="Max log size, in MB.")
        parser.add_argument("--logrotations", dest="logrotations", default=2, type=int,
                            help="Number of log backups to keep.")
        parser.add_argument("--conf", dest="confFiles", default=DEFAULT_CONF, metavar="FILE1[,FILE2,FILE3]",
                            help="Load configuration from FILEs (comma separated list)")
        parser.add_argument("--precision", choices=('double', 'single'), help="Arithmetic precision [double]")
        parser.add_argument("--train-rate", dest="train_rate", type=float,
                            help="Training rate of synthetic models, Hz [44100]")

        sub = parser.add_subparsers(dest='command', metavar='COMMAND')
        sub.required = True

        def models(p, multiple):
            action = 'append' if multiple else 'store'
            p.add_argument("-m", "--model", action=action, metavar="FILE", help="Weight file (JSON)")
            p.add_argument("--synthetic", action='append', metavar="H,SEED",
                           help="Seeded random model with hidden size H")
            p.add_argument("--cell", choices=('LSTM', 'GRU'), help="Cell type of synthetic models [LSTM]")
            p.add_argument("--input-scale", dest="input_scale", type=float,
                           help="Input weight gain of synthetic models [40]")

        p = sub.add_parser('process', help="Process a WAV file at its own sample rate")
        models(p, False)
        p.add_argument("--method", help="Adaptation method: %s [CIDL]" % ', '.join(METHODS))
        p.add_argument("-i", "--input", required=True, metavar="WAV", help="Input WAV file")
        p.add_argument("-o", "--output", required=True, metavar="WAV", help="Output WAV file (32-bit float)")

        p = sub.add_parser('linear', help="One-pole analysis, writes four CSV files")
        p.add_argument("--methods", help="Comma separated methods [all]")
        p.add_argument("--m-values", dest="m_values", help="Comma separated oversampling factors [1.0884,2,2.1768]")
        p.add_argument("--outdir", metavar="DIR", help="Directory for the CSV files [.]")
        p.add_argument("--points", type=int, help="Frequency grid points [4096]")
        p.add_argument("--fmin", type=float, help="Lowest grid frequency, Hz [10]")
        p.add_argument("--fmax", type=float, help="Highest grid frequency, Hz [22040]")
        p.add_argument("--n-samples", dest="n_samples", type=int, help="Impulse response length [131072]")
        p.add_argument("--cutoff", type=float, help="Cutoff of the analysed pole, Hz [10000]")
        p.add_argument("--sweep-points", dest="sweep_points", type=int, help="Cutoffs in the pole sweep [64]")
        p.add_argument("--sweep-fmin", dest="sweep_fmin", type=float, help="Lowest sweep cutoff, Hz [20]")
        p.add_argument("--sweep-fmax", dest="sweep_fmax", type=float, help="Highest sweep cutoff, Hz [20000]")
        p.add_argument("--extra-poles", dest="extra_poles", help="Extra pole values [0.999,0.9999]")

        p = sub.add_parser('metrics', help="SNRH/SNRA tone sweeps and audio SNR")
        models(p, True)
        p.add_argument("--methods", help="Comma separated methods [all]")
        p.add_argument("--rates", help="Comma separated target rates, Hz [48000,88200,96000]")
        p.add_argument("--tones", help="'piano' or comma separated frequencies, Hz [piano]")
        p.add_argument("--amplitude", type=float, help="Tone amplitude [0.1]")
        p.add_argument("--duration", type=float, help="Tone duration, s [1.0]")
        p.add_argument("--settle", type=float, help="Discarded start of each output, s [0.1]")
        p.add_argument("--extractor", choices=EXTRACTORS,
                       help="Harmonic extractor, spectral peak or least squares [peak]")
        p.add_argument("--alias-grid", dest="alias_grid", choices=ALIAS_GRIDS,
                       help="SNRA comparison grid, base rate or oversampled [base]")
        p.add_argument("--workers", type=int, help="Worker threads [4]")
        p.add_argument("-o", "--output", metavar="CSV", help="Metrics CSV [stdout]")
        p.add_argument("--audio", metavar="WAV", help="Also measure SNR on this recording at the training rate")
        p.add_argument("--audio-output", dest="audio_output", metavar="CSV", help="Audio SNR CSV [stdout]")

        p = sub.add_parser('bench', help="Real-time factor benchmark")
        p.add_argument("--sizes", help="Comma separated GRU hidden sizes [24,32,...,72]")
        p.add_argument("--methods", help="Comma separated methods [Naive,Delay,STN,LIDL,APDL,CIDL]")
        p.add_argument("--duration", type=float, help="Audio length, s [100]")
        p.add_argument("--rate", type=float, help="Processing rate, Hz [96000]")
        p.add_argument("--repeats", type=int, help="Timed runs per measurement [5]")
        p.add_argument("--warmup", type=float, help="Warm-up audio length, s [1]")
        p.add_argument("--seed", type=int, help="Seed for models and input [0]")
        p.add_argument("--cpu", help="Pin to this CPU [unpinned]")
        p.add_argument("-o", "--output", metavar="CSV", help="Timings CSV [stdout]")

        self.options = parser.parse_args(argv)
        self.options.confFiles = [os.path.expanduser(f) for f in self.options.confFiles.split(',') if f]

    def __setuplogging(self):
        """
        Setup logging
        """
        self.log = logging.getLogger()
        for handler in SRIRNNCLI._handlers:
            self.log.removeHandler(handler)
        SRIRNNCLI._handlers = []

        if self.options.logfile == "stdout":
            logStream = logging.StreamHandler()
        else:
            lf = os.path.expanduser(self.options.logfile)
            logdir = os.path.dirname(lf)
            if logdir and not os.path.exists(logdir):
                os.makedirs(logdir)
            logStream = logging.handlers.RotatingFileHandler(filename=lf,
                                                             maxBytes=1024 * 1024 * self.options.maxlogsize,
                                                             backupCount=self.options.logrotations)
        FORMAT = '%(asctime)s (UTC) [ %(levelname)s ] %(name)s %(filename)s:%(lineno)d %(funcName)s(): %(message)s'
        formatter = logging.Formatter(FORMAT)
        formatter.converter = time.gmtime
        logStream.setFormatter(formatter)
        self.log.addHandler(logStream)
        SRIRNNCLI._handlers.append(logStream)

        # console handler, only for DEBUG and INFO modes
        if self.options.logLevel in [logging.DEBUG, logging.INFO]:
            if self.options.console:
                console = logging.StreamHandler(sys.stdout)
                console.setFormatter(formatter)
                console.setLevel(self.options.logLevel)
                self.log.addHandler(console)
                SRIRNNCLI._handlers.append(console)
        self.log.setLevel(self.options.logLevel)
        self.log.info('Logging initialized at level %s.' % self.options.logLevel)

    def __platforminfo(self):
        '''
        display basic info about the platform, for debugging purposes
        '''
        self.log.info('platform: uname = %s %s %s %s %s %s' % tuple(platform.uname()))
        self.log.info('platform: platform = %s' % platform.platform())
        self.log.info('platform: python version = %s' % platform.python_version())

    def __createconfig(self):
        """
        Read the config files, then resolve the run settings with flags taking precedence.
        """
        self.log.debug("Conf file list %s" % self.options.confFiles)
        self.config = ConfigParser()
        rfs = self.config.read(self.options.confFiles)
        self.log.debug("Read config file(s) %s" % rfs)

    def _error(self, e):
        sys.stderr.write(json.dumps({'status': 'error',
                                     'error': e.__class__.__name__,
                                     'message': str(e.value) if isinstance(e, SRIRNNException) else str(e)}) + "\n")
        sys.stderr.flush()

    def run(self):
        """
        Run the selected subcommand. Returns the process exit status.
        """
        try:
            self.runconfig = RunConfig.from_sources(self.options, self.config)
            self.log.debug("Run configuration %s" % (self.runconfig,))
            COMMANDS[self.options.command](self.runconfig)
            return 0
        except KeyboardInterrupt:
            self.log.info('Caught keyboard interrupt - exiting')
            return 130
        except SRIRNNException as e:
            self.log.error('%s: %s' % (e.__class__.__name__, e))
            self._error(e)
            return 1
        except Exception as e:
            self.log.error('Unexpected exception!')
            self.log.error(traceback.format_exc(None))
            self._error(e)
            return 1


def main(argv=None):
    return SRIRNNCLI(argv).run()


if __name__ == '__main__':
    sys.exit(main())
