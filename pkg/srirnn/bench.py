#!/bin/env python
'''
Real-time factor of adapted GRU models: F_RT = T_audio / T_proc.
'''

__license__ = "GPL"
__version__ = "1.0.0"
__status__ = "Production"

import csv
import logging
import os
import platform
import time

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from srirnn.adapt import AdaptationMethod, AdaptedProcessor
from srirnn.rnn import random_model

SIZES = tuple(range(24, 73, 8))
METHODS = ('Naive', 'Delay', 'STN', 'LIDL', 'APDL', 'CIDL')
CSV_COLUMNS = ('size', 'method', 't_audio', 't_proc', 'f_rt', 'pct_vs_naive')


@dataclass(frozen=True)
class BenchResult(object):
    size: int
    method: str
    t_audio: float
    t_proc: float
    f_rt: float
    pct_vs_naive: Optional[float] = None


def percent_change(f_rt, f_rt_naive):
    return 100.0 * (f_rt - f_rt_naive) / f_rt_naive


def platform_info():
    return {'platform': platform.platform(),
            'machine': platform.machine(),
            'processor': platform.processor(),
            'python': platform.python_version(),
            'numpy': np.__version__}


class Benchmark(object):
    '''
    Times every (hidden size, method) pair on the same noise input.

    Each pair gets one untimed warm-up pass over `warmup` seconds of audio, then
    `repeats` timed passes over the full input from zero state; T_proc is their median.
    '''
    def __init__(self, sizes=SIZES, methods=METHODS, duration=100.0, rate=96000.0, repeats=5, warmup=1.0,
                 seed=0, train_rate=44100.0, cpu=None, clock=time.perf_counter):
        self.log = logging.getLogger()
        self.sizes = tuple(int(s) for s in sizes)
        self.methods = tuple(methods)
        self.duration = float(duration)
        self.rate = float(rate)
        self.repeats = max(1, int(repeats))
        self.warmup = float(warmup)
        self.seed = seed
        self.train_rate = float(train_rate)
        self.cpu = cpu
        self.clock = clock

    def pin(self):
        if self.cpu is None:
            return False
        if not hasattr(os, 'sched_setaffinity'):
            self.log.warning("CPU pinning is not available on this platform, running unpinned")
            return False
        os.sched_setaffinity(0, {int(self.cpu)})
        self.log.info("Pinned benchmark to CPU %d" % int(self.cpu))
        return True

    def signal(self):
        n = int(round(self.duration * self.rate))
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-0.5, 0.5, n)

    def time_one(self, model, method, samples):
        warm = samples[:int(round(self.warmup * self.rate))]
        if len(warm):
            AdaptedProcessor(model, method).process(warm)
        times = []
        for _ in range(self.repeats):
            processor = AdaptedProcessor(model, method)
            start = self.clock()
            processor.process(samples)
            times.append(self.clock() - start)
        return float(np.median(times))

    def run(self):
        self.pin()
        samples = self.signal()
        t_audio = len(samples) / self.rate
        M = self.rate / self.train_rate
        self.log.info("Benchmark: sizes %s, methods %s, %.3g s at %g Hz (M=%.6g), %d repeats" % (
            list(self.sizes), list(self.methods), t_audio, self.rate, M, self.repeats))
        results = []
        for size in self.sizes:
            model = random_model('GRU', size, seed=self.seed, train_rate=self.train_rate)
            row = []
            for kind in self.methods:
                t_proc = self.time_one(model, AdaptationMethod(kind, M), samples)
                f_rt = t_audio / t_proc if t_proc > 0 else float('inf')
                self.log.debug("H=%d %s: T_proc %.4f s, F_RT %.3f" % (size, kind, t_proc, f_rt))
                row.append(BenchResult(size, kind, t_audio, t_proc, f_rt))
            naive = [r.f_rt for r in row if r.method == 'Naive']
            if naive:
                row = [replace(r, pct_vs_naive=percent_change(r.f_rt, naive[0])) for r in row]
            results.extend(row)
        return results


def summarize(results):
    '''
    Mean percent change against naive per method, in first-seen method order.
    '''
    table = {}
    for r in results:
        if r.pct_vs_naive is not None:
            table.setdefault(r.method, []).append(r.pct_vs_naive)
    return dict((method, float(np.mean(values))) for method, values in table.items())


def write_csv(results, stream):
    writer = csv.writer(stream)
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow([r.size, r.method, repr(r.t_audio), repr(r.t_proc), repr(r.f_rt),
                         '' if r.pct_vs_naive is None else repr(r.pct_vs_naive)])


def format_table(results, info=None):
    '''
    Mean real-time factor change against the naive method, one row per method.
    '''
    summary = summarize(results)
    sizes = sorted(set(r.size for r in results))
    lines = []
    if info:
        lines.append("# " + ", ".join("%s: %s" % (k, info[k]) for k in sorted(info)))
    if sizes:
        lines.append("# GRU hidden sizes %d-%d, %d sizes" % (sizes[0], sizes[-1], len(sizes)))
    lines.append("%-8s %12s %10s" % ('Method', 'mean F_RT', '% change'))
    for method in dict.fromkeys(r.method for r in results):
        f_rt = np.mean([r.f_rt for r in results if r.method == method])
        pct = summary.get(method)
        lines.append("%-8s %12.3f %10s" % (method, f_rt, '-' if pct is None else '%+.2f' % pct))
    return "\n".join(lines) + "\n"
