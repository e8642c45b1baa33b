#
# Real-time factor benchmark.
#
import csv
import io
import itertools

import pytest

from srirnn.bench import CSV_COLUMNS, BenchResult, Benchmark, format_table, percent_change, platform_info
from srirnn.bench import summarize, write_csv


def fake_clock():
    ticks = itertools.count()
    return lambda: float(next(ticks))


def results():
    return [BenchResult(24, 'Naive', 1.0, 0.5, 2.0, 0.0),
            BenchResult(24, 'CIDL', 1.0, 1.0, 1.0, -50.0),
            BenchResult(32, 'Naive', 1.0, 0.25, 4.0, 0.0),
            BenchResult(32, 'CIDL', 1.0, 0.5, 2.0, -50.0),
            BenchResult(32, 'STN', 1.0, 0.2, 5.0, 25.0)]


def test_percent_change():
    assert percent_change(2.0, 2.0) == 0.0
    assert percent_change(1.0, 2.0) == -50.0
    assert percent_change(0.9, 1.0) == pytest.approx(-10.0)


def test_summarize_and_table():
    summary = summarize(results())
    assert list(summary) == ['Naive', 'CIDL', 'STN']
    assert summary == {'Naive': 0.0, 'CIDL': -50.0, 'STN': 25.0}
    table = format_table(results(), {'python': '3.x'})
    lines = table.splitlines()
    assert lines[0] == '# python: 3.x'
    assert lines[1] == '# GRU hidden sizes 24-32, 2 sizes'
    assert lines[3].split() == ['Naive', '3.000', '+0.00']
    assert lines[4].split() == ['CIDL', '1.500', '-50.00']


def test_write_csv():
    stream = io.StringIO()
    write_csv(results() + [BenchResult(40, 'LIDL', 1.0, 0.5, 2.0)], stream)
    rows = list(csv.reader(io.StringIO(stream.getvalue())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1] == ['24', 'Naive', '1.0', '0.5', '2.0', '0.0']
    assert rows[-1][-1] == ''


def test_benchmark_run_structure():
    bench = Benchmark(sizes=(8, 16), methods=('Naive', 'Delay', 'CIDL'), duration=0.01, rate=96000,
                      repeats=3, warmup=0.001, clock=fake_clock())
    out = bench.run()
    assert [(r.size, r.method) for r in out] == [(8, 'Naive'), (8, 'Delay'), (8, 'CIDL'),
                                               (16, 'Naive'), (16, 'Delay'), (16, 'CIDL')]
    for r in out:
        # every timed pass reads the fake clock twice, one tick apart
        assert r.t_proc == 1.0
        assert r.t_audio == pytest.approx(0.01)
        assert r.f_rt == pytest.approx(0.01)
        assert r.pct_vs_naive == 0.0


def test_benchmark_without_naive_has_no_percentages():
    bench = Benchmark(sizes=(8,), methods=('STN',), duration=0.005, rate=88200, repeats=1, warmup=0.0)
    out = bench.run()
    assert len(out) == 1
    assert out[0].pct_vs_naive is None
    assert out[0].t_proc > 0.0


def test_signal_is_seeded():
    a = Benchmark(duration=0.01, seed=3).signal()
    b = Benchmark(duration=0.01, seed=3).signal()
    assert len(a) == 960
    assert (a == b).all()
    assert abs(a).max() <= 0.5


def test_platform_info():
    info = platform_info()
    assert set(info) >= {'platform', 'python', 'numpy'}
    assert not Benchmark(cpu=None).pin()
