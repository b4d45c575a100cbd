import threading

import pytest

from mixedness.errors import ConfigError
from mixedness.sweep import WORKERS_ENV, SweepExecutor, workers_from_env


def test_results_keep_input_order():
    points = list(range(40))
    serial = SweepExecutor(1).map(lambda x: x * x, points)
    threaded = SweepExecutor(4).map(lambda x: x * x, points)
    assert serial == threaded == [x * x for x in points]


def test_serial_sweep_runs_in_caller_thread():
    seen = set()

    def record(_):
        seen.add(threading.get_ident())
        return None

    SweepExecutor(1).map(record, range(5))
    assert seen == {threading.get_ident()}


def test_errors_propagate():
    def fail(x):
        if x == 3:
            raise ValueError("boom")
        return x

    with pytest.raises(ValueError):
        SweepExecutor(2).map(fail, range(6))


def test_workers_from_environment(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert workers_from_env() == 1
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert workers_from_env() == 3
    assert SweepExecutor().workers == 3
    for bad in ("zero", "0"):
        monkeypatch.setenv(WORKERS_ENV, bad)
        with pytest.raises(ConfigError):
            workers_from_env()


def test_worker_count_must_be_positive():
    with pytest.raises(ConfigError):
        SweepExecutor(0)
