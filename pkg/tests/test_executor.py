import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from qcat.components import ConcurrentExecutor, InlineExecutor, MonotonicClock, sweep_executor
from qcat.utils import MeasureElapsed, get_logger


class TestSweepExecutor:
    @pytest.mark.parametrize("workers", [None, 0, 1])
    def test_inline_for_single_worker(self, workers):
        with sweep_executor(workers) as executor:
            assert isinstance(executor, InlineExecutor)
            assert executor.map_ordered(lambda x: x * x, range(4)) == [0, 1, 4, 9]

    @pytest.mark.timeout(10)
    def test_keeps_submission_order(self):
        def slow_first(x):
            time.sleep(0.05 if x == 0 else 0)
            return x, threading.current_thread().name

        with sweep_executor(4) as executor:
            assert isinstance(executor, ConcurrentExecutor)
            results = executor.map_ordered(slow_first, range(8))

        assert [x for x, _ in results] == list(range(8))
        assert all(name.startswith("qcat-sweep") for _, name in results)

    def test_override_is_not_shut_down(self):
        pool = ThreadPoolExecutor(max_workers=2)

        with sweep_executor(override_executor=pool) as executor:
            executor.map_ordered(abs, [-1, -2])

        assert pool.submit(abs, -3).result() == 3
        pool.shutdown()

    def test_exceptions_propagate(self):
        def boom(x):
            if x == 2:
                raise ZeroDivisionError(x)
            return x

        with sweep_executor(2) as executor:
            with pytest.raises(ZeroDivisionError):
                executor.map_ordered(boom, range(5))

    def test_inline_exceptions_propagate(self):
        with pytest.raises(KeyError):
            InlineExecutor().map_ordered(lambda x: {}[x], [1])


class TestMeasureElapsed:
    def test_not_started(self):
        with pytest.raises(RuntimeError):
            MeasureElapsed(MonotonicClock(), "sweep").get_elapsed()

    def test_frozen_after_exit(self, log_records):
        with MeasureElapsed(MonotonicClock(), "sweep", logger=get_logger()) as measure:
            pass
        elapsed = measure.get_elapsed_sec()

        assert elapsed >= 0
        assert measure.get_elapsed_sec() == elapsed
        assert any(r["message"] == "sweep finished" for r in log_records)


class TestMonotonicClock:
    def test_follows_monotonic_time(self, monkeypatch):
        monkeypatch.setattr("qcat.components.clock.time.monotonic", lambda: 42.5)
        assert MonotonicClock().now() == 42.5

    def test_never_goes_back(self):
        clock = MonotonicClock()
        first = clock.now()
        assert clock.now() >= first
