from __future__ import annotations

from concurrent.futures import Executor as _Executor
from concurrent.futures import Future as _Future
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

from qcat.interfaces import SweepExecutor
from qcat.types import Logger
from qcat.utils import get_logger

T = TypeVar("T")
R = TypeVar("R")


class InlineExecutor(SweepExecutor):
    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T], /) -> Sequence[R]:
        return [fn(item) for item in items]


class ConcurrentExecutor(SweepExecutor):
    """
    Runs sweep items on a `concurrent.futures` executor. Heavy numpy kernels
    release the GIL, so a thread pool is enough for dense matrix work.
    """

    def __init__(self, executor: _Executor, *, logger: Logger | None = None) -> None:
        self._executor = executor
        self._logger = (logger or get_logger()).bind(component="sweep-executor")

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T], /) -> Sequence[R]:
        futures: list[_Future[R]] = [self._executor.submit(fn, item) for item in items]
        self._logger.trace("Sweep submitted", items_num=len(futures))
        try:
            return [future.result() for future in futures]
        except BaseException:
            for future in futures:
                future.cancel()
            raise


@contextmanager
def sweep_executor(
    workers: int | None = None,
    override_executor: _Executor | None = None,
) -> Iterator[SweepExecutor]:
    if override_executor is None and (workers is None or workers <= 1):
        yield InlineExecutor()
        return

    std_executor = override_executor or ThreadPoolExecutor(
        max_workers=workers, thread_name_prefix="qcat-sweep"
    )
    try:
        yield ConcurrentExecutor(std_executor)
    finally:
        if not override_executor:
            std_executor.shutdown(wait=True, cancel_futures=True)
