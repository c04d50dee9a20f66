from __future__ import annotations

import datetime
import os
import sys
import types
from typing import TYPE_CHECKING, Type

import loguru

if TYPE_CHECKING:
    from qcat.interfaces import Clock
    from qcat.types import Logger


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in {"", "0", "false", "no", "off"}


def debug_enabled() -> bool:
    """Oracle cross-checks run when `QCAT_DEBUG` is set (or Python runs without `-O`)."""
    return _env_flag("QCAT_DEBUG", __debug__)


def get_logger() -> Logger:
    return loguru.logger


def configure_logging(level: str = "WARNING") -> None:
    loguru.logger.remove()
    loguru.logger.add(
        sys.stderr,
        level=level.upper(),
        format="<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <7}</level> | "
        "{extra[component]} | {message} | {extra}",
    )
    loguru.logger.configure(extra={"component": "-"})


class MeasureElapsed:
    def __init__(self, clock: Clock, label: str, *, logger: Logger | None = None) -> None:
        self._clock = clock
        self._label = label
        self._logger = logger
        self._started_at: float | None = None
        self._elapsed: float | None = None

    def get_elapsed(self) -> datetime.timedelta:
        if self._started_at is None:
            raise RuntimeError("Measure not started")
        if self._elapsed is not None:
            return datetime.timedelta(seconds=self._elapsed)
        return datetime.timedelta(seconds=self._clock.now() - self._started_at)

    def get_elapsed_sec(self) -> float:
        return self.get_elapsed() / datetime.timedelta(seconds=1)

    def __enter__(self) -> MeasureElapsed:
        self._started_at = self._clock.now()
        self._elapsed = None
        return self

    def __exit__(
        self,
        exc_type: Type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: types.TracebackType | None,
    ) -> bool | None:
        assert self._started_at is not None
        self._elapsed = self._clock.now() - self._started_at
        if self._logger is not None:
            self._logger.debug(
                f"{self._label} finished", elapsed=self._elapsed, failed=exc_type is not None
            )
        return None
