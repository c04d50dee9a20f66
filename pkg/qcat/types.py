from __future__ import annotations

from typing import Any, Protocol

import numpy as np
import numpy.typing as npt

#: Exact 2x2 integer matrix, row-major
IntMatrix = tuple[tuple[int, int], tuple[int, int]]

#: Integer pair, e.g. a Fourier mode or an orbit point
IntPair = tuple[int, int]

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]


class Logger(Protocol):
    """
    The slice of the loguru logger `qcat` talks to. Keyword parameters end up in the
    record's `extra`; exceptions are attached through `opt(exception=...)`.
    """

    def trace(self, message: str, **params: Any) -> None:
        raise NotImplementedError

    def debug(self, message: str, **params: Any) -> None:
        raise NotImplementedError

    def info(self, message: str, **params: Any) -> None:
        raise NotImplementedError

    def warning(self, message: str, **params: Any) -> None:
        raise NotImplementedError

    def error(self, message: str, **params: Any) -> None:
        raise NotImplementedError

    def opt(self, *, exception: BaseException | bool | None = None) -> Logger:
        raise NotImplementedError

    def bind(self, **params: Any) -> Logger:
        raise NotImplementedError
