from __future__ import annotations

import abc
from typing import TYPE_CHECKING, Callable, Iterable, Protocol, Sequence, TypeVar

from qcat.types import ComplexArray

if TYPE_CHECKING:
    from qcat.heisenberg.state import QuantumState

T = TypeVar("T")
R = TypeVar("R")


class Clock(abc.ABC):
    def now(self) -> float:
        raise NotImplementedError


class Operator(abc.ABC):
    """
    Linear map on the N-dimensional space of quantum states, expressed against the
    standard basis `{e_j^0}`.

    Implementations must support both the matrix-free action on a state and
    materialization as a dense matrix; the two have to agree.
    """

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        raise NotImplementedError

    @abc.abstractmethod
    def apply_array(self, coords: ComplexArray) -> ComplexArray:
        """
        Apply to raw coordinates. `coords` is either an N-vector or an N x k block
        whose columns are states.
        """
        raise NotImplementedError

    @abc.abstractmethod
    def matrix(self) -> ComplexArray:
        raise NotImplementedError

    def apply(self, state: QuantumState) -> QuantumState:
        from qcat.heisenberg.state import QuantumState

        if state.N != self.dimension:
            raise ValueError(
                f"State of dimension {state.N} given to operator of dimension {self.dimension}"
            )
        return QuantumState(self.dimension, self.apply_array(state.coords))

    def __matmul__(self, state: QuantumState) -> QuantumState:
        return self.apply(state)


class SweepExecutor(Protocol):
    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T], /) -> Sequence[R]:
        """Evaluate `fn` on every item, results in submission order."""
        raise NotImplementedError
