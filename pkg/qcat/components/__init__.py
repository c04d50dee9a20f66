from qcat.components.clock import MonotonicClock
from qcat.components.executor import ConcurrentExecutor, InlineExecutor, sweep_executor

__all__ = ["MonotonicClock", "ConcurrentExecutor", "InlineExecutor", "sweep_executor"]
