import time

from qcat.interfaces import Clock


class MonotonicClock(Clock):
    def now(self) -> float:
        return time.monotonic()
