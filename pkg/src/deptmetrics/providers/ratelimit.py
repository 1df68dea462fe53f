"""Rolling-window request budget, the gateway's single synchronization point."""

from __future__ import annotations

import threading
import time
from collections import deque
from typing import Callable


class RollingWindowLimiter:
    """Grants at most ``max_requests`` permits per rolling ``window`` seconds.

    ``acquire`` blocks until a permit frees up. Grant timestamps are recorded
    in ``history`` so tests can assert the budget was never exceeded. Clock
    and sleep are injectable for deterministic tests.
    """

    def __init__(
        self,
        max_requests: int,
        window: float,
        *,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if max_requests < 1 or window <= 0:
            raise ValueError("limiter needs max_requests >= 1 and window > 0")
        self.max_requests = max_requests
        self.window = window
        self._clock = clock
        self._sleep = sleep
        self._recent: deque[float] = deque()
        self._lock = threading.Lock()
        self.history: list[float] = []

    def acquire(self) -> float:
        while True:
            with self._lock:
                now = self._clock()
                while self._recent and self._recent[0] <= now - self.window:
                    self._recent.popleft()
                if len(self._recent) < self.max_requests:
                    self._recent.append(now)
                    self.history.append(now)
                    return now
                wait = self._recent[0] + self.window - now
            self._sleep(max(wait, 0.0))
