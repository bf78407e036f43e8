"""
Stage Timer with Mutex for Thread-Safe Accumulation
===================================================

Management commands time their stages (loading, computing, writing) and
record the totals in the run manifest. Stages may run on worker threads,
e.g. one C-obstacle slice per thread, so every update to the shared
totals happens under a threading.Lock. Two threads adding into the same
stage would otherwise lose one of the updates.
"""

import threading
import time
from collections import defaultdict
from contextlib import contextmanager
from typing import Dict


class StageTimer:
    """
    Thread-safe accumulator of wall-clock seconds per named stage.

    Attributes:
        _seconds: Mapping of stage name to accumulated seconds
        _calls: Mapping of stage name to number of timed sections
        _order: Stage names in first-seen order
        _lock: threading.Lock (mutex) protecting shared state
    """

    def __init__(self):
        self._seconds = defaultdict(float)
        self._calls = defaultdict(int)
        self._order = []
        self._lock = threading.Lock()

    def add(self, stage: str, seconds: float) -> float:
        """
        Add elapsed seconds to a stage.

        Args:
            stage: Stage name (e.g. 'compute')
            seconds: Elapsed wall-clock time

        Returns:
            The stage total after the addition
        """
        with self._lock:
            if stage not in self._seconds:
                self._order.append(stage)
            self._seconds[stage] += seconds
            self._calls[stage] += 1
            return self._seconds[stage]

    @contextmanager
    def stage(self, name: str):
        """Time the enclosed block and add it to stage `name`."""
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.add(name, time.perf_counter() - start)

    def get_seconds(self, stage: str) -> float:
        with self._lock:
            return self._seconds.get(stage, 0.0)

    def get_stage_times(self) -> Dict[str, float]:
        """
        Copy of all stage totals, in first-seen order.

        Returns:
            Dictionary mapping stage names to seconds
        """
        with self._lock:
            return {name: self._seconds[name] for name in self._order}

    def get_total(self) -> float:
        with self._lock:
            return sum(self._seconds.values())

    def reset(self) -> None:
        with self._lock:
            self._seconds.clear()
            self._calls.clear()
            self._order.clear()

    def get_stats(self) -> Dict:
        """
        Stage totals, per-stage call counts and the overall total.

        Returns:
            Dictionary suitable for a JSON manifest
        """
        with self._lock:
            return {
                'stage_times': {name: self._seconds[name] for name in self._order},
                'stage_calls': {name: self._calls[name] for name in self._order},
                'total_seconds': sum(self._seconds.values()),
            }
