"""
Compute Limiter using Semaphore for Concurrent Request Control
==============================================================

Boundary clouds, validation runs and proximity solves are CPU-bound. The
API admits at most MINKSUM_MAX_CONCURRENT of them per process through a
threading.BoundedSemaphore; a request that finds no free slot is answered
with 429 instead of queueing behind the others.

With several gunicorn workers each process holds its own limiter, so the
server-wide cap is workers * MINKSUM_MAX_CONCURRENT.
"""

import threading
from contextlib import contextmanager
from typing import Iterator, Optional

from .config import max_concurrent


class ComputeLimiter:
    """
    Semaphore-guarded admission for heavy computations.

    Attributes:
        max_concurrent: Slots in the semaphore
        timeout: Seconds a blocking acquire waits before giving up (None = forever)
        busy: Slots currently held
    """

    def __init__(self, max_concurrent: int = 2, timeout: Optional[float] = None):
        self.max_concurrent = max_concurrent
        self.timeout = timeout
        self.busy = 0
        self._semaphore = threading.BoundedSemaphore(max_concurrent)
        self._busy_lock = threading.Lock()

    def acquire(self, blocking: bool = True) -> bool:
        """
        Take a slot.

        Args:
            blocking: If True, wait up to timeout; if False, return immediately

        Returns:
            True if a slot was taken, False on timeout or when non-blocking and full
        """
        if blocking:
            taken = self._semaphore.acquire(timeout=self.timeout)
        else:
            taken = self._semaphore.acquire(blocking=False)
        if taken:
            with self._busy_lock:
                self.busy += 1
        return taken

    def release(self) -> None:
        with self._busy_lock:
            self.busy -= 1
        self._semaphore.release()

    def get_available_slots(self) -> int:
        with self._busy_lock:
            return self.max_concurrent - self.busy

    @contextmanager
    def slot(self) -> Iterator[bool]:
        """
        Non-blocking admission for one request.

        Yields True when a slot was taken (and frees it on exit), False when
        the limiter is full.
        """
        taken = self.acquire(blocking=False)
        try:
            yield taken
        finally:
            if taken:
                self.release()

    def __enter__(self):
        self.acquire()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.release()


_limiter = None
_limiter_lock = threading.Lock()


def get_compute_limiter() -> ComputeLimiter:
    """The process-wide limiter, sized from settings on first use."""
    global _limiter
    with _limiter_lock:
        if _limiter is None:
            _limiter = ComputeLimiter(max_concurrent=max_concurrent(), timeout=10.0)
        return _limiter
