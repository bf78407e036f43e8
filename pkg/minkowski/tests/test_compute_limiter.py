import threading
import time

from django.test import SimpleTestCase, override_settings

from minkowski.applications import compute_limiter
from minkowski.applications.compute_limiter import ComputeLimiter, get_compute_limiter


class ComputeLimiterTests(SimpleTestCase):
    def test_non_blocking_acquire_fails_when_full(self):
        limiter = ComputeLimiter(max_concurrent=2)
        self.assertTrue(limiter.acquire(blocking=False))
        self.assertTrue(limiter.acquire(blocking=False))
        self.assertFalse(limiter.acquire(blocking=False))
        self.assertEqual(limiter.get_available_slots(), 0)
        limiter.release()
        self.assertEqual(limiter.get_available_slots(), 1)
        self.assertTrue(limiter.acquire(blocking=False))

    def test_blocking_acquire_times_out(self):
        limiter = ComputeLimiter(max_concurrent=1, timeout=0.05)
        with limiter:
            self.assertFalse(limiter.acquire())
        self.assertEqual(limiter.get_available_slots(), 1)

    def test_concurrency_never_exceeds_the_limit(self):
        limiter = ComputeLimiter(max_concurrent=3)
        active = []
        peak = []
        lock = threading.Lock()

        def work():
            with limiter:
                with lock:
                    active.append(1)
                    peak.append(len(active))
                time.sleep(0.01)
                with lock:
                    active.pop()

        threads = [threading.Thread(target=work) for _ in range(12)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        self.assertLessEqual(max(peak), 3)

    @override_settings(MINKSUM_MAX_CONCURRENT=5)
    def test_global_limiter_is_sized_from_settings(self):
        self.addCleanup(setattr, compute_limiter, '_limiter', compute_limiter._limiter)
        compute_limiter._limiter = None
        limiter = get_compute_limiter()
        self.assertEqual(limiter.max_concurrent, 5)
        self.assertIs(get_compute_limiter(), limiter)


class SlotTests(SimpleTestCase):
    def test_slot_is_freed_on_exit(self):
        limiter = ComputeLimiter(max_concurrent=1)
        with limiter.slot() as admitted:
            self.assertTrue(admitted)
            self.assertEqual(limiter.busy, 1)
            with limiter.slot() as second:
                self.assertFalse(second)
        self.assertEqual(limiter.get_available_slots(), 1)

    def test_slot_is_freed_when_the_body_raises(self):
        limiter = ComputeLimiter(max_concurrent=1)
        with self.assertRaises(RuntimeError):
            with limiter.slot():
                raise RuntimeError("boom")
        self.assertEqual(limiter.busy, 0)
