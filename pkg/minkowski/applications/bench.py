"""
Grid-size sweeps timing the closed form against the 2D baselines.

Each measurement runs once to warm up, then `repeats` more times; the
median of those is reported.
"""

import logging
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import linregress

from .baselines_oracle import definition_sum_samples, edge_sort_sum2d, hull2d, sample_surface
from .minkowski_cf import SUM, MinkSumQuery, boundary_cloud
from .primitives import random_body

logger = logging.getLogger(__name__)

CLOSED_FORM = 'closed_form'
HULL = 'hull'
EDGE_SORT = 'edge_sort'


@dataclass(frozen=True)
class BenchRow:
    method: str
    n: int
    seconds: float

    def to_json_dict(self):
        return asdict(self)


def time_median(fn, repeats=5):
    fn()
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return float(np.median(samples))


def bench_sweep(dim, sizes, repeats=5, seed=0, baselines=True):
    """
    Time one random body pair over grid sizes.

    In 2D, n is the number of samples per body and the baselines (hull of
    all n^2 pairwise sums, and edge sorting of the two sampled polygons)
    run on the same samples. In 3D only the closed form runs, on an n x n
    angle grid, and n is reported as the resulting number of points.
    """
    rng = np.random.default_rng(seed)
    query = MinkSumQuery(random_body(rng, dim), random_body(rng, dim), SUM)
    rows = []
    for n in sizes:
        n = int(n)
        cloud = boundary_cloud(query, n)
        seconds = time_median(lambda: boundary_cloud(query, n), repeats)
        rows.append(BenchRow(CLOSED_FORM, len(cloud), seconds))
        logger.info("bench %s n=%d: %.6fs", CLOSED_FORM, len(cloud), seconds)
        if dim != 2 or not baselines:
            continue

        s1 = sample_surface(query.body1, n)
        s2 = sample_surface(query.body2, n)
        seconds = time_median(lambda: hull2d(definition_sum_samples(s1, s2, SUM)), repeats)
        rows.append(BenchRow(HULL, n, seconds))
        logger.info("bench %s n=%d: %.6fs", HULL, n, seconds)

        P, Q = hull2d(s1), hull2d(s2)
        seconds = time_median(lambda: edge_sort_sum2d(P, Q), repeats)
        rows.append(BenchRow(EDGE_SORT, n, seconds))
        logger.info("bench %s n=%d: %.6fs", EDGE_SORT, n, seconds)
    return rows


def linear_fit_r2(n, seconds):
    """R^2 of a straight-line fit of time against size."""
    return float(linregress(np.asarray(n, dtype=float), np.asarray(seconds, dtype=float)).rvalue ** 2)


def loglog_exponent(n, seconds):
    """Slope of log(time) against log(size): 1 for linear growth, 2 for quadratic."""
    fit = linregress(np.log(np.asarray(n, dtype=float)), np.log(np.asarray(seconds, dtype=float)))
    return float(fit.slope)


def rows_for(rows, method):
    picked = [r for r in rows if r.method == method]
    return [r.n for r in picked], [r.seconds for r in picked]
