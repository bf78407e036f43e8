"""
Baselines and Verification Oracles
==================================

Independent ways of checking the closed-form sums:

- definition_sum_samples / hull2d: the sum taken by its definition (all
  pairwise sums of sampled points), then a monotone-chain hull.
- edge_sort_sum2d: the linear-time sum of two convex polygons by merging
  their edges in slope order.
- support_check: a one-sided, discretization-free test. The closed-form
  point in direction n must be at least as far along n as any pairwise
  sum of sampled points.
- kissing_errors: body 2 placed on each boundary point must touch body 1
  at exactly the generating point. That means the implicit value is 1 and
  the gradients are anti-parallel.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHullError, DomainError
from .geom_core import implicit_gradient, implicit_value, normalize, phi_grid
from .minkowski_cf import CONTACT, MODES

logger = logging.getLogger(__name__)

# Absolute tolerance on 2D cross products (inputs are O(1) in scale)
CROSS_TOL = 1e-12


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """
    Convex polygon with counter-clockwise vertices.

    A single vertex is accepted as a degenerate polygon (a point), which
    edge_sort_sum2d treats as a pure translation.
    """
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        n = len(v)
        if n == 0 or n == 2:
            raise DomainError(f"a polygon needs 1 or at least 3 vertices, got {n}")
        if n >= 3:
            edges = np.roll(v, -1, axis=0) - v
            if np.any(np.linalg.norm(edges, axis=1) <= CROSS_TOL):
                raise DomainError("polygon has duplicate vertices")
            nxt = np.roll(edges, -1, axis=0)
            turns = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
            if np.any(turns <= 0):
                raise DomainError("polygon is not strictly convex and counter-clockwise")
            winding = np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
            if winding <= 0:
                raise DomainError("polygon winds more than once")
        v.setflags(write=False)
        object.__setattr__(self, 'vertices', v)

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class KissingReport:
    mean_implicit: float
    max_implicit: float
    mean_gradient: float
    max_gradient: float
    n_points: int

    def to_json_dict(self):
        return {
            'mean_implicit': self.mean_implicit,
            'max_implicit': self.max_implicit,
            'mean_gradient': self.mean_gradient,
            'max_gradient': self.max_gradient,
            'n_points': self.n_points,
        }


def sample_surface(body, grid):
    """World-frame boundary samples of a placed body on the shared angle grid."""
    params = phi_grid(body.dim, grid) if np.ndim(grid) == 0 else np.asarray(grid, dtype=float)
    return body.surface_points(params)


def definition_sum_samples(cloud1, cloud2, mode=CONTACT):
    """All pairwise x - y (contact) or x + y (sum), x from cloud1, y from cloud2."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    a = np.asarray(cloud1, dtype=float)
    b = np.asarray(cloud2, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise DomainError("definition sum needs two nonempty clouds")
    if mode == CONTACT:
        b = -b
    return (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[-1])


def hull2d(points):
    """
    Convex hull by Andrew's monotone chain.

    Returns the hull counter-clockwise from the lowest-leftmost vertex by x,
    without collinear vertices (cross products within CROSS_TOL count as
    collinear).
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise DegenerateHullError(f"hull needs 3 distinct points, got {len(pts)}")
    ordered = [tuple(p) for p in pts]

    lower = []
    for p in ordered:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= CROSS_TOL:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(ordered):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= CROSS_TOL:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHullError("all input points are collinear")
    return Polygon2D(np.array(hull))


def _start_at_bottom(v):
    """Roll vertices so the lowest (then leftmost) one comes first."""
    start = np.lexsort((v[:, 0], v[:, 1]))[0]
    return np.roll(v, -start, axis=0)


def edge_sort_sum2d(P, Q):
    """
    Minkowski sum of two convex polygons by merging edges in slope order.

    Both walks start at their lowest vertex. The next edge with the smaller
    polar angle advances; parallel edges advance together, so no collinear
    vertex appears in the output.
    """
    if not isinstance(P, Polygon2D):
        P = Polygon2D(P)
    if not isinstance(Q, Polygon2D):
        Q = Polygon2D(Q)
    if len(Q) == 1:
        return Polygon2D(P.vertices + Q.vertices[0])
    if len(P) == 1:
        return Polygon2D(Q.vertices + P.vertices[0])

    p = _start_at_bottom(P.vertices)
    q = _start_at_bottom(Q.vertices)
    n, m = len(p), len(q)
    i = j = 0
    out = []
    while i < n or j < m:
        out.append(p[i % n] + q[j % m])
        ep = p[(i + 1) % n] - p[i % n]
        eq = q[(j + 1) % m] - q[j % m]
        turn = ep[0] * eq[1] - ep[1] * eq[0]
        if j >= m or (i < n and turn > 0):
            i += 1
        elif i >= n or turn < 0:
            j += 1
        else:
            i += 1
            j += 1
    return Polygon2D(np.array(out))


def support_check(cloud, samples1, samples2):
    """
    Largest amount by which sampled pairwise sums beat the closed form.

    For each cloud point x with outward normal n, computes
    max over sampled sums p of <n, p> - <n, x>. The sampled sums lie inside
    the exact sum and x is its exact support point along n, so the result
    is <= 0 up to round-off however coarse the samples are.

    samples1 are world-frame points of body 1; samples2 are points of body 2
    relative to its own center (M2 f(phi)).
    """
    normals = cloud.normals()
    s1 = np.asarray(samples1, dtype=float)
    s2 = np.asarray(samples2, dtype=float)
    if cloud.mode == CONTACT:
        s2 = -s2
    # the max over pairwise sums separates into per-body maxima
    best = (normals @ s1.T).max(axis=1) + (normals @ s2.T).max(axis=1)
    attained = np.einsum('ij,ij->i', normals, cloud.points)
    return float(np.max(best - attained))


def kissing_errors(query, cloud):
    """
    Place body 2's center on every contact-space point and measure how well
    the generating point of body 1 is a kissing point.
    """
    if cloud.mode != CONTACT:
        raise DomainError("kissing errors are defined for contact-mode clouds")
    body1, body2 = query.body1, query.body2
    x1 = body1.surface_points(cloud.params)
    x1_in_2 = (x1 - cloud.points) @ body2.inverse_map.T

    e_implicit = np.abs(implicit_value(body2.shape, x1_in_2) - 1)

    n1 = normalize(body1.gradient_to_world(implicit_gradient(body1.shape, body1.world_to_local(x1))))
    n2 = normalize(body2.gradient_to_world(implicit_gradient(body2.shape, x1_in_2)))
    e_gradient = np.abs(np.einsum('ij,ij->i', n1, n2) + 1)

    report = KissingReport(
        mean_implicit=float(e_implicit.mean()),
        max_implicit=float(e_implicit.max()),
        mean_gradient=float(e_gradient.mean()),
        max_gradient=float(e_gradient.max()),
        n_points=len(cloud),
    )
    logger.debug("kissing report: %s", report)
    return report
