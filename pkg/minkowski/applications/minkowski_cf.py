"""
Closed-Form Minkowski Sum Boundaries
====================================

Two convex bodies with smooth, positively curved boundaries kiss at a
single point. There, the gradient of body 2 is anti-parallel to the
gradient m1 of body 1. Its magnitude Phi(m1) has a closed form, so the
boundary of the contact space B1 + (-B2) is

    x(m1) = f1(m1) - f2(-(Phi(m1) / |m1|) m1)

where f_i maps a gradient back to the boundary point that carries it.
The plain sum B1 + B2 flips the sign of body 2's term and of its
argument. Linearly transformed bodies x' = M x reuse the same formula
once the gradient is carried through M^-T.

For ellipsoids the same boundary also has normal-parameterized and
angle-parameterized forms. They are kept here because the gradient route
must reproduce them.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import BoundaryCloudError, DomainError, InconsistentGradientError
from .geom_core import (
    BodyInstance,
    check_spd,
    ellipsoid_normal_point,
    g_inverse_direction,
    gradient_from_u,
    normalize,
    phi_grid,
    point_from_gradient,
    u_from_phi,
)

logger = logging.getLogger(__name__)

CONTACT = 'contact'
SUM = 'sum'
MODES = (CONTACT, SUM)


def _check_mode(mode):
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True, eq=False)
class MinkSumQuery:
    """Two placed bodies and whether to build B1 + B2 (sum) or B1 + (-B2) (contact)."""
    body1: BodyInstance
    body2: BodyInstance
    mode: str = CONTACT

    def __post_init__(self):
        if self.body1.dim != self.body2.dim:
            raise DomainError(
                f"bodies live in different dimensions ({self.body1.dim} vs {self.body2.dim})")
        _check_mode(self.mode)

    @property
    def dim(self):
        return self.body1.dim

    @property
    def center_offset(self):
        return self.body2.center - self.body1.center

    def with_mode(self, mode):
        return MinkSumQuery(self.body1, self.body2, mode)


@dataclass(frozen=True, eq=False)
class BoundaryCloud:
    """World-frame boundary points with the body-1 angles that generated them."""
    points: np.ndarray
    params: np.ndarray
    query: MinkSumQuery

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        params = np.asarray(self.params, dtype=float)
        if len(points) != len(params):
            raise DomainError(f"{len(points)} points but {len(params)} parameters")
        if not np.all(np.isfinite(points)):
            raise DomainError("boundary cloud holds non-finite points")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'params', params)

    def __len__(self):
        return len(self.points)

    @property
    def mode(self):
        return self.query.mode

    def normals(self):
        """Outward unit normals of the sum boundary, one per point."""
        return normalize(self.query.body1.world_gradient(self.params))


def _gradient_at(shape, phi):
    phi = np.asarray(phi, dtype=float)
    if phi.shape[-1] != shape.dim - 1:
        raise DomainError(f"a {shape.dim}D body takes {shape.dim - 1} angle(s) per point")
    return gradient_from_u(shape, u_from_phi(phi))


def phi_magnitude(body2, m1):
    """
    Magnitude of body 2's gradient where it kisses a body-1 gradient m1.

    The unit direction on body 2 is u2 = normalize(g2^-1(-m1)), with the
    sign carried through the signed powers, and Phi = |g2(u2)|.
    """
    u2 = normalize(g_inverse_direction(body2, -np.asarray(m1, dtype=float)))
    return np.linalg.norm(gradient_from_u(body2, u2), axis=-1)


def _second_body_term(shape2, m, mode):
    """Body 2's contribution for body-1 gradients m (both in body 2's frame)."""
    m = np.asarray(m, dtype=float)
    facing = -m if mode == CONTACT else m
    magnitude = phi_magnitude(shape2, -facing)
    scale = magnitude / np.linalg.norm(m, axis=-1)
    point2 = point_from_gradient(shape2, scale[..., None] * facing)
    return -point2 if mode == CONTACT else point2


def sum_point_gradient(query, phi1):
    """Sum boundary for canonical bodies, parameterized by body 1's angles."""
    if not (query.body1.has_identity_map and query.body2.has_identity_map):
        raise DomainError("sum_point_gradient takes canonical bodies; use sum_point_transformed")
    shape1 = query.body1.shape
    m1 = _gradient_at(shape1, phi1)
    return point_from_gradient(shape1, m1) + _second_body_term(query.body2.shape, m1, query.mode)


def sum_point_normal(A1, A2, n1, mode=CONTACT):
    """
    Ellipsoid sum boundary parameterized by the outward unit normal n1.

    Ellipsoids are centrally symmetric, so contact and sum modes coincide.
    """
    _check_mode(mode)
    return ellipsoid_normal_point(A1, n1) + ellipsoid_normal_point(A2, n1)


def ellipsoid_phi_magnitude(A2, m1):
    A2 = check_spd(A2)
    m1 = np.asarray(m1, dtype=float)
    return 2 * np.linalg.norm(m1, axis=-1) / np.linalg.norm(m1 @ A2, axis=-1)


def ellipsoid_sum_point_gradient(A1, A2, m1, mode=CONTACT):
    """Ellipsoid sum boundary parameterized by body 1's un-normalized gradient."""
    _check_mode(mode)
    A1 = check_spd(A1)
    m1 = np.asarray(m1, dtype=float)
    scale = ellipsoid_phi_magnitude(A2, m1) / np.linalg.norm(m1, axis=-1)
    m2 = -scale[..., None] * m1
    # f(m) = A^2 m / 2 for an ellipsoid
    return 0.5 * m1 @ (A1 @ A1) - 0.5 * m2 @ (A2 @ A2)


def ellipsoid_sum_point_phi(A1, A2, phi):
    """Ellipsoid sum boundary parameterized by body 1's surface angles."""
    A1 = check_spd(A1)
    A2 = check_spd(A2)
    u = u_from_phi(phi)
    w = u @ np.linalg.inv(A1)
    return u @ A1 + (w @ (A2 @ A2)) / np.linalg.norm(w @ A2, axis=-1, keepdims=True)


def sum_point_transformed(query, phi1=None, *, m1_world=None):
    """
    Sum boundary for bodies under invertible linear maps, relative to c1.

    Pass either body 1's angles phi1, whose canonical gradient is carried
    to the world as M1^-T m1, or a world-frame gradient m1_world directly.
    Both routes meet in the same formula and return the same point.
    """
    if (phi1 is None) == (m1_world is None):
        raise DomainError("pass exactly one of phi1 or m1_world")
    body1, body2 = query.body1, query.body2
    if phi1 is not None:
        m1 = _gradient_at(body1.shape, phi1)
        m1_world = body1.gradient_to_world(m1)
    else:
        m1_world = np.asarray(m1_world, dtype=float)
        m1 = m1_world @ body1.linear_map
    m_body2 = m1_world @ body2.linear_map
    x1 = point_from_gradient(body1.shape, m1) @ body1.linear_map.T
    x2 = _second_body_term(body2.shape, m_body2, query.mode) @ body2.linear_map.T
    return x1 + x2


def _cloud_chunk(query, params):
    try:
        x = sum_point_transformed(query, params)
    except InconsistentGradientError as exc:
        phi = params[exc.index] if exc.index is not None else None
        raise BoundaryCloudError(f"boundary point failed at phi={phi}: {exc}", phi=phi) from exc
    finite = np.all(np.isfinite(x), axis=-1)
    if not np.all(finite):
        phi = params[int(np.flatnonzero(~finite)[0])]
        raise BoundaryCloudError(f"non-finite boundary point at phi={phi}", phi=phi)
    return query.body1.center + x


def boundary_cloud(query, grid, workers=1):
    """
    Evaluate the sum boundary over a parameter grid.

    grid is either a size (see phi_grid) or an explicit array of angles.
    With workers > 1 the grid is split into contiguous chunks evaluated on
    a thread pool; results are concatenated in grid order.
    """
    if np.ndim(grid) == 0:
        params = phi_grid(query.dim, grid)
    else:
        params = np.asarray(grid, dtype=float).reshape(-1, query.dim - 1)
    if len(params) == 0:
        raise DomainError("boundary cloud needs a nonempty grid")

    workers = max(1, min(int(workers), len(params)))
    if workers == 1:
        points = _cloud_chunk(query, params)
    else:
        chunks = np.array_split(params, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = np.vstack(list(pool.map(partial(_cloud_chunk, query), chunks)))

    logger.debug("boundary cloud: %d points, dim=%d, mode=%s", len(points), query.dim, query.mode)
    return BoundaryCloud(points=points, params=params, query=query)
