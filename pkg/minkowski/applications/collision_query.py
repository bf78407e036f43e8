"""
Proximity Queries on the Contact Space
======================================

Three ways to decide whether two placed bodies overlap and, if not, how far
apart they are:

- ray: find where the center ray d = c2 - c1 crosses the contact-space
  boundary. The ratio lambda = |d| / |x*| gives the status only.
- normal: find the contact-space point whose outward normal points at d.
  Its offset to d is the separation vector.
- common: solve for one angle set per body such that the surface normals
  are anti-parallel along the segment joining the two surface points.

Every solve uses nls_solver, started from the default angles and from the
best points of a boundary scan. Cross-product residuals also vanish at the
antipodal configuration, so a solution is accepted only when a sign
condition holds and its residual is small relative to the query's scale.

Near flat faces and sharp corners the boundary can sweep a whole face over
a micro-radian of angle, where finite-difference Newton steps stall. When no
start is accepted the crossing and the nearest point are located without
derivatives: in 2D by root bracketing between scan samples, in 3D by
minimizing support-function bounds over the hemisphere facing d, then
polished with a finer difference step.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import DegenerateQueryError, DomainError, GeometryError
from .geom_core import angles_from_direction, angles_from_point, g_inverse_direction, normalize, wrap_phi
from .minkowski_cf import CONTACT, boundary_cloud, sum_point_transformed
from .nls_solver import SolveResult, SolverConfig, levenberg_marquardt

logger = logging.getLogger(__name__)

SEPARATED = 'separated'
TOUCHING = 'touching'
PENETRATING = 'penetrating'
INCONCLUSIVE = 'inconclusive'

RAY = 'ray'
NORMAL = 'normal'
COMMON = 'common'
METHODS = (RAY, NORMAL, COMMON)

TOUCH_TOL = 1e-8
# A solve counts as a root when its residual norm, over the query's scale, is below this
ACCEPT_TOL = 1e-8

SCAN_GRID = {2: 720, 3: 40}
SCAN_SEEDS = 3
POLISH_FD_STEP = 1e-9
BRACKET_XTOL = 1e-300
BRACKET_MAXITER = 500
SPREAD_TILT = 1e-7
SIMPLEX_RESTARTS = 3
SIMPLEX_OPTIONS = {'xatol': 1e-12, 'fatol': 1e-14, 'maxiter': 2000}


@dataclass
class ProximityResult:
    status: str
    method: str
    distance: float = None
    witness1: np.ndarray = None
    witness2: np.ndarray = None
    phi1: np.ndarray = None
    ray_ratio: float = None
    solver: object = None

    def to_json_dict(self):
        def _listed(v):
            return None if v is None else [float(c) for c in np.ravel(v)]

        return {
            'status': self.status,
            'method': self.method,
            'distance': None if self.distance is None else float(self.distance),
            'witness1': _listed(self.witness1),
            'witness2': _listed(self.witness2),
            'phi1': _listed(self.phi1),
            'ray_ratio': None if self.ray_ratio is None else float(self.ray_ratio),
            'iterations': self.solver.iterations if self.solver is not None else 0,
            'residual_norm': self.solver.residual_norm if self.solver is not None else None,
        }


@dataclass
class _Scan:
    """Contact-space boundary samples: body-1 angles, points relative to c1, outward normals."""
    params: np.ndarray
    points: np.ndarray
    normals: np.ndarray


@dataclass
class _Solution:
    """
    Body-1 angles, the contact-space point they stand for, and how it was
    found. witness is the body-1 surface point when it was computed directly
    rather than from phi.
    """
    phi: np.ndarray
    point: np.ndarray
    solver: SolveResult
    witness: np.ndarray = None

    def body1_point(self, query):
        if self.witness is not None:
            return self.witness
        return query.body1.surface_points(self.phi)


def _cross(a, b):
    """Scalar cross product in 2D (as a length-1 array), the usual one in 3D."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] == 2:
        return np.atleast_1d(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])
    return np.cross(a, b)


def _center_ray(query):
    d = query.center_offset
    scale = max(1.0, float(np.abs(query.body1.linear_map).max()), float(np.abs(query.body2.linear_map).max()))
    if np.linalg.norm(d) <= 1e-12 * scale:
        raise DegenerateQueryError("body centers coincide; there is no center ray")
    return d


def residual_common_normal(query, phi1, phi2):
    """
    n1 x n2, n1 x (x2 - x1) and n1 . n2 + 1, stacked.

    The dot term separates anti-parallel normals from parallel ones, which
    the cross products alone cannot tell apart.
    """
    body1, body2 = query.body1, query.body2
    n1 = normalize(body1.world_gradient(phi1))
    n2 = normalize(body2.world_gradient(phi2))
    gap = body2.surface_points(phi2) - body1.surface_points(phi1)
    return np.concatenate([_cross(n1, n2), _cross(n1, gap), np.atleast_1d(n1 @ n2 + 1)])


def residual_mink_ray(query, phi1):
    """x(phi1) x (c2 - c1): zero where the center ray meets the contact space."""
    d = _center_ray(query)
    return _cross(sum_point_transformed(query, phi1), d)


def residual_mink_normal(query, phi1):
    """m1 x (d - x(phi1)) in the world frame: zero at the point of the contact space nearest d."""
    d = _center_ray(query)
    m1 = query.body1.world_gradient(phi1)
    return _cross(m1, d - sum_point_transformed(query, phi1))


def _antipode(phi):
    phi = np.asarray(phi, dtype=float)
    if phi.shape[-1] == 1:
        return wrap_phi(phi + np.pi)
    return wrap_phi(np.array([-phi[0], phi[1] + np.pi]))


def _seeds(phi0):
    """The default start followed by evenly spread restarts around it."""
    phi0 = wrap_phi(phi0)
    seeds = [phi0]
    if phi0.shape[-1] == 1:
        seeds += [wrap_phi(phi0 + np.pi / 4 + k * np.pi / 2) for k in range(4)]
    else:
        for eta in (-np.pi / 4, np.pi / 4):
            for dw in (-3 * np.pi / 4, -np.pi / 4, np.pi / 4, 3 * np.pi / 4):
                seeds.append(wrap_phi(np.array([eta, phi0[1] + dw])))
    return seeds


def _initial_phi(body, direction):
    """Angles of the direction as seen through body's linear map, M^T d."""
    return angles_from_direction(np.asarray(direction, dtype=float) @ body.linear_map)


def _angles_for_normal(body, n):
    """Angles of the boundary point of body whose world-frame outward normal is n."""
    return angles_from_direction(g_inverse_direction(body.shape, np.asarray(n, dtype=float) @ body.linear_map))


def _scan(query):
    try:
        cloud = boundary_cloud(query, SCAN_GRID[query.dim])
    except GeometryError as exc:
        logger.debug("boundary scan failed, using spread seeds only: %s", exc)
        return None
    return _Scan(cloud.params, cloud.points - query.body1.center, cloud.normals())


def _nearest_facing(scan, d, count):
    """Scan indices of the points nearest d whose normals face it, nearest first."""
    gap = d - scan.points
    facing = np.einsum('ij,ij->i', scan.normals, gap) > 0
    dist = np.where(facing, np.linalg.norm(gap, axis=-1), np.inf)
    return [int(i) for i in np.argsort(dist)[:count] if np.isfinite(dist[i])]


def _multistart(residual_fn, seeds, accept, cfg, wrap=wrap_phi):
    """
    First solve from the seeds that accept(result) takes as a root, or
    (None, best) when none does.
    """
    best = None
    for k, seed in enumerate(seeds):
        try:
            result = levenberg_marquardt(residual_fn, seed, cfg, wrap=wrap)
            accepted = accept(result)
        except GeometryError as exc:
            logger.debug("start %d failed: %s", k, exc)
            continue
        if best is None or result.residual_norm < best.residual_norm:
            best = result
        if accepted:
            if k:
                logger.info("proximity solve accepted after %d restart(s)", k)
            return result, result
    logger.debug("no start out of %d produced an accepted root", len(seeds))
    return None, best


def _polish(residual_fn, seed, accept, cfg, wrap=wrap_phi):
    fine = cfg.with_overrides(fd_step=min(cfg.fd_step, POLISH_FD_STEP))
    solved, _ = _multistart(residual_fn, [seed], accept, fine, wrap)
    return solved


def _brackets(values, admissible, key):
    """Indices i where values changes sign from sample i to i + 1 (cyclically), lowest key first."""
    change = np.sign(values) != np.sign(np.roll(values, -1))
    idx = np.flatnonzero(change & admissible)
    return idx[np.argsort(key[idx], kind='stable')]


def _planar_root(query, fn, lo, step):
    """Root of the scalar fn(theta) on [lo, lo + step] as a solution, or None."""
    try:
        theta, info = brentq(fn, lo, lo + step, xtol=BRACKET_XTOL, maxiter=BRACKET_MAXITER, full_output=True)
    except (ValueError, RuntimeError, GeometryError) as exc:
        logger.debug("bracket at theta=%.6f rejected: %s", lo, exc)
        return None
    phi = wrap_phi(np.array([theta]))
    solver = SolveResult(phi, abs(fn(theta)), info.iterations, info.converged, [])
    return _Solution(phi, sum_point_transformed(query, phi), solver)


def _tangent_basis(pole):
    """Rows spanning the plane orthogonal to the unit vector pole."""
    _, _, vt = np.linalg.svd(pole[None, :])
    return vt[1:]


def _minimize_on_hemisphere(objective, pole, start):
    """
    Minimize objective(n) over unit n with n . pole > 0, from start.

    The hemisphere is charted gnomonically, n = normalize(pole + v T). Great
    circles map to lines, so a quasi-convex objective stays quasi-convex in v.
    """
    basis = _tangent_basis(pole)

    def chart(v):
        return normalize(pole + v @ basis)

    def charted(v):
        try:
            value = objective(chart(v))
        except GeometryError:
            return np.inf
        return value if np.isfinite(value) else np.inf

    v = (basis @ start) / (start @ pole)
    evaluations = 0
    for _ in range(SIMPLEX_RESTARTS):
        result = minimize(charted, v, method='Nelder-Mead', options=SIMPLEX_OPTIONS)
        v = result.x
        evaluations += result.nfev
    return chart(v), evaluations


def _hemisphere_start(scan, pole, values):
    """Scan normal facing pole with the lowest value, or pole itself."""
    facing = scan.normals @ pole > 0
    if not np.any(facing):
        return pole
    return scan.normals[np.argmin(np.where(facing, values, np.inf))]


def _ray_crossing(query, d, scan):
    """Crossing of the center ray without derivatives, or None."""
    if scan is None:
        return None
    if query.dim == 2:
        step = 2 * np.pi / len(scan.params)
        ahead = scan.points @ d
        pair_ahead = ahead + np.roll(ahead, -1)

        def fn(theta):
            return float(_cross(sum_point_transformed(query, np.array([theta])), d)[0])

        for i in _brackets(_cross(scan.points, d), pair_ahead > 0, -pair_ahead):
            solution = _planar_root(query, fn, scan.params[i, 0], step)
            if solution is not None and solution.point @ d > 0:
                return solution
        return None

    # rho(d) = min over n of h(n) / (n . d_hat): quasi-convex, exact at the crossing normal
    d_hat = normalize(d)

    def gauge(n):
        phi = _angles_for_normal(query.body1, n)
        normal = normalize(query.body1.world_gradient(phi))
        along = normal @ d_hat
        if along <= 0:
            return np.inf
        return float(normal @ sum_point_transformed(query, phi) / along)

    facing = np.maximum(scan.normals @ d_hat, 1e-300)
    start = _hemisphere_start(scan, d_hat, np.einsum('ij,ij->i', scan.normals, scan.points) / facing)
    n_star, evaluations = _minimize_on_hemisphere(gauge, d_hat, start)
    point = gauge(n_star) * d_hat
    witness1 = _body1_witness(query, n_star, point)
    phi = angles_from_point(query.body1.shape, query.body1.world_to_local(witness1))
    residual = float(np.linalg.norm(residual_mink_ray(query, phi)))
    return _Solution(phi, point, SolveResult(phi, residual, evaluations, True, []), witness1)


def _closest_point(query, d, scan):
    """Point of the contact space nearest d, found without derivatives, or None."""
    if scan is None:
        return None
    if query.dim == 2:
        step = 2 * np.pi / len(scan.params)
        normals = query.body1.world_gradient(scan.params)
        gap = d - scan.points
        facing = np.einsum('ij,ij->i', normals, gap) > 0

        def fn(theta):
            phi = np.array([theta])
            return float(_cross(query.body1.world_gradient(phi), d - sum_point_transformed(query, phi))[0])

        admissible = facing | np.roll(facing, -1)
        for i in _brackets(_cross(normals, gap), admissible, np.linalg.norm(gap, axis=-1)):
            solution = _planar_root(query, fn, scan.params[i, 0], step)
            if solution is None:
                continue
            if query.body1.world_gradient(solution.phi) @ (d - solution.point) > 0:
                return solution
        return None

    # distance = max over n of n . d - h(n), attained at the normal of the nearest point
    d_hat = normalize(d)

    def negative_gap(n):
        phi = _angles_for_normal(query.body1, n)
        normal = normalize(query.body1.world_gradient(phi))
        return -float(normal @ (d - sum_point_transformed(query, phi)))

    values = -np.einsum('ij,ij->i', scan.normals, d - scan.points)
    n_star, evaluations = _minimize_on_hemisphere(negative_gap, d_hat, _hemisphere_start(scan, d_hat, values))
    distance = -negative_gap(n_star)
    if distance <= 0:
        return None
    point = d - distance * n_star
    witness1 = _body1_witness(query, n_star, point)
    phi = angles_from_point(query.body1.shape, query.body1.world_to_local(witness1))
    residual = float(np.linalg.norm(residual_mink_normal(query, phi)))
    return _Solution(phi, point, SolveResult(phi, residual, evaluations, True, []), witness1)


def _support_point(body, n):
    return body.surface_points(_angles_for_normal(body, n))


def _spread(body, n):
    """How far the support point of body moves when n tilts by SPREAD_TILT."""
    return max(np.linalg.norm(_support_point(body, normalize(n + SPREAD_TILT * t))
                              - _support_point(body, normalize(n - SPREAD_TILT * t)))
               for t in _tangent_basis(n))


def _body1_witness(query, n, point):
    """
    Body-1 surface point behind the contact-space point (relative to c1)
    whose outward normal is n, taken from whichever body's support point is
    steadier under small tilts of n. A flat face moves its support point
    across the face for micro-radian tilts.
    """
    if _spread(query.body1, n) <= _spread(query.body2, -n):
        return _support_point(query.body1, n)
    return _support_point(query.body2, -n) + point - query.center_offset


def _solve_ray(query, cfg, scan=None):
    d = _center_ray(query)
    d_norm = np.linalg.norm(d)
    phi0 = _initial_phi(query.body1, d)
    seeds = [phi0, _antipode(phi0)]
    if scan is not None:
        cos = scan.points @ d / (np.linalg.norm(scan.points, axis=-1) * d_norm)
        seeds += [scan.params[i] for i in np.argsort(-cos)[:SCAN_SEEDS]]
    else:
        for seed in _seeds(phi0)[1:]:
            seeds += [seed, _antipode(seed)]

    def residual(phi):
        return residual_mink_ray(query, phi)

    def accept(result):
        x = sum_point_transformed(query, result.x)
        return x @ d > 0 and result.residual_norm <= ACCEPT_TOL * np.linalg.norm(x) * d_norm

    solved, best = _multistart(residual, seeds, accept, cfg)
    if solved is not None:
        return _Solution(solved.x, sum_point_transformed(query, solved.x), solved), best
    found = _ray_crossing(query, d, scan)
    if found is None:
        return None, best
    if accept(found.solver):
        return found, best
    polished = _polish(residual, found.phi, accept, cfg)
    if polished is not None:
        return _Solution(polished.x, sum_point_transformed(query, polished.x), polished), best
    logger.info("ray crossing taken from the support-function bound (residual %.2e)",
                found.solver.residual_norm)
    return found, best


def _ray_status(ratio, touch_tol):
    if ratio > 1 + touch_tol:
        return SEPARATED
    if abs(ratio - 1) <= touch_tol:
        return TOUCHING
    return PENETRATING


def _solve_normal(query, cfg, phi_ray, scan=None):
    d = query.center_offset
    d_norm = np.linalg.norm(d)
    seeds = [phi_ray]
    if scan is not None:
        seeds += [scan.params[i] for i in _nearest_facing(scan, d, SCAN_SEEDS)]
        seeds.append(_initial_phi(query.body1, d))
    else:
        seeds += _seeds(_initial_phi(query.body1, d))

    def residual(phi):
        return residual_mink_normal(query, phi)

    def accept(result):
        m1 = query.body1.world_gradient(result.x)
        facing = m1 @ (d - sum_point_transformed(query, result.x)) > 0
        return facing and result.residual_norm <= ACCEPT_TOL * np.linalg.norm(m1) * d_norm

    solved, best = _multistart(residual, seeds, accept, cfg)
    if solved is not None:
        return _Solution(solved.x, sum_point_transformed(query, solved.x), solved), best
    found = _closest_point(query, d, scan)
    if found is None:
        return None, best
    if accept(found.solver):
        return found, best
    polished = _polish(residual, found.phi, accept, cfg)
    if polished is not None:
        return _Solution(polished.x, sum_point_transformed(query, polished.x), polished), best
    logger.info("nearest point taken from the support-function bound (residual %.2e)",
                found.solver.residual_norm)
    return found, best


def _solve_common(query, cfg, scan=None):
    d = query.center_offset
    k = query.dim - 1
    scale = max(1.0, float(np.linalg.norm(d)))

    def paired(phi1, n1):
        """Body-1 angles with the body-2 angles whose normal is -n1."""
        return np.concatenate([wrap_phi(phi1), _angles_for_normal(query.body2, -np.asarray(n1))])

    phi1_seeds = _seeds(_initial_phi(query.body1, d))
    phi2_seeds = _seeds(_initial_phi(query.body2, -d))
    seeds = [np.concatenate([s1, s2]) for s1, s2 in zip(phi1_seeds, phi2_seeds)]
    if scan is not None:
        seeds = seeds[:1] + [paired(scan.params[i], scan.normals[i]) for i in _nearest_facing(scan, d, SCAN_SEEDS)]

    def residual(z):
        return residual_common_normal(query, z[:k], z[k:])

    def wrap(z):
        return np.concatenate([wrap_phi(z[:k]), wrap_phi(z[k:])])

    def accept(result):
        z = result.x
        n1 = query.body1.world_gradient(z[:k])
        gap = query.body2.surface_points(z[k:]) - query.body1.surface_points(z[:k])
        outward = n1 @ query.body2.world_gradient(z[k:]) < 0 and n1 @ gap > 0
        return outward and result.residual_norm <= ACCEPT_TOL * scale

    solved, best = _multistart(residual, seeds, accept, cfg, wrap=wrap)
    if solved is not None:
        return solved, None, best
    found = _closest_point(query, d, scan)
    if found is None:
        return None, None, best
    witness1 = found.body1_point(query)
    witness2 = witness1 + (d - found.point)
    z0 = np.concatenate([wrap_phi(found.phi),
                         wrap_phi(angles_from_point(query.body2.shape, query.body2.world_to_local(witness2)))])
    polished = _polish(residual, z0, accept, cfg, wrap)
    if polished is not None:
        return polished, None, best
    residual_norm = float(np.linalg.norm(residual(z0)))
    logger.info("common normals taken from the support-function bound (residual %.2e)", residual_norm)
    solver = SolveResult(z0, residual_norm, found.solver.iterations, found.solver.converged, [])
    return solver, (witness1, witness2), best


def proximity_query(query, method=NORMAL, cfg=None, touch_tol=TOUCH_TOL):
    """
    Contact status of two placed bodies and, when they are apart, their
    distance and witness points.

    The ray solve always runs first and fixes the status. The normal and
    common methods then compute distance and witnesses for separated pairs.
    """
    if method not in METHODS:
        raise DomainError(f"method must be one of {METHODS}, got {method!r}")
    cfg = cfg or SolverConfig()
    if query.mode != CONTACT:
        query = query.with_mode(CONTACT)

    scan = _scan(query)
    try:
        ray, best = _solve_ray(query, cfg, scan)
    except DegenerateQueryError:
        logger.info("coincident centers, reporting penetration")
        return ProximityResult(status=PENETRATING, method=method)
    if ray is None:
        logger.warning("ray solve found no crossing; status is inconclusive")
        return ProximityResult(status=INCONCLUSIVE, method=method, solver=best)

    d = query.center_offset
    ratio = float(np.linalg.norm(d) / np.linalg.norm(ray.point))
    status = _ray_status(ratio, touch_tol)
    result = ProximityResult(status=status, method=method, phi1=ray.phi, ray_ratio=ratio, solver=ray.solver)

    if status == TOUCHING:
        witness = ray.body1_point(query)
        result.distance = 0.0
        result.witness1 = result.witness2 = witness
    if status != SEPARATED or method == RAY:
        return result

    if method == NORMAL:
        solution, best = _solve_normal(query, cfg, ray.phi, scan)
        if solution is None:
            logger.warning("normal solve found no nearest point; status is inconclusive")
            return ProximityResult(status=INCONCLUSIVE, method=method, ray_ratio=ratio, solver=best)
        offset = d - solution.point
        result.witness1 = solution.body1_point(query)
        result.witness2 = result.witness1 + offset
        result.distance = float(np.linalg.norm(offset))
        result.phi1 = solution.phi
        result.solver = solution.solver
    else:
        solved, witnesses, best = _solve_common(query, cfg, scan)
        if solved is None:
            logger.warning("common-normal solve found no configuration; status is inconclusive")
            return ProximityResult(status=INCONCLUSIVE, method=method, ray_ratio=ratio, solver=best)
        k = query.dim - 1
        if witnesses is None:
            witnesses = query.body1.surface_points(solved.x[:k]), query.body2.surface_points(solved.x[k:])
        result.witness1, result.witness2 = witnesses
        result.distance = float(np.linalg.norm(result.witness2 - result.witness1))
        result.phi1 = solved.x[:k]
        result.solver = solved
    return result
