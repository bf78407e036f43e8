"""
C-obstacle slices for a rigid superquadric robot.

For a fixed robot orientation R, the robot center may sit anywhere outside
obstacle (+) (-R robot). The boundary of that region is the contact-mode
Minkowski cloud of the obstacle (body 1) and the rotated robot (body 2).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import product

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DomainError, GeometryError
from .geom_core import BodyInstance, Superquadric
from .minkowski_cf import CONTACT, MinkSumQuery, boundary_cloud
from .primitives import rot2d

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Scene:
    robot: Superquadric
    obstacles: tuple

    def __post_init__(self):
        obstacles = tuple(self.obstacles)
        if not obstacles:
            raise DomainError("a scene needs at least one obstacle")
        for i, obstacle in enumerate(obstacles):
            if obstacle.dim != self.robot.dim:
                raise DomainError(
                    f"obstacle {i} is {obstacle.dim}D but the robot is {self.robot.dim}D")
        object.__setattr__(self, 'obstacles', obstacles)

    @property
    def dim(self):
        return self.robot.dim


@dataclass(eq=False)
class CSlice:
    """
    One robot orientation and a cloud per obstacle.

    A cloud that failed is None in clouds and its obstacle index and
    message are listed in failures.
    """
    orientation: object
    clouds: list
    failures: list = field(default_factory=list)

    @property
    def point_count(self):
        return sum(len(c) for c in self.clouds if c is not None)


def sample_orientations(dim, n, seed=0):
    """
    n uniform headings over [-pi, pi) in 2D, or n seeded uniform random
    unit quaternions (x, y, z, w) in 3D.
    """
    n = int(n)
    if n < 1:
        raise DomainError("need at least one orientation")
    if dim == 2:
        return list(-np.pi + 2 * np.pi * np.arange(n) / n)
    if dim == 3:
        quats = Rotation.random(n, np.random.default_rng(seed)).as_quat()
        return list(quats / np.linalg.norm(quats, axis=1, keepdims=True))
    raise DomainError(f"orientations exist in 2D or 3D, got dim={dim}")


def rotation_matrix(orientation, dim):
    if dim == 2:
        return rot2d(float(orientation))
    if dim == 3:
        q = np.asarray(orientation, dtype=float)
        if q.shape != (4,) or abs(np.linalg.norm(q) - 1) > 1e-12:
            raise DomainError(f"a 3D orientation is a unit quaternion, got {q}")
        return Rotation.from_quat(q).as_matrix()
    raise DomainError(f"orientations exist in 2D or 3D, got dim={dim}")


def _slice_cloud(scene, grid, job):
    orientation, index = job
    robot = BodyInstance(scene.robot, linear_map=rotation_matrix(orientation, scene.dim))
    query = MinkSumQuery(scene.obstacles[index], robot, CONTACT)
    try:
        return boundary_cloud(query, grid), None
    except GeometryError as exc:
        logger.warning("obstacle %d at orientation %s failed: %s", index, orientation, exc)
        return None, (index, str(exc))


def cobstacle_slices(scene, orientations, grid, workers=1):
    """
    One CSlice per orientation, each holding a contact-mode cloud per
    obstacle, already placed at the obstacle's center.

    The (orientation, obstacle) pairs run on a thread pool when workers > 1;
    the output keeps input order.
    """
    orientations = list(orientations)
    jobs = list(product(orientations, range(len(scene.obstacles))))
    workers = max(1, min(int(workers), len(jobs))) if jobs else 1
    run = partial(_slice_cloud, scene, grid)
    if workers == 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))

    n_obst = len(scene.obstacles)
    slices = []
    for k, orientation in enumerate(orientations):
        chunk = results[k * n_obst:(k + 1) * n_obst]
        slices.append(CSlice(
            orientation=orientation,
            clouds=[cloud for cloud, _ in chunk],
            failures=[failure for _, failure in chunk if failure is not None],
        ))
    logger.info("generated %d slice(s) x %d obstacle(s), %d points",
                len(slices), n_obst, slice_point_count(slices))
    return slices


def slice_point_count(slices):
    return sum(s.point_count for s in slices)
