"""
Geometric primitives expressed as superquadrics, the planar transformation
families used to deform them, and seeded random bodies for tests and
benchmarks.
"""

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DomainError
from .geom_core import BodyInstance, Superquadric

# Exponent that squares off a superquadric edge while keeping it smooth
BOX_EPS = 0.1


def rot2d(alpha):
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]])


def shear2d(s):
    return np.array([[1.0, s], [0.0, 1.0]])


def rot_shear2d(alpha, s):
    """Rotation followed by shear, applied as rot(alpha) @ shear(s)."""
    return rot2d(alpha) @ shear2d(s)


def shear3d(sxy, sxz=0.0, syz=0.0):
    return np.array([[1.0, sxy, sxz], [0.0, 1.0, syz], [0.0, 0.0, 1.0]])


def cube(length, width, height):
    return Superquadric.spatial(length / 2, width / 2, height / 2, BOX_EPS, BOX_EPS)


def parallelepiped(length, width, height, M):
    return BodyInstance(cube(length, width, height), linear_map=M)


def ellipsoid(a, b, c):
    return Superquadric.spatial(a, b, c, 1.0, 1.0)


def sphere(r):
    return ellipsoid(r, r, r)


def elliptic_cylinder(a, b, height):
    return Superquadric.spatial(a, b, height / 2, BOX_EPS, 1.0)


def square(length, width):
    return Superquadric.planar(length / 2, width / 2, BOX_EPS)


def ellipse(a, b):
    return Superquadric.planar(a, b, 1.0)


def circle(r):
    return ellipse(r, r)


def relative_volume_error(approx, exact):
    """|V_approx - V_exact| / V_exact."""
    if not exact > 0:
        raise DomainError(f"reference volume must be positive, got {exact}")
    return abs(approx - exact) / exact


def random_superquadric(rng, dim, eps_range=(0.2, 1.8), axes_range=(0.5, 2.0)):
    axes = rng.uniform(*axes_range, size=dim)
    exponents = rng.uniform(*eps_range, size=dim - 1)
    return Superquadric(tuple(axes), tuple(exponents))


def random_linear_map(rng, dim, max_shear=0.5):
    """rot(alpha) @ shear(s) in 2D; a uniform rotation times an upper shear in 3D."""
    if dim == 2:
        return rot_shear2d(rng.uniform(-np.pi, np.pi), rng.uniform(-max_shear, max_shear))
    if dim == 3:
        R = Rotation.random(None, rng).as_matrix()
        return R @ shear3d(*rng.uniform(-max_shear, max_shear, size=3))
    raise DomainError(f"random bodies exist in 2D or 3D, got dim={dim}")


def random_body(rng, dim, transform=True, center_scale=0.0, **shape_kwargs):
    shape = random_superquadric(rng, dim, **shape_kwargs)
    M = random_linear_map(rng, dim) if transform else None
    center = rng.uniform(-center_scale, center_scale, size=dim) if center_scale else None
    return BodyInstance(shape, linear_map=M, center=center)
