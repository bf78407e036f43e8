"""
Superquadric Bodies and Their Single-Body Maps
==============================================

A superquadric is the convex body {x : Psi(x) <= 1}. In 2D:

    Psi(x) = |x1/a|^(2/e) + |x2/b|^(2/e)

In 3D:

    Psi(x) = (|x1/a|^(2/e2) + |x2/b|^(2/e2))^(e2/e1) + |x3/c|^(2/e1)

Every exponent lies in the open interval (0, 2). This keeps the boundary
smooth with positive curvature, so each boundary point has a unique
outward gradient and the other way round. Exponents equal to 1 give an
ellipsoid.

The maps below move between four descriptions of one boundary point:

    phi (angles) -> u (unit vector) -> m (un-normalized gradient) -> x (point)

Every fractional power of a possibly negative quantity goes through spow,
the signed power. That keeps all quadrants and octants valid without any
case analysis.

All functions are vectorized. Points, directions and gradients carry the
coordinate on the last axis, and angle arrays carry (theta,) in 2D or
(eta, omega) in 3D on the last axis.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .errors import DomainError, InconsistentGradientError

logger = logging.getLogger(__name__)

# Round-off allowance before gamma(m3) counts as inconsistent
GAMMA_TOL = 1e-9

# Linear maps must satisfy |det M| > DET_TOL * scale**d
DET_TOL = 1e-12

# cos(eta) below this is a pole; np.cos(pi/2) is about 6e-17, not 0
POLE_TOL = 1e-15


def spow(x, p):
    """Signed power sign(x) * |x|**p, odd in x and zero at zero."""
    if not p > 0:
        raise DomainError(f"signed power needs a positive exponent, got {p}")
    return np.sign(x) * np.abs(x) ** p


def _vanishing_power(base, exponent):
    """
    base**exponent for base >= 0, reading 0 where base is 0.

    Used for factors like psi**(e2/e1 - 1) whose exponent may be negative,
    but which always multiply a component that is itself zero wherever the
    base vanishes (the poles of a 3D superquadric).
    """
    base = np.asarray(base, dtype=float)
    if exponent >= 0:
        return np.power(base, exponent)
    with np.errstate(divide='ignore'):
        powered = np.power(base, exponent)
    return np.where(base > 0, powered, 0.0)


def normalize(v):
    """Scale vectors on the last axis to unit length."""
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@dataclass(frozen=True)
class Superquadric:
    """
    Canonical superquadric: semi-axes and exponents, centered at the origin.

    2D bodies hold (a, b) and (e,); 3D bodies hold (a, b, c) and (e1, e2).
    """
    semi_axes: tuple
    exponents: tuple

    def __post_init__(self):
        axes = tuple(float(v) for v in np.ravel(self.semi_axes))
        exps = tuple(float(v) for v in np.ravel(self.exponents))
        if len(axes) not in (2, 3):
            raise DomainError(f"superquadrics exist in 2D or 3D, got {len(axes)} semi-axes", field='semi_axes')
        if len(exps) != len(axes) - 1:
            raise DomainError(
                f"a {len(axes)}D superquadric needs {len(axes) - 1} exponent(s), got {len(exps)}",
                field='exponents')
        if not all(np.isfinite(a) and a > 0 for a in axes):
            raise DomainError(f"semi-axes must be positive, got {axes}", field='semi_axes')
        if not all(0 < e < 2 for e in exps):
            raise DomainError(f"exponents must lie in (0, 2), got {exps}", field='exponents')
        object.__setattr__(self, 'semi_axes', axes)
        object.__setattr__(self, 'exponents', exps)

    @classmethod
    def planar(cls, a, b, eps):
        return cls((a, b), (eps,))

    @classmethod
    def spatial(cls, a, b, c, eps1, eps2):
        return cls((a, b, c), (eps1, eps2))

    @property
    def dim(self):
        return len(self.semi_axes)

    @property
    def axes(self):
        return np.array(self.semi_axes)

    @property
    def is_ellipsoid(self):
        return all(e == 1.0 for e in self.exponents)

    def scaled(self, k):
        """The same shape with every semi-axis multiplied by k."""
        return Superquadric(tuple(k * a for a in self.semi_axes), self.exponents)


@dataclass(frozen=True, eq=False)
class BodyInstance:
    """A superquadric placed in the world as x = M x_body + center."""
    shape: Superquadric
    linear_map: np.ndarray = None
    center: np.ndarray = None

    def __post_init__(self):
        d = self.shape.dim
        M = np.eye(d) if self.linear_map is None else np.array(self.linear_map, dtype=float)
        c = np.zeros(d) if self.center is None else np.array(self.center, dtype=float)
        if M.shape != (d, d):
            raise DomainError(f"linear map must be {d}x{d}, got shape {M.shape}", field='M')
        if c.shape != (d,):
            raise DomainError(f"center must have {d} components, got shape {c.shape}", field='center')
        if not np.all(np.isfinite(M)):
            raise DomainError("linear map must be finite", field='M')
        if not np.all(np.isfinite(c)):
            raise DomainError("center must be finite", field='center')
        scale = np.abs(M).max()
        if not abs(np.linalg.det(M)) > DET_TOL * scale ** d:
            raise DomainError("linear map is singular", field='M')
        M.setflags(write=False)
        c.setflags(write=False)
        inverse = np.linalg.inv(M)
        inverse.setflags(write=False)
        object.__setattr__(self, 'linear_map', M)
        object.__setattr__(self, 'center', c)
        object.__setattr__(self, 'inverse_map', inverse)

    @property
    def dim(self):
        return self.shape.dim

    @property
    def has_identity_map(self):
        return np.array_equal(self.linear_map, np.eye(self.dim))

    def local_to_world(self, x):
        return self.center + np.asarray(x, dtype=float) @ self.linear_map.T

    def world_to_local(self, x):
        return (np.asarray(x, dtype=float) - self.center) @ self.inverse_map.T

    def gradient_to_world(self, m):
        """m' = M^-T m, applied to row vectors."""
        return np.asarray(m, dtype=float) @ self.inverse_map

    def surface_points(self, phi):
        """World-frame boundary points at the given angles."""
        return self.local_to_world(surface_point(self.shape, phi))

    def world_gradient(self, phi):
        """World-frame un-normalized gradients at the given angles."""
        return self.gradient_to_world(gradient_from_u(self.shape, u_from_phi(phi)))

    def translated(self, offset):
        return BodyInstance(self.shape, self.linear_map, self.center + np.asarray(offset, dtype=float))

    def transformed(self, R):
        """Apply the world-frame linear map R to both pose and center."""
        R = np.asarray(R, dtype=float)
        return BodyInstance(self.shape, R @ self.linear_map, R @ self.center)


def _as_phi(phi):
    phi = np.asarray(phi, dtype=float)
    if phi.ndim == 0:
        phi = phi[None]
    if phi.shape[-1] not in (1, 2):
        raise DomainError(f"angle arrays carry 1 (2D) or 2 (3D) entries, got {phi.shape[-1]}")
    return phi


def _pole_cos(eta):
    c = np.cos(eta)
    return np.where(np.abs(c) < POLE_TOL, 0.0, c)


def u_from_phi(phi):
    """
    Unit vector for spherical angles.

    2D: theta -> (cos theta, sin theta).
    3D: (eta, omega) -> (cos eta cos omega, cos eta sin omega, sin eta), with
    eta measured from the equator so that the third component is sin eta.
    """
    phi = _as_phi(phi)
    if phi.shape[-1] == 1:
        theta = phi[..., 0]
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    eta, omega = phi[..., 0], phi[..., 1]
    ring = _pole_cos(eta)
    return np.stack([ring * np.cos(omega),
                     ring * np.sin(omega),
                     np.sin(eta)], axis=-1)


def angles_from_direction(v):
    """Spherical angles of a nonzero direction; the inverse of u_from_phi."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1)
    if np.any(norm == 0):
        raise DomainError("cannot take the angles of a zero vector")
    if v.shape[-1] == 2:
        return np.arctan2(v[..., 1], v[..., 0])[..., None]
    eta = np.arcsin(np.clip(v[..., 2] / norm, -1.0, 1.0))
    omega = np.arctan2(v[..., 1], v[..., 0])
    return np.stack([eta, omega], axis=-1)


def _wrap_angle(a):
    return np.mod(a + np.pi, 2 * np.pi) - np.pi


def wrap_phi(phi):
    """
    Canonical angle ranges: theta and omega in [-pi, pi), eta in [-pi/2, pi/2].

    An eta past a pole is reflected back and omega moves by pi, which keeps
    u_from_phi unchanged.
    """
    phi = _as_phi(phi)
    if phi.shape[-1] == 1:
        return _wrap_angle(phi)
    eta = _wrap_angle(phi[..., 0])
    omega = phi[..., 1]
    over = eta > np.pi / 2
    under = eta < -np.pi / 2
    eta = np.where(over, np.pi - eta, np.where(under, -np.pi - eta, eta))
    omega = np.where(over | under, omega + np.pi, omega)
    return np.stack([eta, _wrap_angle(omega)], axis=-1)


def phi_grid(dim, n):
    """
    Reproducible sampling of the unit circle or sphere.

    2D: n angles spaced uniformly over [-pi, pi).
    3D: an n x n tensor grid in (eta, omega). Each pole appears once, so
    the grid holds n * (n - 2) + 2 parameters ordered south pole, rings by
    increasing eta, north pole.
    """
    n = int(n)
    if dim == 2:
        if n < 1:
            raise DomainError("a 2D grid needs at least one angle")
        theta = -np.pi + 2 * np.pi * np.arange(n) / n
        return theta[:, None]
    if dim == 3:
        if n < 3:
            raise DomainError("a 3D grid needs n >= 3")
        eta = np.linspace(-np.pi / 2, np.pi / 2, n)[1:-1]
        omega = -np.pi + 2 * np.pi * np.arange(n) / n
        rings = np.stack(np.meshgrid(eta, omega, indexing='ij'), axis=-1).reshape(-1, 2)
        return np.vstack([[-np.pi / 2, 0.0], rings, [np.pi / 2, 0.0]])
    raise DomainError(f"grids exist in 2D or 3D, got dim={dim}")


def implicit_value(body, x):
    """Psi(x) in the body frame: 1 on the boundary, below 1 inside."""
    r = np.abs(np.asarray(x, dtype=float) / body.axes)
    if body.dim == 2:
        (e,) = body.exponents
        return np.sum(r ** (2 / e), axis=-1)
    e1, e2 = body.exponents
    psi = r[..., 0] ** (2 / e2) + r[..., 1] ** (2 / e2)
    return psi ** (e2 / e1) + r[..., 2] ** (2 / e1)


def implicit_gradient(body, x):
    """Analytic gradient of Psi at body-frame points."""
    axes = body.axes
    s = np.asarray(x, dtype=float) / axes
    if body.dim == 2:
        (e,) = body.exponents
        return 2 / (e * axes) * spow(s, 2 / e - 1)
    a, b, c = body.semi_axes
    e1, e2 = body.exponents
    psi = np.abs(s[..., 0]) ** (2 / e2) + np.abs(s[..., 1]) ** (2 / e2)
    factor = _vanishing_power(psi, e2 / e1 - 1)
    return np.stack([2 / (a * e1) * factor * spow(s[..., 0], 2 / e2 - 1),
                     2 / (b * e1) * factor * spow(s[..., 1], 2 / e2 - 1),
                     2 / (c * e1) * spow(s[..., 2], 2 / e1 - 1)], axis=-1)


def surface_point(body, phi):
    """Boundary point x = f(phi) in the signed-power trigonometric form."""
    phi = _as_phi(phi)
    if phi.shape[-1] != body.dim - 1:
        raise DomainError(f"a {body.dim}D body takes {body.dim - 1} angle(s) per point")
    if body.dim == 2:
        (e,) = body.exponents
        return body.axes * spow(u_from_phi(phi), e)
    a, b, c = body.semi_axes
    e1, e2 = body.exponents
    eta, omega = phi[..., 0], phi[..., 1]
    ring = spow(_pole_cos(eta), e1)
    return np.stack([a * ring * spow(np.cos(omega), e2),
                     b * ring * spow(np.sin(omega), e2),
                     c * spow(np.sin(eta), e1)], axis=-1)


def angles_from_point(body, x):
    """
    Angles of a local-frame boundary point; the inverse of surface_point.

    Works on the signed powers directly, so angles near zero keep their
    relative precision even where a flat face compresses them.
    """
    p = np.asarray(x, dtype=float) / body.axes
    if body.dim == 2:
        (e,) = body.exponents
        s = spow(p, 1 / e)
        return np.arctan2(s[..., 1], s[..., 0])[..., None]
    e1, e2 = body.exponents
    q = spow(p[..., :2], 1 / e2)
    cos_eta = np.hypot(q[..., 0], q[..., 1]) ** (e2 / e1)
    eta = np.arctan2(spow(p[..., 2], 1 / e1), cos_eta)
    return np.stack([eta, np.arctan2(q[..., 1], q[..., 0])], axis=-1)


def gradient_from_u(body, u):
    """
    Un-normalized gradient m = g(u) at the boundary point with direction u.

    g is homogeneous: g(k u) = k**(2 - e) g(u) in 2D and k**(2 - e1) g(u)
    in 3D, which is what lets the contact-gradient magnitude be written in
    closed form.
    """
    u = np.asarray(u, dtype=float)
    if body.dim == 2:
        (e,) = body.exponents
        return 2 / (body.axes * e) * spow(u, 2 - e)
    a, b, c = body.semi_axes
    e1, e2 = body.exponents
    ring = _vanishing_power(u[..., 0] ** 2 + u[..., 1] ** 2, (e2 - e1) / 2)
    return np.stack([2 / (a * e1) * spow(u[..., 0], 2 - e2) * ring,
                     2 / (b * e1) * spow(u[..., 1], 2 - e2) * ring,
                     2 / (c * e1) * spow(u[..., 2], 2 - e1)], axis=-1)


def point_from_gradient(body, m):
    """
    The boundary point whose un-normalized gradient is m.

    In 3D the equatorial factor gamma(m3) = 1 - |c e1 m3 / 2|**(2/(2-e1))
    is clamped to [0, 1]; anything below -GAMMA_TOL means m belongs to no
    boundary point and raises InconsistentGradientError.
    """
    m = np.asarray(m, dtype=float)
    axes = body.axes
    if body.dim == 2:
        (e,) = body.exponents
        return axes * spow(axes * e / 2 * m, e / (2 - e))
    a, b, c = body.semi_axes
    e1, e2 = body.exponents
    p = axes * e1 / 2 * m
    gamma = 1 - np.abs(p[..., 2]) ** (2 / (2 - e1))
    bad = gamma < -GAMMA_TOL
    if np.any(bad):
        index = int(np.flatnonzero(np.ravel(bad))[0])
        raise InconsistentGradientError(
            f"gradient has no matching boundary point (gamma={np.ravel(gamma)[index]:.3e})",
            index=index)
    ring = _vanishing_power(np.clip(gamma, 0.0, 1.0), (e1 - e2) / (2 - e2))
    return np.stack([a * spow(p[..., 0], e2 / (2 - e2)) * ring,
                     b * spow(p[..., 1], e2 / (2 - e2)) * ring,
                     c * spow(p[..., 2], e1 / (2 - e1))], axis=-1)


def g_inverse_direction(body, m):
    """
    Un-normalized inverse of g: normalizing the result gives the unit u
    whose gradient g(u) is parallel to m.
    """
    m = np.asarray(m, dtype=float)
    if np.any(np.linalg.norm(m, axis=-1) == 0):
        raise DomainError("g inverse is undefined for a zero gradient")
    axes = body.axes
    if body.dim == 2:
        (e,) = body.exponents
        return spow(axes * e / 2 * m, 1 / (2 - e))
    e1, e2 = body.exponents
    q = axes * e1 / 2 * m
    rho = np.abs(q[..., 0]) ** (2 / (2 - e2)) + np.abs(q[..., 1]) ** (2 / (2 - e2))
    ring = _vanishing_power(rho, (e1 - e2) / (4 - 2 * e1))
    return np.stack([spow(q[..., 0], 1 / (2 - e2)) * ring,
                     spow(q[..., 1], 1 / (2 - e2)) * ring,
                     spow(q[..., 2], 1 / (2 - e1))], axis=-1)


def check_spd(A):
    """Return A as a float array, or raise DomainError unless it is SPD."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(np.abs(A).max(), 1.0)):
        raise DomainError("matrix is not symmetric")
    if np.linalg.eigvalsh(A).min() <= 0:
        raise DomainError("matrix is not positive definite")
    return A


def ellipsoid_normal_point(A, n):
    """Boundary point of the ellipsoid f(u) = A u whose outward normal is n."""
    A = check_spd(A)
    n = np.asarray(n, dtype=float)
    return (n @ (A @ A)) / np.linalg.norm(n @ A, axis=-1, keepdims=True)


def volume(body):
    """Enclosed volume of a 3D superquadric."""
    if body.dim != 3:
        raise DomainError("volume is defined for 3D superquadrics; use area in 2D")
    a, b, c = body.semi_axes
    e1, e2 = body.exponents
    return float(2 * a * b * c * e1 * e2
                 * np.exp(betaln(e1 / 2 + 1, e1) + betaln(e2 / 2, e2 / 2)))


def area(body):
    """Enclosed area of a 2D superquadric."""
    if body.dim != 2:
        raise DomainError("area is defined for 2D superquadrics; use volume in 3D")
    a, b = body.semi_axes
    (e,) = body.exponents
    return float(4 * a * b * np.exp(2 * gammaln(1 + e / 2) - gammaln(1 + e)))
