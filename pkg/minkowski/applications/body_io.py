"""
Body and scene descriptions (JSON) to BodyInstance / Scene.

Every failure is a BodyFormatError naming the offending field, e.g.
``body1.exponents`` or ``obstacles.2.M``.
"""

import json

import numpy as np
from pydantic import ValidationError

from ..schema import BodyDescription, SceneDescription
from .cspace_gen import Scene
from .errors import BodyFormatError, DomainError
from .geom_core import BodyInstance, Superquadric


def _field(prefix, name):
    return f"{prefix}.{name}" if prefix else name


def _first_error(exc, prefix):
    error = exc.errors()[0]
    loc = '.'.join(str(part) for part in error['loc'])
    field = _field(prefix, loc) if loc else prefix or None
    return BodyFormatError(f"{field or 'body'}: {error['msg']}", field=field)


def _domain_error(exc, prefix):
    """BodyFormatError for a DomainError raised while building the body, under its field."""
    field = _field(prefix, exc.field) if exc.field else prefix or None
    return BodyFormatError(f"{field or 'body'}: {exc}", field=field)


def _build_body(desc, prefix=''):
    d = desc.dim
    if len(desc.semi_axes) != d:
        raise BodyFormatError(
            f"{_field(prefix, 'semi_axes')}: expected {d} values, got {len(desc.semi_axes)}",
            field=_field(prefix, 'semi_axes'))
    if len(desc.exponents) != d - 1:
        raise BodyFormatError(
            f"{_field(prefix, 'exponents')}: expected {d - 1} value(s), got {len(desc.exponents)}",
            field=_field(prefix, 'exponents'))
    try:
        shape = Superquadric(tuple(desc.semi_axes), tuple(desc.exponents))
    except DomainError as exc:
        raise _domain_error(exc, prefix) from exc

    M = None
    if desc.M is not None:
        M = np.array(desc.M, dtype=float)
        if M.shape != (d, d):
            raise BodyFormatError(f"{_field(prefix, 'M')}: expected a {d}x{d} matrix",
                                  field=_field(prefix, 'M'))
    if desc.center is not None and len(desc.center) != d:
        raise BodyFormatError(f"{_field(prefix, 'center')}: expected {d} values",
                              field=_field(prefix, 'center'))
    try:
        return BodyInstance(shape, linear_map=M, center=desc.center)
    except DomainError as exc:
        raise _domain_error(exc, prefix) from exc


def parse_body(data, prefix=''):
    """BodyInstance from a decoded body description."""
    try:
        desc = BodyDescription.model_validate(data)
    except ValidationError as exc:
        raise _first_error(exc, prefix) from exc
    return _build_body(desc, prefix)


def parse_scene(data):
    """
    Scene from {"robot": body, "obstacles": [body, ...]}.

    The robot's orientation comes from sampling, so its description holds
    a shape only: no M and no center.
    """
    try:
        desc = SceneDescription.model_validate(data)
    except ValidationError as exc:
        raise _first_error(exc, '') from exc
    if desc.robot.M is not None or desc.robot.center is not None:
        raise BodyFormatError("robot: give the shape only; orientations are sampled",
                              field='robot')
    robot = _build_body(desc.robot, 'robot').shape
    obstacles = [_build_body(o, f'obstacles.{i}') for i, o in enumerate(desc.obstacles)]
    return Scene(robot, tuple(obstacles))


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise BodyFormatError(f"{path}: not valid JSON ({exc})") from exc


def load_body(path, prefix=''):
    return parse_body(_load_json(path), prefix)


def load_scene(path):
    return parse_scene(_load_json(path))


def body_to_description(body):
    return BodyDescription(
        dim=body.dim,
        semi_axes=list(body.shape.semi_axes),
        exponents=list(body.shape.exponents),
        M=body.linear_map.tolist(),
        center=body.center.tolist(),
    ).model_dump()
