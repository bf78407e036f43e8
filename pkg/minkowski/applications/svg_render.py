"""2D figures of a Minkowski query as SVG, through the Django template engine."""

import logging

import numpy as np
from django.template.loader import render_to_string

from .errors import UnsupportedDimensionError
from .geom_core import phi_grid, surface_point
from .minkowski_cf import CONTACT

logger = logging.getLogger(__name__)

DEFAULT_STYLE = {
    'body1': '#333333',
    'body2': '#1f77b4',
    'boundary': '#d62728',
    'stroke_width': 0.01,
    'size': 480,
}


def _path_d(points):
    head, *rest = points
    parts = [f"M {head[0]:.6g},{head[1]:.6g}"]
    parts += [f"L {x:.6g},{y:.6g}" for x, y in rest]
    return ' '.join(parts) + ' Z'


def placement_indices(n_points, placements):
    """Evenly spread indices into a cloud of n_points."""
    placements = min(int(placements), n_points)
    if placements <= 0:
        return np.array([], dtype=int)
    return (np.arange(placements) * n_points // placements).astype(int)


def render_svg2d(query, cloud=None, path=None, placements=0, samples=200, style=None):
    """
    Outline of body 1, body 2 (at its own center, or at `placements` cloud
    points where it kisses body 1) and the sum boundary. Returns the SVG
    text and writes it to `path` when given.
    """
    if query.dim != 2:
        raise UnsupportedDimensionError("SVG rendering is 2D only; write the cloud out instead")
    style = {**DEFAULT_STYLE, **(style or {})}
    phi = phi_grid(2, samples)
    body2_outline = surface_point(query.body2.shape, phi) @ query.body2.linear_map.T
    # in sum mode the kissing copy of body 2 is reflected
    sign = 1.0 if query.mode == CONTACT else -1.0

    paths = [{'d': query.body1.surface_points(phi), 'color': style['body1'], 'role': 'body1'}]
    has_cloud = cloud is not None and len(cloud) > 0
    if has_cloud and placements > 0:
        for i in placement_indices(len(cloud), placements):
            outline = cloud.points[i] + sign * body2_outline
            paths.append({'d': outline, 'color': style['body2'], 'role': 'placement'})
    else:
        paths.append({'d': query.body2.center + body2_outline, 'color': style['body2'], 'role': 'body2'})
    if has_cloud:
        paths.append({'d': np.asarray(cloud.points), 'color': style['boundary'], 'role': 'boundary'})

    everything = np.vstack([p['d'] for p in paths])
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    margin = 0.05 * float(np.max(hi - lo))
    lo, hi = lo - margin, hi + margin
    for p in paths:
        p['d'] = _path_d(p['d'])

    svg = render_to_string('minkowski/figure.svg', {
        'paths': paths,
        'min_x': f"{lo[0]:.6g}",
        # y is flipped by the group transform, so the box starts at -max_y
        'min_y': f"{-hi[1]:.6g}",
        'width': f"{hi[0] - lo[0]:.6g}",
        'height': f"{hi[1] - lo[1]:.6g}",
        'size': style['size'],
        'stroke_width': style['stroke_width'] * float(np.max(hi - lo)),
    })
    if path is not None:
        with open(path, 'w') as f:
            f.write(svg)
        logger.info("wrote %d path(s) to %s", len(paths), path)
    return svg
