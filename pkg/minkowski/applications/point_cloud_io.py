"""
Boundary clouds on disk.

CSV rows carry the generating angles, the point and the mode:

    theta,x1,x2,mode                 (2D)
    eta,omega,x1,x2,x3,mode          (3D)

Numbers are written with 17 significant digits, which reads back to the
same doubles. The JSON mirror uses the PointCloudData schema.
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..schema import PointCloudData
from .errors import DomainError

logger = logging.getLogger(__name__)

CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)

PARAM_NAMES = {2: ['theta'], 3: ['eta', 'omega']}


@dataclass(frozen=True, eq=False)
class PointCloudTable:
    """A cloud as read back from disk: plain arrays, no bodies attached."""
    dim: int
    mode: str
    params: np.ndarray
    points: np.ndarray

    def __len__(self):
        return len(self.points)


def _fmt(v):
    return format(float(v), '.17g')


def _header(dim):
    return PARAM_NAMES[dim] + [f'x{i + 1}' for i in range(dim)] + ['mode']


def format_from_path(path, default=CSV):
    suffix = Path(path).suffix.lower().lstrip('.')
    return suffix if suffix in FORMATS else default


def write_point_cloud(cloud, path, fmt=None):
    """Write a BoundaryCloud (or PointCloudTable) as CSV or JSON."""
    fmt = fmt or format_from_path(path)
    if fmt not in FORMATS:
        raise DomainError(f"format must be one of {FORMATS}, got {fmt!r}")
    points = np.asarray(cloud.points, dtype=float)
    params = np.asarray(cloud.params, dtype=float).reshape(len(points), -1)
    if not np.all(np.isfinite(points)):
        raise DomainError("refusing to write a cloud with non-finite points")
    dim = points.shape[1]

    if fmt == CSV:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(_header(dim))
            for phi, x in zip(params, points):
                writer.writerow([_fmt(v) for v in phi] + [_fmt(v) for v in x] + [cloud.mode])
    else:
        data = PointCloudData(dim=dim, mode=cloud.mode, params=params.tolist(), points=points.tolist())
        with open(path, 'w') as f:
            json.dump(data.model_dump(), f)
    logger.info("wrote %d-point cloud to %s", len(points), path)
    return path


def read_point_cloud(path, fmt=None):
    fmt = fmt or format_from_path(path)
    if fmt == JSON:
        with open(path) as f:
            data = PointCloudData.model_validate(json.load(f))
        k = data.dim - 1
        return PointCloudTable(
            dim=data.dim,
            mode=data.mode,
            params=np.array(data.params, dtype=float).reshape(-1, k),
            points=np.array(data.points, dtype=float).reshape(-1, data.dim),
        )

    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = list(reader)
    dim = 2 if header[0] == 'theta' else 3
    if header != _header(dim):
        raise DomainError(f"{path}: unexpected header {header}")
    k = dim - 1
    values = np.array([[float(v) for v in row[:-1]] for row in rows], dtype=float).reshape(-1, k + dim)
    modes = {row[-1] for row in rows}
    if len(modes) > 1:
        raise DomainError(f"{path}: mixed modes {sorted(modes)}")
    return PointCloudTable(
        dim=dim,
        mode=modes.pop() if modes else 'contact',
        params=values[:, :k],
        points=values[:, k:],
    )


def write_report_json(obj, path):
    """Write a report, result or manifest; accepts dicts, pydantic models and to_json_dict()."""
    if hasattr(obj, 'model_dump'):
        obj = obj.model_dump()
    elif hasattr(obj, 'to_json_dict'):
        obj = obj.to_json_dict()
    with open(path, 'w') as f:
        json.dump(obj, f, indent=2)
    return path
