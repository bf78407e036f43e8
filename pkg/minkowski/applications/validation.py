"""
The kissing and support checks bundled into one pass/fail report, shared
by the validate command and the validate endpoint.
"""

import logging

from ..schema import KissingReportData, ValidationData
from .baselines_oracle import kissing_errors, sample_surface, support_check
from .geom_core import BodyInstance
from .minkowski_cf import CONTACT, boundary_cloud

logger = logging.getLogger(__name__)

THRESHOLDS = {
    2: {'mean_implicit': 1e-12, 'mean_gradient': 1e-5, 'support_violation': 1e-9},
    3: {'mean_implicit': 1e-8, 'mean_gradient': 1e-5, 'support_violation': 1e-9},
}

SUPPORT_GRID = {2: 50, 3: 30}


def validate_query(query, grid, support_grid=None, workers=1):
    """Closed-form cloud of a query, checked by both oracles."""
    query = query.with_mode(CONTACT)
    cloud = boundary_cloud(query, grid, workers=workers)
    report = kissing_errors(query, cloud)

    support_grid = support_grid or SUPPORT_GRID[query.dim]
    body2_at_origin = BodyInstance(query.body2.shape, query.body2.linear_map)
    violation = support_check(cloud,
                              sample_surface(query.body1, support_grid),
                              sample_surface(body2_at_origin, support_grid))

    limits = THRESHOLDS[query.dim]
    passed = (report.mean_implicit <= limits['mean_implicit']
              and report.mean_gradient <= limits['mean_gradient']
              and violation <= limits['support_violation'])
    if not passed:
        logger.warning("validation failed: %s, support violation %.3e", report, violation)
    return ValidationData(
        kissing=KissingReportData(**report.to_json_dict()),
        support_violation=violation,
        passed=passed,
        thresholds=limits,
    )
