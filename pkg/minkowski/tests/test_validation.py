from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from minkowski.applications import validation
from minkowski.applications.geom_core import BodyInstance
from minkowski.applications.minkowski_cf import SUM, MinkSumQuery
from minkowski.applications.primitives import circle, random_body
from minkowski.applications.validation import validate_query


class ValidateQueryTests(SimpleTestCase):
    def test_random_pairs_pass(self):
        rng = np.random.default_rng(50)
        for dim, grid in ((2, 500), (3, 30)):
            query = MinkSumQuery(random_body(rng, dim, center_scale=2.0), random_body(rng, dim, center_scale=2.0))
            result = validate_query(query, grid)
            self.assertTrue(result.passed)
            self.assertEqual(result.kissing.n_points, grid if dim == 2 else grid * (grid - 2) + 2)
            self.assertEqual(result.thresholds, validation.THRESHOLDS[dim])

    def test_sum_mode_query_is_checked_as_contact(self):
        query = MinkSumQuery(BodyInstance(circle(1)), BodyInstance(circle(2), center=[1.0, 1.0]), SUM)
        self.assertTrue(validate_query(query, 64).passed)

    def test_failure_is_reported_not_raised(self):
        query = MinkSumQuery(BodyInstance(circle(1)), BodyInstance(circle(1)))
        with mock.patch.dict(validation.THRESHOLDS[2], {'support_violation': -1.0}):
            with self.assertLogs('minkowski', level='WARNING'):
                result = validate_query(query, 64)
        self.assertFalse(result.passed)
