import os
import tempfile
import xml.etree.ElementTree as ET

import numpy as np
from django.test import SimpleTestCase

from minkowski.applications.errors import UnsupportedDimensionError
from minkowski.applications.geom_core import BodyInstance, Superquadric
from minkowski.applications.minkowski_cf import BoundaryCloud, MinkSumQuery, boundary_cloud
from minkowski.applications.primitives import circle, rot_shear2d, sphere
from minkowski.applications.svg_render import placement_indices, render_svg2d

SVG_NS = '{http://www.w3.org/2000/svg}'


def paths_of(svg):
    return ET.fromstring(svg).findall(f'.//{SVG_NS}path')


class RenderTests(SimpleTestCase):
    def setUp(self):
        self.circles = MinkSumQuery(BodyInstance(circle(1)), BodyInstance(circle(1), center=[3.0, 0.0]))

    def test_bodies_and_boundary(self):
        svg = render_svg2d(self.circles, boundary_cloud(self.circles, 100))
        self.assertEqual([p.get('class') for p in paths_of(svg)], ['body1', 'body2', 'boundary'])

    def test_placements_replace_body2(self):
        query = MinkSumQuery(
            BodyInstance(Superquadric.planar(1.0, 0.6, 0.5)),
            BodyInstance(Superquadric.planar(0.5, 0.3, 1.5), rot_shear2d(0.4, 0.3)))
        svg = render_svg2d(query, boundary_cloud(query, 400), placements=10)
        roles = [p.get('class') for p in paths_of(svg)]
        self.assertEqual(len(roles), 12)
        self.assertEqual(roles.count('placement'), 10)

    def test_empty_cloud_draws_only_the_bodies(self):
        empty = BoundaryCloud(points=np.empty((0, 2)), params=np.empty((0, 1)), query=self.circles)
        svg = render_svg2d(self.circles, empty, placements=5)
        self.assertEqual(len(paths_of(svg)), 2)

    def test_writes_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'fig.svg')
            svg = render_svg2d(self.circles, path=path)
            with open(path) as f:
                self.assertEqual(f.read(), svg)

    def test_spatial_queries_are_rejected(self):
        query = MinkSumQuery(BodyInstance(sphere(1)), BodyInstance(sphere(1)))
        with self.assertRaises(UnsupportedDimensionError):
            render_svg2d(query)

    def test_placement_indices(self):
        np.testing.assert_array_equal(placement_indices(100, 4), [0, 25, 50, 75])
        self.assertEqual(len(placement_indices(3, 10)), 3)
        self.assertEqual(len(placement_indices(10, 0)), 0)
