import json
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from minkowski.applications.body_io import body_to_description, load_body, load_scene, parse_body, parse_scene
from minkowski.applications.errors import BodyFormatError

ELLIPSE = {'dim': 2, 'semi_axes': [2.0, 1.0], 'exponents': [1.0]}
SHEARED = {'dim': 3, 'semi_axes': [1, 2, 3], 'exponents': [0.5, 1.5],
           'M': [[1, 0.3, 0], [0, 1, 0], [0, 0, 2]], 'center': [1, 2, 3]}


class ParseBodyTests(SimpleTestCase):
    def assertField(self, data, field, prefix=''):
        with self.assertRaises(BodyFormatError) as ctx:
            parse_body(data, prefix)
        self.assertEqual(ctx.exception.field, field)
        self.assertIn(field, str(ctx.exception))

    def test_defaults(self):
        body = parse_body(ELLIPSE)
        np.testing.assert_array_equal(body.linear_map, np.eye(2))
        np.testing.assert_array_equal(body.center, [0, 0])
        self.assertEqual(body.shape.semi_axes, (2.0, 1.0))

    def test_full_description_round_trips(self):
        body = parse_body(SHEARED)
        np.testing.assert_array_equal(body.linear_map, SHEARED['M'])
        again = parse_body(body_to_description(body))
        np.testing.assert_array_equal(again.linear_map, body.linear_map)
        np.testing.assert_array_equal(again.center, body.center)
        self.assertEqual(again.shape, body.shape)

    def test_errors_name_the_field(self):
        self.assertField({'dim': 2, 'exponents': [1.0]}, 'semi_axes')
        self.assertField({**ELLIPSE, 'exponents': [1.0, 1.0]}, 'body1.exponents', prefix='body1')
        self.assertField({**ELLIPSE, 'exponents': [2.5]}, 'exponents')
        self.assertField({**ELLIPSE, 'semi_axes': [2.0, -1.0]}, 'semi_axes')
        self.assertField({**ELLIPSE, 'M': [[1, 2], [2, 4]]}, 'M')
        self.assertField({**ELLIPSE, 'M': [[1, 0, 0], [0, 1, 0]]}, 'M')
        self.assertField({**ELLIPSE, 'center': [0, 0, 0]}, 'center')
        self.assertField({**ELLIPSE, 'colour': 'red'}, 'colour')
        self.assertField({**ELLIPSE, 'dim': 4}, 'dim')

    def test_non_finite_values_name_their_own_field(self):
        nan, inf = float('nan'), float('inf')
        self.assertField({**ELLIPSE, 'M': [[1, nan], [0, 1]]}, 'body1.M', prefix='body1')
        self.assertField({**ELLIPSE, 'M': [[inf, 0], [0, 1]], 'center': [0, 0]}, 'M')
        self.assertField({**ELLIPSE, 'center': [nan, 0]}, 'body2.center', prefix='body2')
        self.assertField({**ELLIPSE, 'exponents': [nan]}, 'exponents')
        self.assertField({**ELLIPSE, 'semi_axes': [inf, 1.0]}, 'semi_axes')


class ParseSceneTests(SimpleTestCase):
    def test_scene(self):
        scene = parse_scene({'robot': ELLIPSE, 'obstacles': [ELLIPSE, {**ELLIPSE, 'center': [3, 0]}]})
        self.assertEqual(scene.dim, 2)
        self.assertEqual(len(scene.obstacles), 2)
        np.testing.assert_array_equal(scene.obstacles[1].center, [3, 0])

    def test_errors(self):
        with self.assertRaises(BodyFormatError) as ctx:
            parse_scene({'robot': {**ELLIPSE, 'center': [1, 1]}, 'obstacles': [ELLIPSE]})
        self.assertEqual(ctx.exception.field, 'robot')
        with self.assertRaises(BodyFormatError) as ctx:
            parse_scene({'robot': ELLIPSE, 'obstacles': [ELLIPSE, {**ELLIPSE, 'M': [[0, 0], [0, 0]]}]})
        self.assertEqual(ctx.exception.field, 'obstacles.1.M')
        with self.assertRaises(BodyFormatError) as ctx:
            parse_scene({'robot': ELLIPSE, 'obstacles': []})
        self.assertEqual(ctx.exception.field, 'obstacles')


class LoadTests(SimpleTestCase):
    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            good = os.path.join(tmp, 'body.json')
            with open(good, 'w') as f:
                json.dump(ELLIPSE, f)
            self.assertEqual(load_body(good).dim, 2)
            bad = os.path.join(tmp, 'bad.json')
            with open(bad, 'w') as f:
                f.write('{"dim": 2,')
            with self.assertRaises(BodyFormatError):
                load_body(bad)
            with self.assertRaises(BodyFormatError):
                load_scene(bad)
