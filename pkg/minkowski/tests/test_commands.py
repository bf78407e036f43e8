import csv
import json
import os
import tempfile
from io import StringIO
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from minkowski.applications import validation
from minkowski.applications.errors import BoundaryCloudError
from minkowski.applications.minkowski_cf import boundary_cloud as real_boundary_cloud
from minkowski.models import RunManifest
from minksum_be.cli import run_cli

UNIT_CIRCLE = {'dim': 2, 'semi_axes': [1.0, 1.0], 'exponents': [1.0]}
FAR_CIRCLE = {**UNIT_CIRCLE, 'center': [3.0, 0.0]}
SHEARED_SQUIRCLE = {'dim': 2, 'semi_axes': [1.2, 0.6], 'exponents': [0.6], 'M': [[1.0, 0.4], [0.0, 1.0]]}
SCENE = {
    'robot': {'dim': 2, 'semi_axes': [0.5, 0.3], 'exponents': [0.8]},
    'obstacles': [{**UNIT_CIRCLE, 'center': [2.0, 0.0]}, {**SHEARED_SQUIRCLE, 'center': [-2.0, 1.0]}],
}


class CommandTestMixin:
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = tmp.name

    def path(self, name):
        return os.path.join(self.tmp, name)

    def write_json(self, name, data):
        with open(self.path(name), 'w') as f:
            json.dump(data, f)
        return self.path(name)

    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def read_json(self, name):
        with open(self.path(name)) as f:
            return json.load(f)


class MinkSumCommandTests(CommandTestMixin, SimpleTestCase):
    def test_two_unit_circles(self):
        body = self.write_json('circle.json', UNIT_CIRCLE)
        self.call('minksum', body, body, '--grid', '8', '--out', self.path('cloud.csv'))
        with open(self.path('cloud.csv')) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 8)
        radii = [np.hypot(float(r['x1']), float(r['x2'])) for r in rows]
        np.testing.assert_allclose(radii, 2.0, atol=1e-12)

        manifest = self.read_json('cloud.manifest.json')
        self.assertEqual(manifest['command'], 'minksum')
        self.assertEqual(manifest['config']['grid'], 8)
        self.assertEqual(manifest['output_files'], [self.path('cloud.csv')])
        self.assertEqual(list(manifest['stage_times']), ['load', 'compute', 'write'])

    def test_json_output_in_sum_mode(self):
        body = self.write_json('circle.json', UNIT_CIRCLE)
        self.call('minksum', body, body, '--grid', '4', '--mode', 'sum', '--out', self.path('cloud.json'))
        data = self.read_json('cloud.json')
        self.assertEqual(data['mode'], 'sum')
        self.assertEqual(len(data['points']), 4)

    def test_malformed_body_exits_with_usage_error(self):
        good = self.write_json('circle.json', UNIT_CIRCLE)
        bad = self.write_json('bad.json', {**UNIT_CIRCLE, 'exponents': [2.5]})
        with self.assertRaises(CommandError) as ctx:
            self.call('minksum', good, bad, '--out', self.path('cloud.csv'))
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('body2.exponents', str(ctx.exception))
        self.assertFalse(os.path.exists(self.path('cloud.csv')))

    def test_missing_file_exits_with_usage_error(self):
        good = self.write_json('circle.json', UNIT_CIRCLE)
        with self.assertRaises(CommandError) as ctx:
            self.call('minksum', good, self.path('nope.json'), '--out', self.path('cloud.csv'))
        self.assertEqual(ctx.exception.returncode, 2)


class ValidateCommandTests(CommandTestMixin, SimpleTestCase):
    def test_passes_and_writes_report(self):
        body1 = self.write_json('a.json', SHEARED_SQUIRCLE)
        body2 = self.write_json('b.json', FAR_CIRCLE)
        self.call('validate', body1, body2, '--grid', '300', '--out', self.path('report.json'))
        report = self.read_json('report.json')
        self.assertTrue(report['passed'])
        self.assertLessEqual(report['kissing']['mean_gradient'], 1e-5)
        self.assertTrue(os.path.exists(self.path('report.manifest.json')))

    def test_missed_threshold_exits_with_one(self):
        body = self.write_json('a.json', UNIT_CIRCLE)
        with mock.patch.dict(validation.THRESHOLDS[2], {'support_violation': -1.0}):
            with self.assertRaises(CommandError) as ctx:
                self.call('validate', body, body, '--grid', '50', '--out', self.path('report.json'))
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(self.read_json('report.json')['passed'])
        self.assertTrue(os.path.exists(self.path('report.manifest.json')))


class CollideCommandTests(CommandTestMixin, SimpleTestCase):
    def test_separated_circles(self):
        body1 = self.write_json('a.json', UNIT_CIRCLE)
        body2 = self.write_json('b.json', FAR_CIRCLE)
        for method in ('normal', 'common'):
            output = self.call('collide', body1, body2, '--method', method)
            data = json.loads(output)
            self.assertEqual(data['status'], 'separated')
            self.assertAlmostEqual(data['distance'], 1.0, delta=1e-9)

    def test_ray_method_to_file(self):
        body1 = self.write_json('a.json', UNIT_CIRCLE)
        body2 = self.write_json('b.json', {**UNIT_CIRCLE, 'center': [1.0, 0.5]})
        self.call('collide', body1, body2, '--method', 'ray', '--max-iters', '50', '--out', self.path('hit.json'))
        data = self.read_json('hit.json')
        self.assertEqual(data['status'], 'penetrating')
        self.assertIsNone(data['distance'])

    def test_bad_solver_option(self):
        body = self.write_json('a.json', UNIT_CIRCLE)
        with self.assertRaises(CommandError) as ctx:
            self.call('collide', body, body, '--max-iters', '0')
        self.assertEqual(ctx.exception.returncode, 2)


class CSpaceCommandTests(CommandTestMixin, SimpleTestCase):
    def test_writes_one_file_per_slice_and_obstacle(self):
        scene = self.write_json('scene.json', SCENE)
        out = self.path('slices')
        output = self.call('cspace', scene, '--orientations', '3', '--grid', '16', '--out', out)
        files = sorted(os.listdir(out))
        self.assertIn('manifest.json', files)
        clouds = [f for f in files if f.startswith('slice_')]
        self.assertEqual(len(clouds), 3 * 2)
        self.assertEqual(clouds[0], 'slice_0000_obstacle_0000.csv')
        self.assertIn('us/point', output)
        self.assertIn('96 points', output)

    def test_failed_slices_are_listed_in_the_manifest(self):
        scene = self.write_json('scene.json', SCENE)
        out = self.path('slices')

        def boundary_cloud(query, grid):
            if query.body1.center[0] < 0:
                raise BoundaryCloudError("non-finite point", phi=np.zeros(1))
            return real_boundary_cloud(query, grid)

        err = StringIO()
        with mock.patch('minkowski.applications.cspace_gen.boundary_cloud', side_effect=boundary_cloud):
            output = StringIO()
            call_command('cspace', scene, '--orientations', '2', '--grid', '16', '--out', out,
                         stdout=output, stderr=err)
        self.assertIn('2 failure(s)', output.getvalue())
        self.assertIn('orientation 1, obstacle 1: non-finite point', err.getvalue())

        manifest = self.read_json(os.path.join('slices', 'manifest.json'))
        self.assertEqual(manifest['failures'], [
            {'orientation': 0, 'obstacle': 1, 'error': 'non-finite point'},
            {'orientation': 1, 'obstacle': 1, 'error': 'non-finite point'},
        ])
        clouds = sorted(f for f in os.listdir(out) if f.startswith('slice_'))
        self.assertEqual(clouds, ['slice_0000_obstacle_0000.csv', 'slice_0001_obstacle_0000.csv'])

    def test_clean_run_has_no_failures(self):
        scene = self.write_json('scene.json', SCENE)
        self.call('cspace', scene, '--orientations', '1', '--grid', '8', '--out', self.path('slices'))
        self.assertEqual(self.read_json(os.path.join('slices', 'manifest.json'))['failures'], [])

    def test_robot_with_pose_is_rejected(self):
        scene = self.write_json('scene.json', {**SCENE, 'robot': {**SCENE['robot'], 'center': [0, 0]}})
        with self.assertRaises(CommandError) as ctx:
            self.call('cspace', scene, '--out', self.path('slices'))
        self.assertEqual(ctx.exception.returncode, 2)


class Plot2dCommandTests(CommandTestMixin, SimpleTestCase):
    def test_svg_from_bodies_and_from_cloud(self):
        body1 = self.write_json('a.json', SHEARED_SQUIRCLE)
        body2 = self.write_json('b.json', UNIT_CIRCLE)
        self.call('plot2d', body1, body2, '--placements', '10', '--out', self.path('fig.svg'))
        with open(self.path('fig.svg')) as f:
            self.assertEqual(f.read().count('<path'), 12)

        self.call('minksum', body1, body2, '--grid', '50', '--out', self.path('cloud.csv'))
        self.call('plot2d', body1, body2, '--cloud', self.path('cloud.csv'), '--out', self.path('fig2.svg'))
        with open(self.path('fig2.svg')) as f:
            self.assertEqual(f.read().count('<path'), 3)

    def test_spatial_bodies_are_rejected(self):
        ball = self.write_json('ball.json', {'dim': 3, 'semi_axes': [1, 1, 1], 'exponents': [1, 1]})
        with self.assertRaises(CommandError) as ctx:
            self.call('plot2d', ball, ball, '--out', self.path('fig.svg'))
        self.assertEqual(ctx.exception.returncode, 2)


class BenchCommandTests(CommandTestMixin, SimpleTestCase):
    def test_csv_output(self):
        self.call('bench', '--sizes', '20,40', '--repeats', '1', '--out', self.path('bench.csv'))
        with open(self.path('bench.csv')) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 6)
        self.assertEqual({r['method'] for r in rows}, {'closed_form', 'hull', 'edge_sort'})
        self.assertEqual(self.read_json('bench.manifest.json')['seed'], 0)

    def test_needs_two_sizes(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('bench', '--sizes', '20')
        self.assertEqual(ctx.exception.returncode, 2)


class RecordTests(CommandTestMixin, TestCase):
    def test_record_stores_the_manifest(self):
        body = self.write_json('circle.json', UNIT_CIRCLE)
        self.call('minksum', body, body, '--grid', '8', '--out', self.path('cloud.csv'), '--record')
        run = RunManifest.objects.get()
        self.assertEqual(run.command, 'minksum')
        self.assertEqual(run.output_files, [self.path('cloud.csv')])
        self.assertEqual(self.read_json('cloud.manifest.json')['id'], run.id)

    def test_record_keeps_slice_failures(self):
        scene = self.write_json('scene.json', SCENE)
        failure = BoundaryCloudError("singular map")
        with mock.patch('minkowski.applications.cspace_gen.boundary_cloud', side_effect=failure):
            call_command('cspace', scene, '--orientations', '1', '--out', self.path('slices'), '--record',
                         stdout=StringIO(), stderr=StringIO())
        run = RunManifest.objects.get()
        self.assertEqual(run.failures, [
            {'orientation': 0, 'obstacle': 0, 'error': 'singular map'},
            {'orientation': 0, 'obstacle': 1, 'error': 'singular map'},
        ])
        self.assertEqual(run.output_files, [])


class CliTests(CommandTestMixin, SimpleTestCase):
    def test_exit_codes(self):
        with mock.patch('sys.stdout', new_callable=StringIO), mock.patch('sys.stderr', new_callable=StringIO):
            self.assertEqual(run_cli([]), 2)
            self.assertEqual(run_cli(['--help']), 0)
            self.assertEqual(run_cli(['explode']), 2)
            self.assertEqual(run_cli(['minksum', '--bogus']), 2)

            body = self.write_json('circle.json', UNIT_CIRCLE)
            self.assertEqual(run_cli(['minksum', body, body, '--grid', '8', '--out', self.path('c.csv')]), 0)
            bad = self.write_json('bad.json', {'dim': 2})
            self.assertEqual(run_cli(['minksum', body, bad, '--out', self.path('c.csv')]), 2)
        self.assertTrue(os.path.exists(self.path('c.csv')))
