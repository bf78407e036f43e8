import json

from minkowski.applications import config
from minkowski.applications.collision_query import METHODS, NORMAL, proximity_query
from minkowski.applications.minkowski_cf import MinkSumQuery
from minkowski.applications.point_cloud_io import write_report_json
from minkowski.schema import ProximityData

from ._base import GeometryCommand


class Command(GeometryCommand):
    help = "Contact status, distance and witness points of two bodies"

    def add_arguments(self, parser):
        parser.add_argument('body1')
        parser.add_argument('body2')
        parser.add_argument('--method', choices=METHODS, default=NORMAL)
        parser.add_argument('--touch-tol', type=float, default=None)
        parser.add_argument('--out', default=None)
        self.add_solver_arguments(parser)
        super().add_arguments(parser)

    def run(self, **options):
        with self.timer.stage('load'):
            query = MinkSumQuery(self.load_body(options['body1'], 'body1'),
                                 self.load_body(options['body2'], 'body2'))
        cfg = self.solver_config(options)
        touch_tol = options['touch_tol'] if options['touch_tol'] is not None else config.touch_tol()
        with self.timer.stage('solve'):
            result = proximity_query(query, options['method'], cfg, touch_tol=touch_tol)
        data = ProximityData(**result.to_json_dict())
        if options['out']:
            self.output_files.append(write_report_json(data, options['out']))
        else:
            self.stdout.write(json.dumps(data.model_dump(), indent=2))
