import json

from minkowski.applications.minkowski_cf import MinkSumQuery
from minkowski.applications.point_cloud_io import write_report_json
from minkowski.applications.validation import validate_query

from ._base import GeometryCommand, ThresholdFailure

DEFAULT_GRID = {2: 1000, 3: 100}


class Command(GeometryCommand):
    help = "Check a closed-form boundary with the kissing-point and support-function oracles"

    def add_arguments(self, parser):
        parser.add_argument('body1')
        parser.add_argument('body2')
        parser.add_argument('--grid', type=int, default=None)
        parser.add_argument('--support-grid', type=int, default=None,
                            help='Surface samples per body for the support check')
        parser.add_argument('--out', default=None, help='Write the JSON report here instead of stdout')
        super().add_arguments(parser)

    def run(self, **options):
        with self.timer.stage('load'):
            query = MinkSumQuery(self.load_body(options['body1'], 'body1'),
                                 self.load_body(options['body2'], 'body2'))
        with self.timer.stage('validate'):
            result = validate_query(query, options['grid'] or DEFAULT_GRID[query.dim],
                                    support_grid=options['support_grid'],
                                    workers=self.threads(options))
        if options['out']:
            self.output_files.append(write_report_json(result, options['out']))
        else:
            self.stdout.write(json.dumps(result.model_dump(), indent=2))
        if not result.passed:
            raise ThresholdFailure(
                f"validation thresholds not met (mean e_gradient {result.kissing.mean_gradient:.3e}, "
                f"support violation {result.support_violation:.3e})")
