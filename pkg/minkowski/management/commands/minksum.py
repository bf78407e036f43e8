from minkowski.applications.minkowski_cf import MODES, MinkSumQuery, boundary_cloud
from minkowski.applications.point_cloud_io import FORMATS, write_point_cloud

from ._base import GeometryCommand

# Grid sizes used when --grid is omitted
DEFAULT_GRID = {2: 1000, 3: 100}


class Command(GeometryCommand):
    help = "Closed-form Minkowski boundary of two bodies, written as CSV or JSON"

    def add_arguments(self, parser):
        parser.add_argument('body1', help='Body description (JSON)')
        parser.add_argument('body2', help='Body description (JSON)')
        parser.add_argument('--grid', type=int, default=None,
                            help='Angles on the circle (2D) or per spherical angle (3D)')
        parser.add_argument('--mode', choices=MODES, default='contact')
        parser.add_argument('--format', choices=FORMATS, default=None,
                            help='Output format (defaults to the --out suffix, then csv)')
        parser.add_argument('--out', required=True)
        super().add_arguments(parser)

    def run(self, **options):
        with self.timer.stage('load'):
            body1 = self.load_body(options['body1'], 'body1')
            body2 = self.load_body(options['body2'], 'body2')
            query = MinkSumQuery(body1, body2, options['mode'])
        grid = options['grid'] or DEFAULT_GRID[query.dim]
        with self.timer.stage('compute'):
            cloud = boundary_cloud(query, grid, workers=self.threads(options))
        with self.timer.stage('write'):
            self.output_files.append(write_point_cloud(cloud, options['out'], options['format']))
        self.stdout.write(f"{len(cloud)} points written to {options['out']}")
