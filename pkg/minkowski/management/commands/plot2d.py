from minkowski.applications.minkowski_cf import MODES, MinkSumQuery, boundary_cloud
from minkowski.applications.point_cloud_io import read_point_cloud
from minkowski.applications.svg_render import render_svg2d

from ._base import GeometryCommand


class Command(GeometryCommand):
    help = "SVG of two planar bodies, their Minkowski boundary and kissing placements"

    def add_arguments(self, parser):
        parser.add_argument('body1')
        parser.add_argument('body2')
        parser.add_argument('--cloud', default=None,
                            help='Boundary cloud to draw (computed from the bodies if omitted)')
        parser.add_argument('--grid', type=int, default=400)
        parser.add_argument('--mode', choices=MODES, default='contact')
        parser.add_argument('--placements', type=int, default=0,
                            help='Copies of body 2 drawn along the boundary')
        parser.add_argument('--out', required=True)
        super().add_arguments(parser)

    def run(self, **options):
        with self.timer.stage('load'):
            body1 = self.load_body(options['body1'], 'body1')
            body2 = self.load_body(options['body2'], 'body2')
            if options['cloud']:
                cloud = read_point_cloud(options['cloud'])
                query = MinkSumQuery(body1, body2, cloud.mode)
            else:
                query = MinkSumQuery(body1, body2, options['mode'])
                cloud = None
        if cloud is None and query.dim == 2:
            with self.timer.stage('compute'):
                cloud = boundary_cloud(query, options['grid'])
        with self.timer.stage('render'):
            render_svg2d(query, cloud, path=options['out'], placements=options['placements'])
        self.output_files.append(options['out'])
