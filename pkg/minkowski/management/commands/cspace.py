from pathlib import Path

from minkowski.applications.body_io import load_scene
from minkowski.applications.cspace_gen import cobstacle_slices, sample_orientations, slice_point_count
from minkowski.applications.point_cloud_io import FORMATS, write_point_cloud

from ._base import GeometryCommand

DEFAULT_GRID = {2: 50, 3: 10}


class Command(GeometryCommand):
    help = "C-obstacle slices of a scene, one cloud file per (orientation, obstacle)"
    has_seed = True

    def add_arguments(self, parser):
        parser.add_argument('scene', help='Scene description: {"robot": body, "obstacles": [body, ...]}')
        parser.add_argument('--orientations', type=int, default=50)
        parser.add_argument('--grid', type=int, default=None)
        parser.add_argument('--format', choices=FORMATS, default='csv')
        parser.add_argument('--out', required=True, help='Output directory')
        super().add_arguments(parser)

    def run(self, **options):
        out = Path(options['out'])
        out.mkdir(parents=True, exist_ok=True)

        with self.timer.stage('load'):
            scene = load_scene(options['scene'])
            orientations = sample_orientations(scene.dim, options['orientations'], options['seed'])
        grid = options['grid'] or DEFAULT_GRID[scene.dim]

        with self.timer.stage('compute'):
            slices = cobstacle_slices(scene, orientations, grid, workers=self.threads(options))

        with self.timer.stage('write'):
            for k, cslice in enumerate(slices):
                for j, message in cslice.failures:
                    self.failures.append({'orientation': k, 'obstacle': j, 'error': message})
                    self.stderr.write(f"orientation {k}, obstacle {j}: {message}")
                for j, cloud in enumerate(cslice.clouds):
                    if cloud is None:
                        continue
                    path = out / f"slice_{k:04d}_obstacle_{j:04d}.{options['format']}"
                    self.output_files.append(write_point_cloud(cloud, path, options['format']))

        points = slice_point_count(slices)
        seconds = self.timer.get_seconds('compute')
        self.stdout.write(f"{len(slices)} orientation(s) x {len(scene.obstacles)} obstacle(s): "
                          f"{points} points in {seconds:.3f}s "
                          f"({1e6 * seconds / max(points, 1):.3f} us/point), {len(self.failures)} failure(s)")
