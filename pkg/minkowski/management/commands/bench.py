import csv

from django.core.management.base import CommandError

from minkowski.applications.bench import (
    CLOSED_FORM,
    HULL,
    bench_sweep,
    linear_fit_r2,
    loglog_exponent,
    rows_for,
)

from ._base import USAGE_ERROR, GeometryCommand, ThresholdFailure

DEFAULT_SIZES = {2: '100,200,400', 3: '10,20,40'}
MIN_R2 = 0.95
MIN_HULL_EXPONENT = 1.3


def _sizes(text):
    return [int(v) for v in text.split(',') if v.strip()]


class Command(GeometryCommand):
    help = "Time the closed form against the 2D hull and edge-sorting baselines over grid sizes"
    has_seed = True

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, choices=(2, 3), default=2)
        parser.add_argument('--sizes', default=None, help='Comma-separated grid sizes')
        parser.add_argument('--repeats', type=int, default=5)
        parser.add_argument('--no-baselines', action='store_true')
        parser.add_argument('--check', action='store_true',
                            help='Exit 1 unless the closed form scales linearly and the hull does not')
        parser.add_argument('--out', default=None, help='CSV of method,n,seconds')
        super().add_arguments(parser)

    def run(self, **options):
        dim = options['dim']
        sizes = _sizes(options['sizes'] or DEFAULT_SIZES[dim])
        if len(sizes) < 2:
            raise CommandError("--sizes needs at least two grid sizes to fit", returncode=USAGE_ERROR)
        with self.timer.stage('sweep'):
            rows = bench_sweep(dim, sizes, repeats=options['repeats'], seed=options['seed'],
                               baselines=not options['no_baselines'])

        if options['out']:
            with open(options['out'], 'w', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(['method', 'n', 'seconds'])
                for row in rows:
                    writer.writerow([row.method, row.n, format(row.seconds, '.6g')])
            self.output_files.append(options['out'])
        else:
            for row in rows:
                self.stdout.write(f"{row.method:12s} {row.n:8d} {row.seconds:.6g}")

        r2 = linear_fit_r2(*rows_for(rows, CLOSED_FORM))
        self.stdout.write(f"closed form linear fit R^2 = {r2:.4f}")
        exponent = None
        if rows_for(rows, HULL)[0]:
            exponent = loglog_exponent(*rows_for(rows, HULL))
            self.stdout.write(f"hull baseline log-log exponent = {exponent:.3f}")

        if options['check']:
            if r2 < MIN_R2:
                raise ThresholdFailure(f"closed form is not linear in grid size (R^2 = {r2:.4f})")
            if exponent is not None and exponent <= MIN_HULL_EXPONENT:
                raise ThresholdFailure(f"hull baseline exponent {exponent:.3f} is not above {MIN_HULL_EXPONENT}")
