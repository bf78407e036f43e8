import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone

from minkowski.applications import config
from minkowski.applications.body_io import load_body
from minkowski.applications.errors import BodyFormatError, GeometryError
from minkowski.applications.model_methods import RunManifestMethods
from minkowski.applications.point_cloud_io import write_report_json
from minkowski.applications.stage_timer import StageTimer
from minkowski.models import RunManifest
from minkowski.schema import RunManifestData

logger = logging.getLogger(__name__)

# Options every Django command carries, plus call_command's streams; left out of manifests
DJANGO_OPTIONS = {
    'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks',
    'stdout', 'stderr',
}

USAGE_ERROR = 2
THRESHOLD_FAILURE = 1


class ThresholdFailure(Exception):
    """A run finished but its results miss a pass/fail threshold."""


class GeometryCommand(BaseCommand):
    """
    Shared plumbing for the geometry subcommands.

    Subclasses implement run(**options), list what they wrote in
    self.output_files and what they skipped in self.failures. Input problems
    exit with status 2, missed thresholds with status 1, and every run with
    --out leaves a manifest next to it.
    """
    has_seed = False

    def add_arguments(self, parser):
        if self.has_seed:
            parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--threads', type=int, default=None,
                            help='Worker threads (defaults to MINKSUM_THREADS)')
        parser.add_argument('--record', action='store_true',
                            help='Store the run manifest in the database')

    def add_solver_arguments(self, parser):
        parser.add_argument('--max-iters', type=int, default=None)
        parser.add_argument('--residual-tol', type=float, default=None)

    def solver_config(self, options):
        try:
            return config.solver_config(max_iters=options.get('max_iters'),
                                        residual_tol=options.get('residual_tol'))
        except GeometryError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

    def threads(self, options):
        return options.get('threads') or config.threads()

    def load_body(self, path, name):
        return load_body(path, prefix=name)

    def handle(self, *args, **options):
        self.timer = StageTimer()
        self.output_files = []
        self.failures = []
        try:
            self.run(**options)
            failure = None
        except ThresholdFailure as exc:
            failure = exc
        except BodyFormatError as exc:
            raise CommandError(f"invalid input: {exc}", returncode=USAGE_ERROR) from exc
        except GeometryError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        except OSError as exc:
            raise CommandError(f"{exc.filename}: {exc.strerror}", returncode=USAGE_ERROR) from exc

        self.write_manifest(options)
        if failure is not None:
            raise CommandError(str(failure), returncode=THRESHOLD_FAILURE)

    def run(self, **options):
        raise NotImplementedError

    def manifest_path(self, out):
        out = Path(out)
        if out.is_dir():
            return out / 'manifest.json'
        return out.with_name(f"{out.stem}.manifest.json")

    def write_manifest(self, options):
        echo = {k: v for k, v in options.items() if k not in DJANGO_OPTIONS}
        data = RunManifestData(
            command=self.command_name(),
            seed=options.get('seed'),
            config={**echo, 'settings': config.config_echo()},
            stage_times=self.timer.get_stage_times(),
            output_files=[str(p) for p in self.output_files],
            failures=self.failures,
            created_at=timezone.now().isoformat(),
        )
        if options.get('record'):
            run = RunManifest.objects.create(
                command=data.command, seed=data.seed, config=data.config,
                stage_times=data.stage_times, output_files=data.output_files,
                failures=data.failures)
            data = RunManifestMethods.to_data(run)
            logger.info("recorded run %d", run.id)
        if options.get('out'):
            path = self.manifest_path(options['out'])
            write_report_json(data, path)
        return data

    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]
