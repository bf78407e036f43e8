"""
Command-line entry point: ``python -m minksum_be.cli <subcommand> [options]``.

A thin front over the minkowski management commands that only exposes the
geometry subcommands. Exit status: 0 on success, 1 when a run misses its
pass/fail thresholds, 2 on usage or input errors.
"""

import os
import sys

SUBCOMMANDS = ('minksum', 'validate', 'bench', 'cspace', 'collide', 'plot2d')


def _usage():
    return f"usage: minksum {{{','.join(SUBCOMMANDS)}}} [options]\n"


def run_cli(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ('-h', '--help'):
        sys.stdout.write(_usage())
        return 0 if argv else 2
    name, rest = argv[0], argv[1:]
    if name not in SUBCOMMANDS:
        sys.stderr.write(f"unknown subcommand {name!r}\n" + _usage())
        return 2

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'minksum_be.settings')
    import django
    from django.core.management import load_command_class

    django.setup()
    command = load_command_class('minkowski', name)
    try:
        command.run_from_argv(['minksum', name, *rest])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    return 0


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
