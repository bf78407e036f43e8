"""Runtime settings for the geometry layer, read from django.conf.settings."""

import os

from django.conf import settings

from .nls_solver import SolverConfig


def threads():
    value = getattr(settings, 'MINKSUM_THREADS', None) or os.cpu_count() or 1
    return max(1, int(value))


def touch_tol():
    return float(getattr(settings, 'MINKSUM_TOUCH_TOL', 1e-8))


def max_concurrent():
    return max(1, int(getattr(settings, 'MINKSUM_MAX_CONCURRENT', 2)))


def solver_config(**overrides):
    """SolverConfig from MINKSUM_SOLVER, then per-call overrides (None skipped)."""
    base = SolverConfig(**getattr(settings, 'MINKSUM_SOLVER', {}))
    return base.with_overrides(**overrides)


def config_echo():
    """The effective settings, as recorded in run manifests."""
    return {
        'threads': threads(),
        'touch_tol': touch_tol(),
        'solver': solver_config().to_json_dict(),
    }
