"""
Levenberg-Marquardt for Small Dense Least-Squares Problems
==========================================================

The collision queries solve for one or two sets of surface angles, so the
systems here have at most four unknowns. Jacobians come from central
differences and each step solves the damped normal equations

    (J^T J + lambda I) dx = -J^T r

directly. A step is kept only if it lowers the residual norm; the damping
then shrinks. A rejected step grows the damping and the iterate stays put.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EvaluationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 100
    residual_tol: float = 1e-10
    step_tol: float = 1e-12
    damping_init: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    fd_step: float = 1e-6

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise DomainError(f"max_iters must be at least 1, got {self.max_iters}")
        for name in ('residual_tol', 'step_tol', 'damping_init', 'damping_up', 'damping_down', 'fd_step'):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    def with_overrides(self, **overrides):
        """Copy with the given fields replaced; None values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_json_dict(self):
        return {
            'max_iters': self.max_iters,
            'residual_tol': self.residual_tol,
            'step_tol': self.step_tol,
            'damping_init': self.damping_init,
            'damping_up': self.damping_up,
            'damping_down': self.damping_down,
            'fd_step': self.fd_step,
        }


@dataclass
class SolveResult:
    x: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def _evaluate(residual_fn, x):
    r = np.atleast_1d(np.asarray(residual_fn(x), dtype=float))
    if not np.all(np.isfinite(r)):
        raise EvaluationError(f"residual is not finite at {x}", point=np.array(x))
    return r


def fd_jacobian(residual_fn, x, step=1e-6):
    """Central-difference Jacobian, column j from residuals at x +/- step * e_j."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    columns = []
    for j in range(len(x)):
        shift = np.zeros_like(x)
        shift[j] = step
        columns.append((_evaluate(residual_fn, x + shift) - _evaluate(residual_fn, x - shift)) / (2 * step))
    return np.stack(columns, axis=-1)


def levenberg_marquardt(residual_fn, x0, cfg=None, wrap=None):
    """
    Minimize |residual_fn(x)|^2 from x0.

    wrap, if given, maps every trial iterate back into range (angle
    wrapping). The result holds the best iterate seen, the accepted
    residual norms in history, and whether a tolerance was met. Running
    out of iterations is not an error.
    """
    cfg = cfg or SolverConfig()
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    if wrap is not None:
        x = np.asarray(wrap(x), dtype=float).reshape(x.shape)
    r = _evaluate(residual_fn, x)
    cost = float(np.linalg.norm(r))
    history = [cost]
    damping = cfg.damping_init
    J = None

    for iteration in range(1, cfg.max_iters + 1):
        if cost <= cfg.residual_tol:
            return SolveResult(x, cost, iteration - 1, True, history)
        if J is None:
            J = fd_jacobian(residual_fn, x, cfg.fd_step)
        JtJ = J.T @ J
        Jtr = J.T @ r
        try:
            dx = np.linalg.solve(JtJ + damping * np.eye(len(x)), -Jtr)
        except np.linalg.LinAlgError:
            damping *= cfg.damping_up
            continue

        if np.linalg.norm(dx) <= cfg.step_tol:
            return SolveResult(x, cost, iteration, True, history)

        trial = x + dx
        if wrap is not None:
            trial = np.asarray(wrap(trial), dtype=float).reshape(x.shape)
        r_trial = _evaluate(residual_fn, trial)
        cost_trial = float(np.linalg.norm(r_trial))
        logger.debug("lm iter %d: cost=%.3e trial=%.3e damping=%.1e", iteration, cost, cost_trial, damping)

        if cost_trial < cost:
            x, r, cost = trial, r_trial, cost_trial
            history.append(cost)
            damping *= cfg.damping_down
            J = None
        else:
            damping *= cfg.damping_up

    converged = cost <= cfg.residual_tol
    return SolveResult(x, cost, cfg.max_iters, converged, history)
