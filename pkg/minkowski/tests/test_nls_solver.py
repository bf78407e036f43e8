import numpy as np
from django.test import SimpleTestCase

from minkowski.applications.collision_query import residual_mink_normal
from minkowski.applications.errors import DomainError, EvaluationError
from minkowski.applications.geom_core import BodyInstance
from minkowski.applications.minkowski_cf import MinkSumQuery
from minkowski.applications.nls_solver import SolverConfig, fd_jacobian, levenberg_marquardt
from minkowski.applications.primitives import sphere


def rosenbrock(x):
    return np.array([10 * (x[1] - x[0] ** 2), 1 - x[0]])


class FiniteDifferenceTests(SimpleTestCase):
    def test_square(self):
        J = fd_jacobian(lambda x: x ** 2, [3.0])
        np.testing.assert_allclose(J, [[6.0]], atol=1e-6)

    def test_differences_are_central(self):
        # a forward difference of x^2 at 1 with step 0.5 would give 2.5
        J = fd_jacobian(lambda x: x ** 2, [1.0], step=0.5)
        np.testing.assert_allclose(J, [[2.0]], rtol=1e-15)

    def test_linear_map_is_recovered(self):
        A = np.array([[2.0, -1.0], [0.5, 3.0], [1.0, 1.0]])
        for step in (1e-4, 1e-6):
            np.testing.assert_allclose(fd_jacobian(lambda x: A @ x, [0.3, -0.7], step), A, atol=1e-9)

    def test_non_finite_residual_names_the_point(self):
        def residual(x):
            return np.where(x > 0, np.sqrt(np.abs(x)), np.nan)

        with self.assertRaises(EvaluationError) as ctx:
            fd_jacobian(residual, [1e-7], step=1e-6)
        self.assertIsNotNone(ctx.exception.point)


class LevenbergMarquardtTests(SimpleTestCase):
    def test_scalar_root(self):
        result = levenberg_marquardt(lambda x: x - 2, [10.0])
        self.assertTrue(result.converged)
        self.assertAlmostEqual(float(result.x[0]), 2.0, delta=1e-10)

    def test_rosenbrock(self):
        result = levenberg_marquardt(rosenbrock, [-1.2, 1.0], SolverConfig(max_iters=500))
        self.assertTrue(result.converged)
        np.testing.assert_allclose(result.x, [1.0, 1.0], atol=1e-6)

    def test_accepted_residuals_never_increase(self):
        result = levenberg_marquardt(rosenbrock, [-1.2, 1.0], SolverConfig(max_iters=500))
        self.assertTrue(np.all(np.diff(result.history) <= 0))

    def test_linear_residual_converges_in_two_accepted_steps(self):
        A = np.array([[2.0, 1.0], [1.0, 3.0], [0.0, 1.0]])
        b = A @ np.array([1.0, -2.0])
        result = levenberg_marquardt(lambda x: A @ x - b, [0.0, 0.0], SolverConfig(damping_init=1e-12))
        self.assertTrue(result.converged)
        self.assertLessEqual(len(result.history) - 1, 2)
        np.testing.assert_allclose(result.x, [1.0, -2.0], atol=1e-9)

    def test_runs_are_deterministic(self):
        first = levenberg_marquardt(rosenbrock, [-1.2, 1.0], SolverConfig(max_iters=500))
        second = levenberg_marquardt(rosenbrock, [-1.2, 1.0], SolverConfig(max_iters=500))
        np.testing.assert_array_equal(first.x, second.x)
        self.assertEqual(first.iterations, second.iterations)

    def test_iteration_budget_is_not_an_error(self):
        result = levenberg_marquardt(rosenbrock, [-1.2, 1.0], SolverConfig(max_iters=2))
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 2)

    def test_wrap_is_applied_to_iterates(self):
        result = levenberg_marquardt(lambda x: np.sin(x), [3.0], wrap=lambda x: np.mod(x + np.pi, 2 * np.pi) - np.pi)
        self.assertTrue(result.converged)
        self.assertLess(abs(abs(float(result.x[0])) - np.pi), 1e-9)

    def test_non_finite_start(self):
        with self.assertRaises(EvaluationError):
            levenberg_marquardt(lambda x: np.array([np.inf]), [0.0])

    def test_contact_normal_residual_for_unit_spheres(self):
        query = MinkSumQuery(BodyInstance(sphere(1)), BodyInstance(sphere(1), center=[3.0, 0.0, 0.0]))
        result = levenberg_marquardt(lambda phi: residual_mink_normal(query, phi), [0.3, -0.2])
        self.assertTrue(result.converged)
        self.assertLessEqual(result.iterations, 10)
        np.testing.assert_allclose(result.x, [0.0, 0.0], atol=1e-8)


class SolverConfigTests(SimpleTestCase):
    def test_defaults(self):
        cfg = SolverConfig()
        self.assertEqual(cfg.max_iters, 100)
        self.assertEqual(cfg.residual_tol, 1e-10)
        self.assertEqual(cfg.to_json_dict()['fd_step'], 1e-6)

    def test_overrides_skip_none(self):
        cfg = SolverConfig().with_overrides(max_iters=7, residual_tol=None)
        self.assertEqual(cfg.max_iters, 7)
        self.assertEqual(cfg.residual_tol, 1e-10)

    def test_validation(self):
        with self.assertRaises(DomainError):
            SolverConfig(max_iters=0)
        with self.assertRaises(DomainError):
            SolverConfig(damping_init=-1.0)
