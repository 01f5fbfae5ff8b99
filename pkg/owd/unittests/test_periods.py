import unittest

import numpy as np
from pytest import mark

from owd.exceptions import EndpointMismatchError, ParameterError, QuadratureError
from owd.frobenius.geometry import product_data
from owd.models import catalog
from owd.models.bundle import IntegrationPath
from owd.verification import periods, runner
from owd.verification.quadrature import adaptive_gauss_legendre, gauss_legendre


class TestQuadrature(unittest.TestCase):
    def test_polynomial_exact(self):
        self.assertAlmostEqual(gauss_legendre(lambda t: t ** 3, 0.0, 1.0, nodes=4), 0.25, places=14)

    def test_vector_integrand(self):
        value = adaptive_gauss_legendre(lambda t: np.stack([t, np.exp(1j * t)], axis=-1))
        np.testing.assert_allclose(value, [0.5, (np.exp(1j) - 1) / 1j], atol=1e-12)

    def test_interval(self):
        self.assertAlmostEqual(adaptive_gauss_legendre(np.cos, 0.0, np.pi / 2), 1.0, places=12)

    def test_no_convergence(self):
        with self.assertRaises(QuadratureError):
            adaptive_gauss_legendre(lambda t: np.where(t < 1 / 3, 0.0, 1.0), max_depth=3)


class TestTwistedPeriods(unittest.TestCase):
    def setUp(self):
        self.a1 = catalog.build('dual-saito-a', {'ell': 1})
        self.a2 = catalog.build('dual-saito-a', {'ell': 2})
        self.point1 = {'w1': 0.8}
        self.path1 = IntegrationPath((-0.8 + 0j, 0.8 + 0j))
        self.point2 = {'w1': 0.5, 'w2': 1.3}

    def test_closed_form(self):
        value = periods.twisted_period(self.a1, self.path1, 3, self.point1)
        self.assertAlmostEqual(value, -32 * 0.8 ** 7 / 35, places=10)

    def test_zero_exponent_measures_the_path(self):
        self.assertAlmostEqual(periods.twisted_period(self.a1, self.path1, 0, self.point1), 1.6, places=12)

    def test_conjugation(self):
        path = IntegrationPath((-1.8 + 0j, 0.5 + 0j))
        z = 2.5 + 0.7j
        for deriv in [(), ('w1',), ('w1', 'w2')]:
            value = periods.twisted_period(self.a2, path, z, self.point2, deriv)
            mirrored = periods.twisted_period(self.a2, path, z.conjugate(), self.point2, deriv)
            self.assertAlmostEqual(mirrored, value.conjugate(), places=9)

    def test_real_zero_paths(self):
        paths = periods.real_zero_paths(self.a2, self.point2)
        np.testing.assert_allclose([p.waypoints for p in paths], [(-1.8, 0.5), (0.5, 1.3)], atol=1e-12)
        with self.assertRaises(ParameterError):
            periods.real_zero_paths(self.a2, {'w1': 0.5 + 0.2j, 'w2': 1.3})

    def test_exponent_range(self):
        with self.assertRaises(ParameterError):
            periods.twisted_period(self.a1, self.path1, 1.5, self.point1, ('w1',))
        with self.assertRaises(ParameterError):
            periods.twisted_period(self.a1, self.path1, -0.5, self.point1)
        with self.assertRaises(ParameterError):
            periods.twisted_period(self.a1, self.path1, 3, self.point1, ('w1', 'w1', 'w1'))

    def test_endpoints_must_be_zeros(self):
        with self.assertRaises(EndpointMismatchError):
            periods.twisted_period(self.a1, IntegrationPath((-0.5 + 0j, 0.8 + 0j)), 3, self.point1)

    def test_quadrature_stability(self):
        self.assertLess(periods.quadrature_stability(self.a1, self.path1, 3.0, self.point1), 1e-8)


@mark.parametrize('ell,point,path,zexp,tolerance', [
    (1, {'w1': 0.8}, (-0.8, 0.8), 3.0, 1e-5),
    (1, {'w1': 0.8}, (-0.8, 0.8), 2.5, 1e-5),
    (2, {'w1': 0.5, 'w2': 1.3}, (-1.8, 0.5), 2.5, 1e-4),
    (2, {'w1': 0.5, 'w2': 1.3}, (0.5, 1.3), 3.0, 1e-4),
])
def test_gauss_manin(ell, point, path, zexp, tolerance):
    bundle = catalog.build('dual-saito-a', {'ell': ell})
    route = IntegrationPath(tuple(complex(p) for p in path))
    products = product_data(bundle, point)
    assert periods.gauss_manin_residual(bundle, route, zexp, point, products) < tolerance
    broken = periods.perturbed_dual_structure(products)
    assert periods.gauss_manin_residual(bundle, route, zexp, point, broken) > 1e-3


def test_period_checks_pass():
    config = runner.RunConfig('dual-saito-a', {'ell': 2}, seed=3, samples=2)
    report = runner.run(config, kind=runner.PERIOD)
    assert report.checks == ['gauss-manin', 'quadrature-stability']
    assert report.failed() == []
