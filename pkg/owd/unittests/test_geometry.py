import unittest

import numpy as np
from pytest import mark

from owd.exceptions import DiscriminantError
from owd.frobenius import geometry
from owd.models import catalog
from owd.symbolic import expression as ex
from owd.verification import residuals
from owd.verification.sampling import Sampler


def _bundle(name, **params):
    return catalog.build(name, params)


def _sample(bundle, seed=3):
    return Sampler(bundle, seed).draw(1)[0]


class TestCriticalPoints(unittest.TestCase):
    def test_a1(self):
        bundle = _bundle('saito-a', ell=1)
        frame = geometry.critical_points(bundle, {'v1': 0.4 + 0.3j})
        self.assertEqual(len(frame), 1)
        self.assertAlmostEqual(frame.points[0], 0)
        self.assertAlmostEqual(frame.values[0], 0.4 + 0.3j)
        self.assertAlmostEqual(frame.etas[0], 0.5)

    def test_a2_real_point(self):
        bundle = _bundle('saito-a', ell=2)
        frame = geometry.critical_points(bundle, {'v1': -3, 'v2': 0})
        by_point = sorted(frame.entries(), key=lambda e: e[0].real)
        np.testing.assert_allclose([q for q, _, _ in by_point], [-1, 1], atol=1e-12)
        np.testing.assert_allclose([u for _, u, _ in by_point], [2, -2], atol=1e-12)
        np.testing.assert_allclose([eta for _, _, eta in by_point], [-1 / 6, 1 / 6], atol=1e-12)

    def test_trigonometric_critical_points_verify(self):
        bundle = _bundle('dz-a', ell=1, r=1)
        sample = _sample(bundle)
        for q in sample.frame.points:
            value = ex.evaluate(bundle.critical_function, bundle.point(sample.point, q))
            self.assertLess(abs(value), 1e-10)

    def test_polynomial_roots(self):
        np.testing.assert_allclose(sorted(r.real for r in geometry.polynomial_roots([1, 0, -1])), [-1, 1])
        np.testing.assert_allclose(geometry.polynomial_roots([0, 2, -4]), [2])
        self.assertEqual(geometry.polynomial_roots([5]), [])

    def test_logarithmic_critical_points(self):
        roots = geometry.logarithmic_critical_points([(-0.7, 1), (0.7, 1)])
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0], 0)


class TestResidueMetrics(unittest.TestCase):
    def test_a2_metric_is_antidiagonal(self):
        bundle = _bundle('saito-a', ell=2)
        for point in ({'v1': 0.8 - 0.3j, 'v2': 0.2j}, {'v1': -1.1, 'v2': 0.6 + 0.4j}):
            data = geometry.eta_residue(bundle, point)
            np.testing.assert_allclose(data.metric, [[0, 1 / 3], [1 / 3, 0]], atol=1e-12)
            self.assertLess(data.symmetry_defect(), 1e-10)
            self.assertLess(data.condition, 10)

    def test_residue_at_infinity(self):
        bundle = _bundle('saito-a', ell=2)
        point = {'v1': 0.5 + 0.5j, 'v2': -0.3}
        np.testing.assert_allclose(geometry.eta_at_infinity(bundle, point),
                                   geometry.eta_residue(bundle, point).metric, atol=1e-10)

    def test_flat_chart_metric_is_constant(self):
        bundle = _bundle('saito-a', ell=3)
        samples = Sampler(bundle, 11).draw(4)
        reference = geometry.eta_residue(bundle, samples[0].point, samples[0].frame).metric
        for sample in samples[1:]:
            metric = geometry.eta_residue(bundle, sample.point, sample.frame).metric
            self.assertLess(residuals.metric_variation(metric, reference), 1e-9)

    def test_dual_a1_intersection_form(self):
        bundle = _bundle('dual-saito-a', ell=1)
        data = geometry.g_residue(bundle, {'w1': 0.7})
        np.testing.assert_allclose(data.metric, [[-2]], atol=1e-12)

    def test_discriminant(self):
        bundle = _bundle('saito-a', ell=1)
        with self.assertRaises(DiscriminantError):
            geometry.g_residue(bundle, {'v1': 0})

    def test_dubrovin_zhang_intersection_form(self):
        bundle = _bundle('dz-a', ell=2, r=1)
        sample = _sample(bundle)
        inverse = geometry.g_residue(bundle, sample.point, sample.frame).inverse_metric
        np.testing.assert_allclose(inverse, np.full((3, 3), 0.5) - np.eye(3), atol=1e-9)

    def test_ma_zuo_intersection_form(self):
        bundle = _bundle('ma-zuo', ell=1, r=1, k=1)
        sample = _sample(bundle)
        inverse = geometry.g_residue(bundle, sample.point, sample.frame).inverse_metric
        expected = np.ones((4, 4)) - np.diag([1, 1, 1, -1])
        np.testing.assert_allclose(inverse, expected, atol=1e-9)

    def test_jacobi_intersection_form(self):
        bundle = _bundle('jacobi-a', ell=1, tau=1j)
        sample = _sample(bundle)
        inverse = geometry.g_residue(bundle, sample.point, sample.frame).inverse_metric
        np.testing.assert_allclose(inverse, bundle.intersection_form, atol=1e-7)
        self.assertAlmostEqual(inverse[0, 0] * np.pi ** 2, -0.5, places=6)

    def test_trigonometric_normalizations(self):
        """eta_mu = 1 / lambda''(q_mu) for omega = -dx, the scale entering squared"""
        bundle = _bundle('dz-a', ell=2, r=1)
        sample = _sample(bundle)
        second = ex.differentiate(bundle.lambda_x, 'x')
        for q, eta in zip(sample.frame.points, sample.frame.etas):
            expected = 1 / ex.evaluate(second, bundle.point(sample.point, q))
            self.assertLess(abs(eta - expected), 1e-9 * max(1.0, abs(expected)))

    def test_closed_forms_match_residues(self):
        for name, params in (('dz-a', {'ell': 2, 'r': 2}), ('ma-zuo', {'ell': 2, 'r': 1, 'k': 1})):
            bundle = _bundle(name, **params)
            for sample in Sampler(bundle, 2).draw(2):
                self.assertLess(residuals.intersection_form_residual(bundle, sample.point, sample.frame), 1e-9)


class TestProducts(unittest.TestCase):
    def test_unit(self):
        bundle = _bundle('saito-a', ell=3)
        sample = _sample(bundle)
        products = sample.products
        X = np.array([0.3 + 0.1j, -1.2, 0.4j])
        np.testing.assert_allclose(products.multiply(products.unit, X), X, atol=1e-10)

    def test_dual_unit_is_euler(self):
        bundle = _bundle('dual-saito-a', ell=2)
        sample = _sample(bundle)
        products = sample.products
        X = np.array([1.1, -0.4 + 0.2j])
        np.testing.assert_allclose(products.multiply(products.euler, X, dual=True), X, atol=1e-9)

    def test_euler_inverse(self):
        bundle = _bundle('saito-a', ell=2)
        products = _sample(bundle).products
        np.testing.assert_allclose(products.multiply(products.euler, products.euler_inverse), products.unit,
                                   atol=1e-9)


@mark.parametrize('name,params', [
    ('saito-a', {'ell': 3}),
    ('saito-d', {'ell': 4}),
    ('dz-a', {'ell': 1, 'r': 1}),
    ('ma-zuo', {'ell': 1, 'r': 1, 'k': 1}),
])
def test_canonical_diagonalization(name, params):
    bundle = catalog.build(name, params)
    sample = Sampler(bundle, 5).draw(1)[0]
    assert residuals.canonical_diagonal_residual(bundle, sample.point, sample.frame) < 1e-8


@mark.parametrize('name,params', [
    ('saito-a', {'ell': 3}),
    ('dz-a', {'ell': 1, 'r': 1}),
])
def test_critical_values_move_with_the_superpotential(name, params):
    bundle = catalog.build(name, params)
    sample = Sampler(bundle, 5).draw(1)[0]
    analytic = geometry.canonical_jacobian(bundle, sample.point, sample.frame)
    numeric = geometry.critical_value_jacobian(bundle, sample.point, sample.frame)
    np.testing.assert_allclose(numeric, analytic, rtol=1e-6, atol=1e-8)
