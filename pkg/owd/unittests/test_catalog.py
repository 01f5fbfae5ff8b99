import cmath
import math
import unittest

from pytest import mark, raises

from owd.exceptions import ParameterError, UnknownFamilyError
from owd.models import catalog, saito
from owd.symbolic import expression as ex


class TestParameters(unittest.TestCase):
    def test_parse(self):
        self.assertEqual(catalog.parse_parameters('saito-a', {'ell': '3'}), {'ell': 3})
        self.assertEqual(catalog.parse_parameters('dz-a', {'ell': '2', 'r': '1'}), {'ell': 2, 'r': 1})

    def test_defaults(self):
        self.assertEqual(catalog.parse_parameters('jacobi-a', {'ell': '1'}), {'ell': 1, 'tau': 1j})
        self.assertEqual(catalog.parse_parameters('jacobi-a', {'ell': '2', 'tau': '0.1+1.2i'}),
                         {'ell': 2, 'tau': 0.1 + 1.2j})
        self.assertEqual(catalog.parse_parameters('rank2-a', {'ell': '2'}), {'ell': 2, 'psi': 'linear'})

    def test_alternative_schema(self):
        params = catalog.parse_parameters('ma-zuo', {'n': '4', 'r': '1', 'ks': '1,1'})
        self.assertEqual(params, {'n': 4, 'r': 1, 'ks': (1, 1)})

    def test_unknown_family(self):
        with self.assertRaises(UnknownFamilyError):
            catalog.parse_parameters('saito-e', {'ell': '6'})

    def test_bad_parameters(self):
        with self.assertRaises(ParameterError):
            catalog.parse_parameters('saito-a', {'r': '1'})
        with self.assertRaises(ParameterError):
            catalog.parse_parameters('saito-a', {'ell': 'two'})
        with self.assertRaises(ParameterError):
            catalog.parse_parameters('ma-zuo', {'ell': '1', 'r': '1'})

    def test_listing(self):
        lines = catalog.listing().split('\n')
        self.assertEqual(len(lines), len(catalog.FAMILIES))
        self.assertIn('ma-zuo{ell:int,r:int,k:int | n:int,r:int,ks:ints}', lines)
        self.assertIn('saito-a{ell:int}', lines)


class TestBuild(unittest.TestCase):
    def test_cached(self):
        self.assertIs(catalog.build('saito-a', {'ell': 2}), catalog.build('saito-a', {'ell': 2}))
        self.assertIs(catalog.build('ma-zuo', {'n': 4, 'r': 1, 'ks': [1, 1]}),
                      catalog.build('ma-zuo', {'n': 4, 'r': 1, 'ks': (1, 1)}))

    def test_charts(self):
        self.assertEqual(catalog.build('dz-a', {'ell': 2, 'r': 1}).chart, ('w1', 'w2', 'w3'))
        self.assertEqual(catalog.build('ma-zuo', {'ell': 1, 'r': 1, 'k': 1}).chart, ('w1', 'w2', 'w3', 'u'))
        self.assertEqual(catalog.build('ma-zuo', {'n': 4, 'r': 1, 'ks': (1, 1)}).chart,
                         ('w1', 'w2', 'w3', 'w4', 'u1', 'u2'))
        self.assertEqual(catalog.build('jacobi-a', {'ell': 2, 'tau': 1j}).chart, ('w1', 'w2', 'u', 'tau'))

    def test_charge(self):
        self.assertAlmostEqual(catalog.build('saito-a', {'ell': 3}).charge, 0.5)
        self.assertAlmostEqual(catalog.build('saito-d', {'ell': 4}).charge, 1 - 2 / 6)
        self.assertEqual(catalog.build('dz-a', {'ell': 1, 'r': 1}).charge, 1.0)

    def test_d_weights(self):
        self.assertEqual(saito.d_weights(5), (2, 4, 6, 8, 5))

    def test_foldings(self):
        b2 = catalog.build('fold-b', {'ell': 2})
        self.assertEqual(b2.chart, ('v1', 'v2'))
        self.assertEqual(b2.folding.embedding, (0, 2))
        self.assertEqual(b2.folding.source.dimension, 3)
        self.assertEqual(b2.folding.source_point({'v1': 0.3, 'v2': 0.1j}),
                         {'v1': 0.3, 'v2': 0j, 'v3': 0.1j})
        i2 = catalog.build('fold-i2', {'ell': 4})
        self.assertEqual(i2.folding.embedding, (0, 2))

    def test_generalized_ma_zuo_without_dual_prepotential(self):
        self.assertIsNone(catalog.build('ma-zuo', {'n': 4, 'r': 1, 'ks': (1, 1)}).dual_prepotential)
        self.assertIsNotNone(catalog.build('ma-zuo', {'ell': 1, 'r': 1, 'k': 1}).dual_prepotential)


@mark.parametrize('name,params', [
    ('saito-a', {'ell': 9}),
    ('saito-d', {'ell': 2}),
    ('dual-saito-a', {'ell': 0}),
    ('dz-a', {'ell': 0, 'r': 1}),
    ('ma-zuo', {'ell': 1, 'r': 1, 'k': 0}),
    ('ma-zuo', {'n': 3, 'r': 1, 'ks': (1, 1)}),
    ('jacobi-a', {'ell': 1, 'tau': 0.1j}),
    ('jacobi-a', {'ell': 5, 'tau': 1j}),
    ('rank2-a', {'ell': 2, 'psi': 'quartic'}),
    ('fold-b', {'ell': 1}),
    ('fold-i2', {'ell': 2}),
])
def test_rejected_parameters(name, params):
    with raises(ParameterError):
        catalog.build(name, params)


class TestJacobiPrepotential(unittest.TestCase):
    def setUp(self):
        self.bundle = catalog.build('jacobi-a', {'ell': 2, 'tau': 1j})
        self.point = {'w1': 0.21, 'w2': 0.17 + 0.05j, 'u': 0.3, 'tau': 1j}

    def _third(self, a, b, c):
        return ex.evaluate(_third_derivative(self.bundle.dual_prepotential, a, b, c), self.point)

    def test_u_w_w(self):
        for a in ('w1', 'w2'):
            for b in ('w1', 'w2'):
                expected = -2j * math.pi ** 3 * (1 + (a == b))
                self.assertAlmostEqual(self._third('u', a, b), expected, places=9)

    def test_u_u_u(self):
        self.assertAlmostEqual(self._third('u', 'u', 'u'), 0)

    def test_u_u_tau(self):
        self.assertAlmostEqual(self._third('u', 'u', 'tau'), 2j * math.pi ** 3, places=9)

    def test_euler_contraction_is_the_metric(self):
        """F*(E, d_a, d_b) = g_ab with E = (1 / 2 pi i) d/du the unit of the dual product"""
        chart = self.bundle.chart
        for i, a in enumerate(chart):
            for j, b in enumerate(chart):
                contraction = self._third('u', a, b) / (2j * math.pi)
                self.assertAlmostEqual(contraction, self.bundle.closed_metric[i, j], places=8)


def _third_derivative(expression, a, b, c):
    return ex.differentiate(ex.differentiate(ex.differentiate(expression, a), b), c)


DZ_POINT = {'w1': 0.3 + 0.1j, 'w2': -0.7 + 0.4j, 'w3': 1.1 - 0.2j, 'w4': 0.2 - 0.5j}


@mark.parametrize('ell,r', [(2, 1), (1, 2), (2, 2)])
def test_dubrovin_zhang_diagonal_third_derivatives(ell, r):
    bundle = catalog.build('dz-a', {'ell': ell, 'r': r})
    w = [DZ_POINT[n] for n in bundle.chart]
    for a, name in enumerate(bundle.chart):
        expected = 1 + ell - 1 / r + sum(1 / (cmath.exp(w[a] - wb) - 1) for b, wb in enumerate(w) if b != a)
        value = ex.evaluate(_third_derivative(bundle.dual_prepotential, name, name, name), DZ_POINT)
        assert abs(value - expected) < 1e-9


@mark.parametrize('ell,r', [(2, 1), (1, 2), (2, 2)])
def test_dubrovin_zhang_contracted_third_derivatives(ell, r):
    """sum_c F*_abc = -ell / r + ell delta_ab, i.e. F*(E, d_a, d_b) = -g_ab"""
    bundle = catalog.build('dz-a', {'ell': ell, 'r': r})
    F = bundle.dual_prepotential
    for i, a in enumerate(bundle.chart):
        for j, b in enumerate(bundle.chart):
            total = sum(ex.evaluate(_third_derivative(F, a, b, c), DZ_POINT) for c in bundle.chart)
            assert abs(total - (-ell / r + ell * (i == j))) < 1e-9
            assert abs(total / ell + bundle.closed_metric[i, j]) < 1e-9


@mark.parametrize('ell,r,k', [(1, 1, 1), (2, 1, 1), (1, 2, 2)])
def test_ma_zuo_pole_third_derivative(ell, r, k):
    bundle = catalog.build('ma-zuo', {'ell': ell, 'r': r, 'k': k})
    point = dict(zip(bundle.chart[:-1], (0.3 + 0.1j, -0.7 + 0.4j, 1.1 - 0.2j, 0.2 - 0.5j, -0.4 - 0.3j)))
    point['u'] = 0.45 + 0.25j
    w = [point[n] for n in bundle.chart[:-1]]
    expected = k ** 3 / r - k * (ell - k) - k * sum(1 / (cmath.exp(point['u'] - wa) - 1) for wa in w)
    value = ex.evaluate(_third_derivative(bundle.dual_prepotential, 'u', 'u', 'u'), point)
    assert abs(value - expected) < 1e-9
