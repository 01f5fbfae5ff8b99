import dataclasses
import math
import unittest

import numpy as np
from pytest import mark

from owd.exceptions import NumericDomainError, UnknownCheckError
from owd.frobenius.geometry import eta_residue
from owd.models import catalog, dual, saito
from owd.symbolic import expression as ex
from owd.verification import periods, residuals, runner
from owd.verification.sampling import Sampler

BROKEN = 1e-3


def _samples(bundle, count=1, seed=7):
    return Sampler(bundle, seed).draw(count)


@mark.parametrize('name,params', [
    ('saito-a', {'ell': 2}),
    ('saito-a', {'ell': 3}),
    ('saito-d', {'ell': 4}),
    ('fold-b', {'ell': 2}),
    ('fold-i2', {'ell': 4}),
    ('dual-saito-a', {'ell': 1}),
    ('dual-saito-a', {'ell': 2}),
    ('dual-saito-a', {'ell': 3}),
    ('dz-a', {'ell': 1, 'r': 1}),
    ('dz-a', {'ell': 2, 'r': 1}),
    ('dz-a', {'ell': 2, 'r': 2}),
    ('ma-zuo', {'ell': 1, 'r': 1, 'k': 1}),
    ('ma-zuo', {'ell': 2, 'r': 1, 'k': 1}),
    ('ma-zuo', {'n': 4, 'r': 1, 'ks': (1, 1)}),
    ('jacobi-a', {'ell': 1, 'tau': 1j}),
    ('jacobi-a', {'ell': 1, 'tau': 0.3 + 1j}),
    ('rank2-a', {'ell': 2, 'psi': 'linear'}),
    ('rank2-a', {'ell': 3, 'psi': 'linear'}),
    ('rank2-a', {'ell': 2, 'psi': 'cubic'}),
])
def test_identities_hold(name, params):
    report = runner.run(runner.RunConfig(family=name, params=params, seed=1, samples=3))
    assert report.checks
    assert report.failed() == []


class TestCheckSelection(unittest.TestCase):
    def test_applicable(self):
        primal = [c.name for c in runner.applicable(catalog.build('saito-a', {'ell': 2}))]
        self.assertIn('open-wdvv-1', primal)
        self.assertIn('auxiliary-extension', primal)
        self.assertNotIn('kab-spread', primal)
        self.assertNotIn('fstar-consistency', primal)
        self.assertNotIn('intersection-form', primal)
        d4 = [c.name for c in runner.applicable(catalog.build('saito-d', {'ell': 4}))]
        self.assertNotIn('open-wdvv-1', d4)
        self.assertNotIn('metric-constancy', d4)
        jacobi = [c.name for c in runner.applicable(catalog.build('jacobi-a', {'ell': 1, 'tau': 1j}))]
        self.assertIn('kab-value', jacobi)
        self.assertIn('fstar-consistency', jacobi)
        self.assertIn('intersection-form', jacobi)
        generalized = [c.name for c in runner.applicable(catalog.build('ma-zuo', {'n': 4, 'r': 1, 'ks': (1, 1)}))]
        self.assertNotIn('fstar-consistency', generalized)
        self.assertNotIn('intersection-form', generalized)
        rank_two = [c.name for c in runner.applicable(catalog.build('rank2-a', {'ell': 2, 'psi': 'cubic'}))]
        self.assertEqual(rank_two, ['rank2-family-1', 'rank2-family-2', 'rank2-family-3', 'rank2-family-4',
                                    'rank2-restriction'])
        self.assertEqual([c.name for c in runner.applicable(catalog.build('dual-saito-a', {'ell': 2}),
                                                             runner.PERIOD)],
                         ['gauss-manin', 'quadrature-stability'])

    def test_unknown_check(self):
        bundle = catalog.build('saito-a', {'ell': 2})
        with self.assertRaises(UnknownCheckError):
            runner.select(bundle, ('no-such-check',))
        with self.assertRaises(UnknownCheckError):
            runner.select(bundle, ('kab-spread',))
        with self.assertRaises(UnknownCheckError):
            runner.select(catalog.build('dual-saito-a', {'ell': 2}), ('gauss-manin',))

    def test_selection_keeps_order(self):
        bundle = catalog.build('saito-a', {'ell': 2})
        names = [c.name for c in runner.select(bundle, ('closed-wdvv', 'omega-x'))]
        self.assertEqual(names, ['closed-wdvv', 'omega-x'])

    def test_tolerances(self):
        checks = runner.select(catalog.build('saito-a', {'ell': 2}), ('omega-x', 'closed-wdvv'))
        config = runner.RunConfig('saito-a', {'ell': 2}, tolerances={'omega-x': 1e-3})
        self.assertEqual(runner.tolerances(config, checks), {'omega-x': 1e-3, 'closed-wdvv': 1e-7})
        with self.assertRaises(UnknownCheckError):
            runner.tolerances(runner.RunConfig('saito-a', {'ell': 2}, tolerances={'kab-value': 1e-3}), checks)

    def test_loose_tolerance_for_jacobi(self):
        config = runner.RunConfig('jacobi-a', {'ell': 1, 'tau': 1j})
        checks = runner.select(catalog.build('jacobi-a', {'ell': 1, 'tau': 1j}), ('omega-x',))
        self.assertEqual(runner.tolerances(config, checks), {'omega-x': 1e-6})

    def test_domain_errors_become_nan(self):
        def explode(bundle, sample, context, memo):
            raise NumericDomainError('log', 'at zero')

        bundle = catalog.build('saito-a', {'ell': 2})
        sample = _samples(bundle)[0]
        check = runner.Check('explode', runner.SAMPLE, lambda b: True, explode)
        context = runner.RunContext(runner.RunConfig('saito-a', {'ell': 2}))
        with self.assertLogs('owd.verification.runner', level='WARNING'):
            values = runner.evaluate_sample(bundle, sample, [check], context)
        self.assertTrue(math.isnan(values['explode']))

    def test_deterministic(self):
        config = runner.RunConfig('dz-a', {'ell': 1, 'r': 1}, seed=4, samples=2, checks=('omega-x', 'kab-value'))
        first = runner.run(config).to_json()
        self.assertEqual(first, runner.run(config).to_json())

    def test_parallel_matches_serial(self):
        config = runner.RunConfig('saito-a', {'ell': 3}, seed=2, samples=4, checks=('open-wdvv-2',))
        serial = runner.run(config).table()
        parallel = runner.run(runner.RunConfig('saito-a', {'ell': 3}, seed=2, samples=4, checks=('open-wdvv-2',),
                                               jobs=3)).table()
        self.assertTrue(serial.equals(parallel))

    def test_wall_time_only_on_request(self):
        config = runner.RunConfig('saito-a', {'ell': 1}, samples=1, checks=('omega-x',))
        self.assertEqual(runner.run(config).document()['wall_ms'], 0)


class TestNegativeControls(unittest.TestCase):
    def test_open_wdvv_without_integration_constant(self):
        good = catalog.build('saito-a', {'ell': 2})
        bad = saito.build_saito_a(2, varpi=ex.ZERO)
        sample = _samples(good)[0]
        worst = max(residuals.open_wdvv_residual(bad, sample.point, x, sample.products)[1] for x in sample.xs)
        self.assertGreater(worst, BROKEN)

    def test_open_wdvv_trigonometric_without_integration_constant(self):
        good = catalog.build('dz-a', {'ell': 1, 'r': 1})
        bad = dual.build_dz_a(1, 1, varpi=ex.ZERO)
        sample = _samples(good)[0]
        worst = max(max(residuals.open_wdvv_residual(bad, sample.point, x, sample.products)) for x in sample.xs)
        self.assertGreater(worst, BROKEN)

    def test_open_wdvv_dual_with_spurious_constant(self):
        good = catalog.build('dual-saito-a', {'ell': 1})
        bad = dual.build_dual_saito_a(1, varpi=ex.power(ex.var('w1'), 2))
        sample = _samples(good)[0]
        worst = max(max(residuals.open_wdvv_residual(bad, sample.point, x, sample.products)) for x in sample.xs)
        self.assertGreater(worst, BROKEN)

    def test_kab_with_spurious_fibre_term(self):
        bundle = catalog.build('dual-saito-a', {'ell': 2})
        sample = _samples(bundle)[0]
        good = residuals.kab_constancy(bundle, sample.point, sample.xs, sample.products)
        bad = residuals.kab_constancy(bundle, sample.point, sample.xs, sample.products,
                                      residuals.spurious_fibre(bundle))
        self.assertLess(max(good), 1e-7)
        self.assertGreater(max(bad), BROKEN)

    def test_homogeneity_with_wrong_charge(self):
        bundle = catalog.build('saito-a', {'ell': 2})
        sample = _samples(bundle)[0]
        bad = residuals.with_charge(bundle, 0.1)
        values = [residuals.homogeneity_residual(bad, sample.point, x) for x in sample.xs]
        self.assertGreater(max(v[0] for v in values), BROKEN)
        self.assertGreater(max(v[1] for v in values), BROKEN)

    def test_eventual_identity_without_fibre_shift(self):
        bundle = catalog.build('saito-a', {'ell': 3})
        sample = _samples(bundle)[0]
        bad = residuals.without_fibre_shift(bundle)
        worst = max(residuals.eventual_identity_residuals(bad, sample.point, x, sample.products)[0]
                    for x in sample.xs)
        self.assertGreater(worst, BROKEN)

    def test_closed_wdvv_with_perturbed_tensor(self):
        bundle = catalog.build('saito-a', {'ell': 3})
        sample = _samples(bundle)[0]
        data = eta_residue(bundle, sample.point, sample.frame)
        self.assertLess(residuals.closed_wdvv_residual(data), 1e-9)
        self.assertGreater(residuals.closed_wdvv_residual(residuals.perturbed_tensor(data)), BROKEN)

    def test_perturbed_dual_product(self):
        bundle = catalog.build('dual-saito-a', {'ell': 2})
        sample = _samples(bundle)[0]
        bad = periods.perturbed_dual_structure(sample.products)
        rng = np.random.default_rng(0)
        defect = max(residuals.extended_product_defect(bundle, sample.point, x, bad, rng) for x in sample.xs)
        self.assertGreater(defect, BROKEN)
        self.assertLess(residuals.fstar_residual(bundle, sample.point, sample.frame, sample.products), 1e-7)
        self.assertGreater(residuals.fstar_residual(bundle, sample.point, sample.frame, bad), BROKEN)

    def test_canonical_data_from_another_point(self):
        bundle = catalog.build('saito-a', {'ell': 2})
        first, second = _samples(bundle, count=2)
        self.assertGreater(residuals.euler_canonical_residual(bundle, first.point, second.products), BROKEN)

    def test_rescaled_canonical_normalizations(self):
        bundle = catalog.build('saito-a', {'ell': 3})
        sample = _samples(bundle)[0]
        self.assertLess(residuals.canonical_diagonal_residual(bundle, sample.point, sample.frame), 1e-7)
        frame = dataclasses.replace(sample.frame, etas=tuple(1.1 * e for e in sample.frame.etas))
        self.assertGreater(residuals.canonical_diagonal_residual(bundle, sample.point, frame), BROKEN)

    def test_metric_of_parameter_chart_varies(self):
        bundle = catalog.build('saito-d', {'ell': 4})
        first, second = _samples(bundle, count=2)
        reference = residuals.flat_metric(bundle, first.point, first.frame)
        metric = residuals.flat_metric(bundle, second.point, second.frame)
        self.assertGreater(residuals.metric_variation(metric, reference), BROKEN)

    def test_rank_two_fibre_algebra_not_associative(self):
        bundle = catalog.build('rank2-a', {'ell': 2, 'psi': 'linear'})
        w = ex.var('w')
        bad = bundle.replace_components(ex.add(bundle.phi, ex.mul(0.5, ex.power(w, 2))), bundle.psi)
        sample = Sampler(bundle, 7).draw(1)[0]
        worst = max(residuals.rank2_residual(bad, sample.point, z, wv, sample.products)[3]
                    for z, wv in zip(sample.xs, sample.ws))
        self.assertGreater(worst, BROKEN)

    def test_rank_two_restriction(self):
        bundle = catalog.build('rank2-a', {'ell': 2, 'psi': 'linear'})
        bad = bundle.replace_components(bundle.phi, ex.add(bundle.psi, ex.power(ex.var('w'), 2)))
        sample = Sampler(bundle, 7).draw(1)[0]
        worst = max(residuals.rank2_restriction_residual(bad, sample.point, z, wv)
                    for z, wv in zip(sample.xs, sample.ws))
        self.assertGreater(worst, BROKEN)

    def test_rank_two_table_of_cubic_variant(self):
        bundle = catalog.build('rank2-a', {'ell': 2, 'psi': 'cubic'})
        sample = Sampler(bundle, 7).draw(1)[0]
        worst = max(residuals.rank2_table_residual(bundle, sample.point, z, wv)
                    for z, wv in zip(sample.xs, sample.ws))
        self.assertGreater(worst, BROKEN)

    def test_first_family_where_implied(self):
        self.assertEqual(residuals.first_family_where_implied([1e-3], [1e-12], [1.0]), 1e-3)
        self.assertEqual(residuals.first_family_where_implied([1e-3], [1e-5], [1.0]), 0.0)
        self.assertEqual(residuals.first_family_where_implied([1e-3], [1e-12], [1e-5]), 0.0)
        self.assertEqual(residuals.first_family_where_implied([1e-3, 0.2], [1e-12, 1e-12], [1.0, 1.0]), 0.2)
        self.assertEqual(residuals.first_family_where_implied([], [], []), 0.0)

    def test_auxiliary_extension_on_primal_model(self):
        bundle = catalog.build('saito-a', {'ell': 2})
        sample = _samples(bundle)[0]
        values = [residuals.open_wdvv_residual(bundle, sample.point, x, sample.products) for x in sample.xs]
        curvatures = [abs(ex.evaluate(bundle.fibre_second, bundle.point(sample.point, x))) for x in sample.xs]
        implied = [v for v, k in zip(values, curvatures)
                   if v[1] < residuals.AUXILIARY_SECOND_FAMILY and k > residuals.AUXILIARY_CURVATURE]
        self.assertTrue(implied)
        self.assertLess(residuals.auxiliary_extension_residual(bundle, sample.point, sample.xs, values), 1e-7)

    def test_jacobi_fstar_against_uniformly_scaled_lattice_block(self):
        bundle = catalog.build('jacobi-a', {'ell': 1, 'tau': 0.3 + 1j})
        sample = _samples(bundle)[0]
        self.assertLess(residuals.fstar_residual(bundle, sample.point, sample.frame, sample.products), 1e-6)
        ell = 1
        unscaled = np.zeros((ell + 2, ell + 2))
        unscaled[:ell, :ell] = 1.0 / (ell + 1) - np.eye(ell)
        unscaled[ell, ell + 1] = unscaled[ell + 1, ell] = 1.0 / math.pi ** 2
        bad = dataclasses.replace(bundle, intersection_form=unscaled)
        self.assertGreater(residuals.fstar_residual(bad, sample.point, sample.frame, sample.products), BROKEN)

    def test_jacobi_fstar_with_unbalanced_quadratic_part(self):
        bundle = catalog.build('jacobi-a', {'ell': 1, 'tau': 0.3 + 1j})
        sample = _samples(bundle)[0]
        u, w1 = ex.var('u'), ex.var('w1')
        quadratic = ex.mul(2.0, ex.power(w1, 2))
        bad = dataclasses.replace(bundle, dual_prepotential=ex.add(
            bundle.dual_prepotential, ex.mul(1j * math.pi ** 3 - 2j * math.pi, u, quadratic)))
        self.assertGreater(residuals.fstar_residual(bad, sample.point, sample.frame, sample.products), BROKEN)


class TestScaledResiduals(unittest.TestCase):
    def test_absolute_below_one(self):
        self.assertAlmostEqual(residuals._scaled(np.array([0.5]), np.array([0.2])), 0.5)

    def test_relative_above_one(self):
        self.assertAlmostEqual(residuals._scaled(np.array([2.0, -1.0]), np.array([10.0, 3.0])), 0.2)
        self.assertAlmostEqual(residuals._scaled(np.array([3.0]), np.array([1.0]), np.array([-30.0])), 0.1)

    def test_empty(self):
        self.assertEqual(residuals._scaled(np.zeros(0), np.zeros(0)), 0.0)
