import unittest
from fractions import Fraction

import numpy as np
from flaky import flaky
from hypothesis import given, settings
from hypothesis.strategies import floats

from owd.exceptions import TruncationError
from owd.frobenius import flat_coordinates as fc
from owd.models import saito


class TestFlatCoordinates(unittest.TestCase):
    def test_rank_two_is_already_flat(self):
        values = fc.flat_values(2, [0.4 - 0.2j, 1.1])
        np.testing.assert_allclose(values, [0.4 - 0.2j, 1.1], atol=1e-14)

    def test_rank_three(self):
        a = [0.8 + 0.1j, -0.3, 0.5j]
        t = fc.flat_values(3, a)
        np.testing.assert_allclose(t, [a[0], a[1], a[2] - a[0] ** 2 / 8], atol=1e-13)

    def test_jacobian_shapes(self):
        t, jac, hess = fc.flat_coords_A(4, [0.2, -0.1j, 0.3, 0.05])
        self.assertEqual(t.shape, (4,))
        self.assertEqual(jac.shape, (4, 4))
        self.assertEqual(hess.shape, (4, 4, 4))

    def test_inverse_map(self):
        a = np.array([0.7 - 0.2j, 0.1j, -0.4, 0.25])
        t = fc.flat_values(4, a)
        np.testing.assert_allclose(fc.invert_flat_map(4, t), a, atol=1e-11)

    def test_rank_out_of_range(self):
        with self.assertRaises(TruncationError):
            fc.flat_coordinate_expressions(fc.MAX_ELL + 1)


class TestVarpi(unittest.TestCase):
    def test_coefficients(self):
        self.assertEqual(fc.varpi_coefficients(1), {})
        self.assertEqual(fc.varpi_coefficients(2), {(2, 0): Fraction(1, 6)})
        self.assertEqual(fc.varpi_coefficients(3), {(1, 1, 0): Fraction(1, 4)})
        self.assertEqual(fc.varpi_coefficients(4), {(0, 2, 0, 0): Fraction(1, 10), (1, 0, 1, 0): Fraction(1, 5),
                                                    (3, 0, 0, 0): Fraction(1, 30)})

    def test_listing(self):
        self.assertEqual(saito.format_varpi(1), '0')
        self.assertEqual(saito.format_varpi(2), '1/6 v1^2')
        self.assertEqual(saito.format_varpi(3), '1/4 v1*v2')


@flaky(max_runs=2)
@settings(deadline=None, max_examples=25)
@given(floats(min_value=-1, max_value=1), floats(min_value=-1, max_value=1), floats(min_value=-1, max_value=1))
def test_branch_inversion_recomposes(a1, a2, a3):
    assert fc.check_recomposition(3, [a1, a2, a3]) < 1e-10
