"""
Products on the total space of the rank-one extension, written on projectable vector fields X + f d/dx at a point
(t, x): the base part is multiplied with the structure constants of the manifold, the vertical part is read off
from lambda and its derivatives at x.
"""
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from owd.frobenius.geometry import ProductData
from owd.symbolic import expression as ex


@dataclass(frozen=True)
class ExtendedVector:
    base: np.ndarray
    fibre: complex = 0j

    def __sub__(self, other: 'ExtendedVector') -> 'ExtendedVector':
        return ExtendedVector(self.base - other.base, self.fibre - other.fibre)

    @property
    def size(self) -> float:
        return max(float(np.max(np.abs(self.base), initial=0.0)), abs(self.fibre))


@dataclass(frozen=True)
class FibreJet:
    """lambda, lambda' and the chart derivatives d_alpha lambda at one point of the curve"""
    value: complex
    slope: complex
    gradient: np.ndarray

    def lie(self, X: np.ndarray) -> complex:
        return complex(np.dot(self.gradient, X))


def fibre_jet(bundle, point: Mapping[str, complex], evaluator: ex.Evaluator = None) -> FibreJet:
    """
    point must bind the curve variable; for dual bundles d_alpha lambda = lambda d_alpha(log lambda) so that no
    derivative of theta functions beyond the ones in the fibre derivative is evaluated
    """
    ev = evaluator or ex.Evaluator(point)
    value = ev(bundle.superpotential)
    gradient = np.array([ev(d) for d in bundle.superpotential_gradient], dtype=complex)
    if bundle.dual:
        gradient = value * gradient
    return FibreJet(value=value, slope=ev(bundle.lambda_x), gradient=gradient)


def extended_product(jet: FibreJet, products: ProductData, X: ExtendedVector, Y: ExtendedVector,
                     dual: bool = False) -> ExtendedVector:
    """
    X * Y = X . Y + (L_X L_Y - L_(X.Y)) / lambda' d/dx for projectable X, Y, with L_X = Lie_X lambda; the dual
    product carries a 1/lambda weight on every vertical term
    """
    base = products.multiply(X.base, Y.base, dual=dual)
    lx, ly, lxy = jet.lie(X.base), jet.lie(Y.base), jet.lie(base)
    lam, slope = jet.value, jet.slope
    if dual:
        fibre = (lx * ly / lam - lxy) / slope + (Y.fibre * lx + X.fibre * ly) / lam + X.fibre * Y.fibre * slope / lam
    else:
        fibre = (lx * ly - lxy) / slope + Y.fibre * lx + X.fibre * ly + X.fibre * Y.fibre * slope
    return ExtendedVector(base, fibre)


def unit(products: ProductData) -> ExtendedVector:
    return ExtendedVector(products.unit, 0j)


def stored_eventual_identity(bundle, point: Mapping[str, complex], evaluator: ex.Evaluator = None) -> ExtendedVector:
    ev = evaluator or ex.Evaluator(point)
    base = np.array(bundle.eventual_identity.values(point, bundle.chart, ev), dtype=complex)
    return ExtendedVector(base, ev(bundle.eventual_identity.coefficient(bundle.variable)))


def eventual_identity(bundle, point: Mapping[str, complex], jet: FibreJet) -> ExtendedVector:
    """E + (lambda - Lie_E lambda) / lambda' d/dx, with E the stored Euler field"""
    euler = bundle.euler_components(point)
    return ExtendedVector(euler, (jet.value - jet.lie(euler)) / jet.slope)


def eventual_inverse(products: ProductData, jet: FibreJet) -> ExtendedVector:
    """E^-1 + (1/lambda - Lie_(E^-1) lambda) / lambda' d/dx, with E^-1 the inverse of E in the canonical frame"""
    inverse = products.euler_inverse
    return ExtendedVector(inverse, (1 / jet.value - jet.lie(inverse)) / jet.slope)


def random_vector(rng: np.random.Generator, dimension: int) -> ExtendedVector:
    z = rng.normal(size=(2, dimension + 1))
    values = z[0] + 1j * z[1]
    return ExtendedVector(values[:dimension], complex(values[dimension]))


def defect(left: ExtendedVector, right: ExtendedVector) -> float:
    return (left - right).size / max(1.0, left.size, right.size)
