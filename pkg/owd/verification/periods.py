"""
Twisted periods of dual bundles, integrals of lambda^z dx along segments joining zeros of lambda, and the flatness
of the deformed dual connection they witness: second parameter derivatives of a period are z times the dual product
applied to the first derivatives.
"""
import cmath
import itertools
import logging
from functools import lru_cache
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from owd.exceptions import EndpointMismatchError, ParameterError
from owd.frobenius.geometry import ProductData
from owd.models.bundle import IntegrationPath, ModelBundle
from owd.symbolic import expression as ex
from owd.verification.quadrature import ABSOLUTE_TOLERANCE, adaptive_gauss_legendre

_logger = logging.getLogger(__name__)

ENDPOINT_GUARD = 1e-8
REAL_GUARD = 1e-12
DERIVATIVE_EXPONENT = 2

Derivative = Tuple[str, ...]


@lru_cache(maxsize=None)
def _superpotential_jet(bundle: ModelBundle):
    lam = bundle.superpotential
    first = {a: ex.differentiate(lam, a) for a in bundle.chart}
    pairs = itertools.combinations_with_replacement(bundle.chart, 2)
    second = {(a, b): ex.differentiate(first[a], b) for a, b in pairs}
    return lam, first, second


def _power(base: np.ndarray, log_base: np.ndarray, s: complex) -> np.ndarray:
    if s == 0:
        return np.ones_like(base)
    safe = np.where(base == 0, 1.0, log_base)
    return np.where(base == 0, 0j, np.exp(s * safe))


def _check_exponent(zexp: complex, derivs: Sequence[Derivative]):
    if any(derivs) and not zexp.real > DERIVATIVE_EXPONENT:
        raise ParameterError('parameter derivatives of twisted periods need Re z > {}, got z = {}'.format(
            DERIVATIVE_EXPONENT, zexp))
    if not zexp.real >= 0:
        raise ParameterError('twisted periods need Re z >= 0, got z = {}'.format(zexp))
    if any(len(d) > 2 for d in derivs):
        raise ParameterError('twisted periods are differentiated at most twice')


def _segment_integrand(bundle: ModelBundle, point: Mapping[str, complex], A: complex, B: complex, zexp: complex,
                       derivs: Sequence[Derivative]):
    lam, first, second = _superpotential_jet(bundle)
    variable = bundle.variable
    phase = cmath.phase(ex.evaluate(lam, bundle.point(point, 0.5 * (A + B))))

    def jet(x: complex):
        ev = ex.Evaluator(bundle.point(point, x))
        return ev(lam), {a: ev(e) for a, e in first.items()}, {k: ev(e) for k, e in second.items()}

    def integrand(t: np.ndarray) -> np.ndarray:
        xs = A + (B - A) * t * t * (3 - 2 * t)
        dx = 6 * (B - A) * t * (1 - t)
        jets = [jet(x) for x in xs]
        values = np.array([j[0] for j in jets], dtype=complex)
        logs = 1j * phase + np.log(values * cmath.exp(-1j * phase) + (values == 0))
        powers = {s: _power(values, logs, zexp - s) for s in (0, 1, 2)}
        rows = []
        for d in derivs:
            if len(d) == 0:
                column = powers[0]
            elif len(d) == 1:
                column = zexp * powers[1] * np.array([j[1][d[0]] for j in jets])
            else:
                key = tuple(sorted(d, key=bundle.chart.index))
                la = np.array([j[1][d[0]] for j in jets])
                lb = np.array([j[1][d[1]] for j in jets])
                lab = np.array([j[2][key] for j in jets])
                column = zexp * (zexp - 1) * powers[2] * la * lb + zexp * powers[1] * lab
            rows.append(column * dx)
        return np.stack(rows, axis=-1)

    return integrand


def _check_endpoints(bundle: ModelBundle, point: Mapping[str, complex], path: IntegrationPath):
    lam = bundle.superpotential
    scale = max(1.0, abs(ex.evaluate(lam, bundle.point(point, 0.5 * (path.waypoints[0] + path.waypoints[-1])))))
    for end in (path.waypoints[0], path.waypoints[-1]):
        value = ex.evaluate(lam, bundle.point(point, end))
        if abs(value) > ENDPOINT_GUARD * scale:
            raise EndpointMismatchError('lambda({}) = {} does not vanish at the end of the path'.format(end, value))


def twisted_periods(bundle: ModelBundle, path: IntegrationPath, zexp: complex, point: Mapping[str, complex],
                    derivs: Sequence[Derivative], nodes: Optional[int] = None,
                    tolerance: float = ABSOLUTE_TOLERANCE) -> np.ndarray:
    """
    periods for several parameter derivatives at once, one adaptive quadrature per segment of the path

    Args:
        bundle: a dual bundle with polynomial superpotential (dual-saito-a)
        path: waypoints of the cycle; its ends must be zeros of lambda
        zexp: the twist exponent z
        point: chart values
        derivs: chart names to differentiate by, () for the period itself
        nodes: Gauss-Legendre nodes per panel, defaults to the path's own
        tolerance: absolute tolerance of the quadrature

    Returns: complex array, one period per entry of derivs
    """
    zexp = complex(zexp)
    derivs = [tuple(d) for d in derivs]
    _check_exponent(zexp, derivs)
    _check_endpoints(bundle, point, path)
    nodes = nodes or path.nodes
    total = np.zeros(len(derivs), dtype=complex)
    for A, B in path.segments():
        f = _segment_integrand(bundle, point, complex(A), complex(B), zexp, derivs)
        total = total + adaptive_gauss_legendre(f, 0.0, 1.0, nodes=nodes, tolerance=tolerance)
    return total


def twisted_period(bundle: ModelBundle, path: IntegrationPath, zexp: complex, point: Mapping[str, complex],
                   deriv: Derivative = (), nodes: Optional[int] = None) -> complex:
    """integral of D(lambda^z) dx along the path, D the parameter derivative named by deriv"""
    return complex(twisted_periods(bundle, path, zexp, point, [deriv], nodes)[0])


def real_zero_paths(bundle: ModelBundle, point: Mapping[str, complex], nodes: int = 20) -> List[IntegrationPath]:
    """segments between adjacent real zeros of lambda; all zeros must be real"""
    zeros = [complex(z) for z in bundle.special_points(point)]
    if any(abs(z.imag) > REAL_GUARD for z in zeros):
        raise ParameterError('zeros of lambda are not real at this point: {}'.format(zeros))
    reals = sorted(z.real for z in zeros)
    return [IntegrationPath((complex(a), complex(b)), nodes) for a, b in zip(reals[:-1], reals[1:])
            if b - a > bundle.sampling.guard]


def _derivatives(bundle: ModelBundle) -> Tuple[List[Derivative], List[Derivative]]:
    first = [(a,) for a in bundle.chart]
    second = list(itertools.combinations_with_replacement(bundle.chart, 2))
    return first, second


def gauss_manin_residual(bundle: ModelBundle, path: IntegrationPath, zexp: complex, point: Mapping[str, complex],
                         products: ProductData, nodes: Optional[int] = None) -> float:
    """max over a <= b of |p_ab - z c*^d_ab p_d|, relative to max(1, |p|)"""
    first, second = _derivatives(bundle)
    values = twisted_periods(bundle, path, zexp, point, first + second, nodes)
    p, pp = values[:len(first)], values[len(first):]
    c = products.require_dual()
    index = {a: i for i, a in enumerate(bundle.chart)}
    worst = 0.0
    for k, (a, b) in enumerate(second):
        predicted = complex(zexp) * np.dot(c[:, index[a], index[b]], p)
        worst = max(worst, abs(pp[k] - predicted))
    scale = max(1.0, float(np.max(np.abs(values))))
    _logger.debug('gauss-manin on %s with z = %s: %.3e', path.waypoints, zexp, worst / scale)
    return worst / scale


def quadrature_stability(bundle: ModelBundle, path: IntegrationPath, zexp: complex,
                         point: Mapping[str, complex]) -> float:
    """change of the period and its first and second derivatives when the nodes per panel are doubled"""
    first, second = _derivatives(bundle)
    derivs = [()] + first + second
    coarse = twisted_periods(bundle, path, zexp, point, derivs, path.nodes)
    fine = twisted_periods(bundle, path, zexp, point, derivs, 2 * path.nodes)
    return float(np.max(np.abs(fine - coarse))) / max(1.0, float(np.max(np.abs(fine))))


def perturbed_dual_structure(products: ProductData, factor: float = 1.05) -> ProductData:
    return ProductData(chart=products.chart, values=products.values, structure=products.structure,
                       dual_structure=factor * products.require_dual(), unit=products.unit, euler=products.euler,
                       euler_inverse=products.euler_inverse)
