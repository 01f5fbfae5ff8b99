"""
Saito flat coordinates of the A_ell Hurwitz space.

Writing lambda = k**(ell+1) and inverting x(k) = k - 1/(ell+1) sum_a t_a k**(-a) + ...
gives polynomial flat coordinates t(a); reverting the same relation gives a(t)
in closed form. Both maps are built once per ell as Expressions.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

import numpy as np

from owd.exceptions import NonConvergenceError, TruncationError
from owd.symbolic import expression as ex
from owd.symbolic import series as sr

_logger = logging.getLogger(__name__)

MAX_ELL = 8
MAX_NEWTON_ITERATIONS = 50


def parameter_names(ell: int) -> Tuple[str, ...]:
    return tuple('a{}'.format(i) for i in range(1, ell + 1))


def flat_names(ell: int) -> Tuple[str, ...]:
    return tuple('v{}'.format(i) for i in range(1, ell + 1))


def recomposition_precision(ell: int) -> int:
    return 2 * (ell + 1) + 4


def _check_ell(ell: int):
    if not 1 <= ell <= MAX_ELL:
        raise TruncationError('flat coordinates are built for 1 <= ell <= {}, got {}'.format(MAX_ELL, ell))


@lru_cache(maxsize=None)
def flat_coordinate_expressions(ell: int) -> Tuple[ex.Expression, ...]:
    """t_1..t_ell as polynomials in a_1..a_ell"""
    _check_ell(ell)
    a = [ex.var(n) for n in parameter_names(ell)]
    lam = sr.polynomial_at_infinity([ex.ONE, 0] + a, 'x', ell + 2)
    x_of_k = sr.invert_branch(lam, ell + 1, ell + 1)
    return tuple(ex.mul(-(ell + 1), x_of_k.coefficient(alpha)) for alpha in range(1, ell + 1))


@lru_cache(maxsize=None)
def parameter_expressions(ell: int) -> Tuple[ex.Expression, ...]:
    """a_1..a_ell as polynomials in the flat coordinates v_1..v_ell"""
    _check_ell(ell)
    v = [ex.var(n) for n in flat_names(ell)]
    n_terms = ell + 2
    # sigma = 1/x as a series in rho = 1/k: rho / (1 - 1/(ell+1) sum_a v_a rho^(a+1))
    denominator = [ex.ONE, 0] + [ex.mul(-1.0 / (ell + 1), va) for va in v]
    inner = sr.LaurentSeries('_rho', 0j, 0, tuple(denominator), n_terms).inverse()
    sigma = sr.LaurentSeries('_rho', 0j, 1, inner.coefficients, n_terms + 1)
    rho = sr.lagrange_revert(sigma, '_sigma')
    ratio = sr.LaurentSeries('_sigma', 0j, 0, rho.coefficients, n_terms)
    lam = ratio ** (-(ell + 1))
    return tuple(lam.coefficient(i + 1) for i in range(1, ell + 1))


@lru_cache(maxsize=None)
def _flat_derivatives(ell: int):
    names = parameter_names(ell)
    t = flat_coordinate_expressions(ell)
    jacobian = [ex.gradient(ti, names) for ti in t]
    hessians = [ex.hessian(ti, names) for ti in t]
    return t, jacobian, hessians


def _point(names: Sequence[str], values) -> Dict[str, complex]:
    return {n: complex(v) for n, v in zip(names, values)}


def check_recomposition(ell: int, a_values) -> float:
    """
    |lambda(x(k)) - k**(ell+1)| coefficient error for the numeric branch inversion at a
    """
    precision = recomposition_precision(ell)
    coefficients = [1, 0] + [complex(v) for v in a_values]
    lam = sr.polynomial_at_infinity(coefficients, 'x', precision)
    x_of_k = sr.invert_branch(lam, ell + 1, lam.order - 1)
    sigma = x_of_k.inverse().with_variable('_rho', 0j)
    inner = sr.LaurentSeries('_sigma', 0j, -(ell + 1), lam.coefficients, lam.order)
    recomposed = inner.compose(sigma)
    error = 0.0
    for k in range(recomposed.valuation, recomposed.order):
        target = 1 if k == -(ell + 1) else 0
        error = max(error, abs(complex(recomposed.coefficient(k)) - target))
    return error


def flat_coords_A(ell: int, a_values) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    flat coordinates of the A_ell superpotential x**(ell+1) + a_1 x**(ell-1) + ... + a_ell

    Args:
        ell: rank, 1 <= ell <= 8
        a_values: the parameters a_1..a_ell

    Returns: (t, dt/da, d2t/da2) with shapes (ell,), (ell, ell), (ell, ell, ell)
    """
    t, jacobian, hessians = _flat_derivatives(ell)
    error = check_recomposition(ell, a_values)
    if error > 1e-10:
        raise TruncationError('branch inversion recomposes with error {:.3e}'.format(error))
    ev = ex.Evaluator(_point(parameter_names(ell), a_values))
    values = np.array([ev(ti) for ti in t], dtype=complex)
    jac = np.array([[ev(d) for d in row] for row in jacobian], dtype=complex)
    hess = np.array([[[ev(d) for d in row] for row in block] for block in hessians], dtype=complex)
    return values, jac, hess


def flat_values(ell: int, a_values) -> np.ndarray:
    ev = ex.Evaluator(_point(parameter_names(ell), a_values))
    return np.array([ev(ti) for ti in flat_coordinate_expressions(ell)], dtype=complex)


def invert_flat_map(ell: int, t_values, tolerance: float = 1e-13) -> np.ndarray:
    """
    solves t(a) = t_values by Newton iteration started at a = t
    """
    t, jacobian, _ = _flat_derivatives(ell)
    names = parameter_names(ell)
    target = np.array([complex(v) for v in t_values], dtype=complex)
    a = target.copy()
    scale = max(1.0, float(np.max(np.abs(target)))) if len(target) else 1.0
    for iteration in range(MAX_NEWTON_ITERATIONS):
        ev = ex.Evaluator(_point(names, a))
        residual = np.array([ev(ti) for ti in t], dtype=complex) - target
        if np.max(np.abs(residual)) < tolerance * scale:
            return a
        jac = np.array([[ev(d) for d in row] for row in jacobian], dtype=complex)
        a = a - np.linalg.solve(jac, residual)
        _logger.debug('flat-coordinate Newton step %d residual %.3e', iteration, np.max(np.abs(residual)))
    raise NonConvergenceError('flat coordinate inversion did not converge in {} iterations'.format(
        MAX_NEWTON_ITERATIONS))


def varpi_coefficients(ell: int) -> Dict[Tuple[int, ...], Fraction]:
    """
    coefficient of v_1^k_1 ... v_ell^k_ell in the integration constant of the A_ell extended prepotential:
    (k_1 + ... + k_ell - 2)! / ((ell + 1) k_1! ... k_ell!) when sum_a (a + 1) k_a = ell + 2
    """
    out = {}

    def walk(index: int, remaining: int, exponents: List[int]):
        if index > ell:
            if remaining == 0:
                total = sum(exponents)
                if total < 2:
                    return
                denominator = ell + 1
                for k in exponents:
                    denominator *= factorial(k)
                out[tuple(exponents)] = Fraction(factorial(total - 2), denominator)
            return
        weight = index + 1
        for k in range(remaining // weight + 1):
            walk(index + 1, remaining - k * weight, exponents + [k])

    walk(1, ell + 2, [])
    return out
