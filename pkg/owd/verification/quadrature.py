"""
Adaptive Gauss-Legendre quadrature of complex integrands on a finite interval. Integrands are vectorized: they take
an array of nodes and return either one value per node or one row of values per node, in which case all components
are integrated together and a panel is refined until every component has converged.
"""
import logging
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np
from scipy.special import roots_legendre

from owd.exceptions import QuadratureError

_logger = logging.getLogger(__name__)

DEFAULT_NODES = 20
MAX_DEPTH = 30
ABSOLUTE_TOLERANCE = 1e-9

Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def legendre_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(nodes)
    return x, w


def gauss_legendre(f: Integrand, a: float, b: float, nodes: int = DEFAULT_NODES) -> np.ndarray:
    x, w = legendre_rule(nodes)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    values = np.asarray(f(mid + half * x), dtype=complex)
    return half * np.tensordot(w, values, axes=1)


def adaptive_gauss_legendre(f: Integrand, a: float = 0.0, b: float = 1.0, nodes: int = DEFAULT_NODES,
                            tolerance: float = ABSOLUTE_TOLERANCE,
                            max_depth: int = MAX_DEPTH) -> Union[complex, np.ndarray]:
    """
    integrates f over [a, b]; a panel is accepted when the rule on the panel agrees with the sum of the rules on its
    two halves, and the tolerance is halved at each bisection

    Raises:
        QuadratureError: a panel needs more than max_depth bisections
    """
    whole = gauss_legendre(f, a, b, nodes)
    total = np.zeros_like(whole)
    stack = [(a, b, whole, tolerance, 0)]
    panels = 0
    while stack:
        lo, hi, whole, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = gauss_legendre(f, lo, mid, nodes)
        right = gauss_legendre(f, mid, hi, nodes)
        if np.max(np.abs(left + right - whole)) <= tol:
            total = total + left + right
            panels += 1
            continue
        if depth >= max_depth:
            raise QuadratureError('no convergence on [{:.3e}, {:.3e}] after {} bisections'.format(lo, hi, depth))
        stack.append((lo, mid, left, 0.5 * tol, depth + 1))
        stack.append((mid, hi, right, 0.5 * tol, depth + 1))
    _logger.debug('quadrature on [%g, %g] accepted %d panels with %d nodes', a, b, panels, nodes)
    if total.ndim == 0:
        return complex(total)
    return total
