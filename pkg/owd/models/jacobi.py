"""
Almost-dual model on the orbit space of the Jacobi group of type A_ell: a genus-one superpotential built from
Jacobi's theta function, with extended prepotential written through elliptic dilogarithms.
"""
import logging
import math
from typing import Mapping

import numpy as np

from owd.exceptions import ParameterError
from owd.frobenius.geometry import torus_critical_points
from owd.models.bundle import ModelBundle, SamplingHints
from owd.symbolic import expression as ex

_logger = logging.getLogger(__name__)

MIN_IMAG_TAU = 0.2
W_RANGE = (0.15, 0.35)


def _phi3(arg: ex.Expression, tau: ex.Expression) -> ex.Expression:
    return ex.add(ex.elliptic_li(3, arg, tau), ex.negate(ex.elliptic_li(3, 0, tau)))


def intersection_form(ell: int) -> np.ndarray:
    """
    g^ab = pi^-2 (G + [[0, 1], [1, 0]]) in the chart (w_1..w_ell, u, tau), G_ab = 1/(ell+1) - delta_ab; pi^2 times the
    residue pairing of dx, and the normalization in which the u-derivatives of F* are 2 pi i g
    """
    size = ell + 2
    form = np.zeros((size, size))
    form[:ell, :ell] = np.full((ell, ell), 1.0 / (ell + 1)) - np.eye(ell)
    form[ell, ell + 1] = form[ell + 1, ell] = 1.0
    return form / math.pi ** 2


def build_jacobi_a(ell: int, tau: complex = 1j) -> ModelBundle:
    """
    lambda = e^(2 pi i u) theta_1(x + wbar) prod_a theta_1(x - w_a) / theta_1(x)^(ell+1) on C / (Z + tau Z), with
    chart (w_1..w_ell, u, tau); tau is held at the given value when sampling
    """
    tau = complex(tau)
    if ell < 1 or ell > 4:
        raise ParameterError('jacobi-a needs 1 <= ell <= 4, got {}'.format(ell))
    if tau.imag < MIN_IMAG_TAU:
        raise ParameterError('jacobi-a needs Im tau >= {}, got {}'.format(MIN_IMAG_TAU, tau))
    x = ex.var('x')
    t = ex.var('tau')
    u = ex.var('u')
    w_names = tuple('w{}'.format(i) for i in range(1, ell + 1))
    w = [ex.var(n) for n in w_names]
    wbar = ex.add(*w)
    # zeros with multiplicities; the pole of order ell+1 sits at the origin
    shifts = [(ex.negate(wbar), 1)] + [(wa, 1) for wa in w] + [(ex.ZERO, -(ell + 1))]
    two_pi_i = 2j * math.pi
    lam = ex.mul(ex.exp(ex.mul(two_pi_i, u)),
                 *[ex.power(ex.theta1(0, ex.add(x, ex.negate(z)), t), k) for z, k in shifts])
    dilogs = [ex.mul(k, ex.add(ex.elliptic_li(2, ex.add(x, ex.negate(z)), t),
                               ex.negate(ex.elliptic_li(2, ex.negate(z), t)))) for z, k in shifts]
    omega = ex.add(ex.mul(two_pi_i, u, x), ex.mul(1j / (2 * math.pi), ex.add(*dilogs)))

    vector = [ex.negate(wbar)] + w
    root_terms = [_phi3(ex.add(vi, ex.negate(vj)), t) for i, vi in enumerate(vector) for j, vj in enumerate(vector)
                  if i != j]
    quadratic = ex.add(ex.mul(t, u), ex.negate(ex.power(wbar, 2)), *[ex.negate(ex.power(wa, 2)) for wa in w])
    # F*_uab = 2 pi i g_ab fixes the weight of the quadratic part against the root terms
    dual_prepotential = ex.add(ex.mul(two_pi_i * 0.5 * math.pi ** 2, u, quadratic),
                               ex.mul(-0.125, ex.add(*root_terms)),
                               ex.mul(0.25 * (ell + 1), ex.add(*[_phi3(vi, t) for vi in vector])))

    chart = w_names + ('u', 'tau')
    euler = ex.VectorField.from_mapping({'u': 1 / two_pi_i})
    for e in (lam, ex.differentiate(lam, 'x')):
        if ex.max_theta_order(e) > ex.MAX_THETA_ORDER:
            raise ParameterError('theta derivative order exceeds {}'.format(ex.MAX_THETA_ORDER))

    critical = ex.differentiate(ex.differentiate(omega, 'x'), 'x')
    critical_derivative = ex.differentiate(critical, 'x')

    def special(point: Mapping[str, complex]):
        values = [complex(point[n]) for n in w_names]
        return [-sum(values)] + values + [0j]

    def locate(point: Mapping[str, complex]):
        return torus_critical_points(critical, critical_derivative, 'x', point, (1, complex(point['tau'])), ell + 2)

    hints = SamplingHints(ranges=tuple((n, W_RANGE[0], W_RANGE[1]) for n in w_names + ('u',)),
                          fixed=(('tau', tau),), fibre='torus')
    return ModelBundle(family='jacobi-a', params={'ell': ell, 'tau': tau}, chart=chart, superpotential=lam,
                       prepotential=omega, euler=euler, eventual_identity=euler, charge=1.0, shift=0.0, dual=True,
                       locator=locate, special_points=special, dual_prepotential=dual_prepotential,
                       intersection_form=intersection_form(ell), intersection_scale=math.pi ** 2, prepotential_sign=1,
                       periods=(1 + 0j, tau), sampling=hints)
