"""
Almost-dual models in the flat coordinates of the intersection form: type-A Saito, Dubrovin-Zhang and the
(generalized) Ma-Zuo extended affine Weyl orbit spaces.
"""
import cmath
import itertools
import logging
import math
from typing import Mapping, Sequence, Tuple

import numpy as np

from owd.exceptions import ParameterError
from owd.frobenius.geometry import logarithmic_critical_points
from owd.models.bundle import ModelBundle, SamplingHints
from owd.symbolic import expression as ex

_logger = logging.getLogger(__name__)

CYLINDER = (2j * math.pi,)


def _names(prefix: str, count: int) -> Tuple[str, ...]:
    return tuple('{}{}'.format(prefix, i) for i in range(1, count + 1))


def build_dual_saito_a(ell: int, varpi=None) -> ModelBundle:
    """
    lambda = (x + wbar)(x - w_1)...(x - w_ell) with wbar = w_1 + ... + w_ell and
    Omega = (x + wbar) log(x + wbar) + sum_a (x - w_a) log(x - w_a) + varpi, varpi = 0
    """
    if not 1 <= ell <= 8:
        raise ParameterError('dual-saito-a needs 1 <= ell <= 8, got {}'.format(ell))
    x = ex.var('x')
    names = _names('w', ell)
    w = [ex.var(n) for n in names]
    wbar = ex.add(*w)
    factors = [ex.add(x, wbar)] + [ex.add(x, ex.negate(wa)) for wa in w]
    lam = ex.mul(*factors)
    omega = ex.add(*[ex.mul(f, ex.log(f)) for f in factors])
    if varpi is not None:
        omega = ex.add(omega, varpi)
    differences = [ex.add(wa, ex.negate(wb)) for wa, wb in itertools.combinations(w, 2)]
    sums = [ex.add(wa, wbar) for wa in w]
    dual_prepotential = ex.add(*[ex.mul(0.5, ex.power(d, 2), ex.log(d)) for d in differences + sums])
    h = ell + 1
    euler = ex.VectorField.from_mapping({n: ex.mul(1.0 / h, wi) for n, wi in zip(names, w)})
    eventual = ex.VectorField(euler.components + (('x', ex.mul(1.0 / h, x)),))

    def zeros(point: Mapping[str, complex]):
        values = [complex(point[n]) for n in names]
        return [-sum(values)] + values

    def locate(point: Mapping[str, complex]):
        return logarithmic_critical_points([(z, 1) for z in zeros(point)])

    params = {'ell': ell}
    if varpi is not None:
        params['varpi'] = 'override'
    return ModelBundle(family='dual-saito-a', params=params, chart=names, superpotential=lam, prepotential=omega,
                       euler=euler, eventual_identity=eventual, charge=1 - 2.0 / h, shift=0.0, dual=True,
                       locator=locate, special_points=zeros, dual_prepotential=dual_prepotential)


def _trigonometric(family: str, params: dict, r: int, n: int, ks: Sequence[int], pole_names: Sequence[str],
                   varpi=None) -> ModelBundle:
    """
    lambda = e^(-r x) prod_a (e^x - e^(w_a)) / prod_mu (e^x - e^(u_mu))^(k_mu), omega = -dx
    """
    ell = n - r - sum(ks)
    if r < 1 or ell < 1:
        raise ParameterError('{} needs r >= 1 and n > r + sum(k), got r={}, n={}, k={}'.format(
            family, r, n, list(ks)))
    x = ex.var('x')
    w_names = _names('w', n)
    w = [ex.var(nm) for nm in w_names]
    u = [ex.var(nm) for nm in pole_names]
    ex_x = ex.exp(x)
    numerator = [ex.add(ex_x, ex.negate(ex.exp(wa))) for wa in w]
    denominator = [ex.power(ex.add(ex_x, ex.negate(ex.exp(um))), -k) for um, k in zip(u, ks)]
    lam = ex.mul(ex.exp(ex.mul(-r, x)), *numerator, *denominator)
    linear = ex.add(*w, *[ex.mul(-k, um) for um, k in zip(u, ks)])
    if varpi is None:
        varpi = ex.mul(0.5, ex.add(*[ex.power(wa, 2) for wa in w],
                                   *[ex.mul(-k, ex.power(um, 2)) for um, k in zip(u, ks)]))
    omega = ex.add(ex.mul(0.5 * r, ex.power(x, 2)), varpi, ex.negate(ex.mul(x, linear)),
                   *[ex.li2(ex.exp(ex.add(x, ex.negate(wa)))) for wa in w],
                   *[ex.mul(-k, ex.li2(ex.exp(ex.add(x, ex.negate(um))))) for um, k in zip(u, ks)])
    chart = w_names + tuple(pole_names)
    euler = ex.VectorField.from_mapping({nm: 1.0 / ell for nm in chart})
    eventual = ex.VectorField(euler.components + (('x', ex.const(1.0 / ell)),))

    def special(point: Mapping[str, complex]):
        return [complex(point[nm]) for nm in chart]

    def locate(point: Mapping[str, complex]):
        poles = [(cmath.exp(point[nm]), 1) for nm in w_names]
        poles += [(cmath.exp(point[nm]), -k) for nm, k in zip(pole_names, ks)]
        return logarithmic_critical_points(poles, constant=-r, exponential=True)

    return ModelBundle(family=family, params=params, chart=chart, superpotential=lam, prepotential=omega,
                       euler=euler, eventual_identity=eventual, charge=1.0, shift=1.0 / ell, dual=True,
                       locator=locate, special_points=special, omega_scale=-1,
                       dual_prepotential=_trigonometric_prepotential(w, u, ks, r, ell),
                       intersection_form=intersection_form(ell, n, ks) if len(ks) <= 1 else None,
                       periods=CYLINDER, sampling=SamplingHints(), metadata={'ell': ell})


def intersection_form(ell: int, n: int, ks: Sequence[int]) -> np.ndarray:
    """g^ab = 1/ell - delta_ab / k_a with k = 1 on the zeros w_a and k = -k_mu on the poles u_mu"""
    multiplicities = [1.0] * n + [-float(k) for k in ks]
    size = len(multiplicities)
    return np.full((size, size), 1.0 / ell) - np.diag([1.0 / k for k in multiplicities])


def _trigonometric_prepotential(w, u, ks, r: int, ell: int):
    """
    F* for m <= 1 poles, None otherwise; its third derivatives are minus the intersection form applied to the dual
    product (prepotential_sign = -1)
    """
    if len(u) > 1:
        return None
    pairs = list(itertools.combinations(w, 2))
    triples = list(itertools.combinations(w, 3))
    terms = []
    for wa, wb in pairs:
        d = ex.add(wa, ex.negate(wb))
        terms.append(ex.mul(-0.5, ex.add(ex.li3(ex.exp(d)), ex.li3(ex.exp(ex.negate(d))))))
        terms.append(ex.mul(0.25 * (1 - 2.0 / r), wa, wb, ex.add(wa, wb)))
    terms.append(ex.mul(-1.0 / r, ex.add(*[ex.mul(a, b, c) for a, b, c in triples])))
    cubes = ex.add(*[ex.power(wa, 3) for wa in w])
    if not u:
        terms.append(ex.mul((3 + ell - r - 2.0 / r) / 12, cubes))
        return ex.add(*terms)
    um, k = u[0], ks[0]
    for wa in w:
        d = ex.add(um, ex.negate(wa))
        terms.append(ex.mul(0.5 * k, ex.add(ex.li3(ex.exp(d)), ex.li3(ex.exp(ex.negate(d))))))
    wsum = ex.add(*w)
    terms.append(ex.mul(k * (3 * k + r - ell + 2.0 * k ** 2 / r) / 12, ex.power(um, 3)))
    terms.append(ex.mul((3 - r + ell - 2.0 / r) / 12, cubes))
    terms.append(ex.mul(-0.25 * k * (1 + 2.0 * k / r), ex.power(um, 2), wsum))
    terms.append(ex.mul(-0.25 * k * (1 - 2.0 / r), um, ex.add(*[ex.power(wa, 2) for wa in w])))
    terms.append(ex.mul(float(k) / r, um, ex.add(*[ex.mul(a, b) for a, b in pairs])))
    return ex.add(*terms)


def build_dz_a(ell: int, r: int, varpi=None) -> ModelBundle:
    """Dubrovin-Zhang model on the orbit space of the extended affine Weyl group of A_(ell+r-1)"""
    if ell < 1 or r < 1:
        raise ParameterError('dz-a needs ell, r >= 1, got ell={}, r={}'.format(ell, r))
    params = {'ell': ell, 'r': r}
    if varpi is not None:
        params['varpi'] = 'override'
    return _trigonometric('dz-a', params, r, ell + r, (), (), varpi)


def build_ma_zuo(ell: int = None, r: int = None, k: int = None, n: int = None, ks: Sequence[int] = None,
                 varpi=None) -> ModelBundle:
    """
    Ma-Zuo model, either in the (ell, r, k) form with one pole u or in the generalized form with n zeros and poles
    u_1..u_m of orders ks
    """
    if ks is not None:
        if n is None or r is None or ell is not None or k is not None:
            raise ParameterError('generalized ma-zuo takes n, r and ks')
        ks = tuple(int(v) for v in ks)
        if any(v < 1 for v in ks):
            raise ParameterError('pole orders must be positive, got {}'.format(list(ks)))
        names = _names('u', len(ks))
        params = {'n': n, 'r': r, 'ks': list(ks)}
        return _trigonometric('ma-zuo', params, r, n, ks, names, varpi)
    if None in (ell, r, k) or n is not None:
        raise ParameterError('ma-zuo takes either ell, r, k or n, r, ks')
    if k < 1:
        raise ParameterError('ma-zuo needs k >= 1, got {}'.format(k))
    return _trigonometric('ma-zuo', {'ell': ell, 'r': r, 'k': k}, r, ell + r + k, (k,), ('u',), varpi)
