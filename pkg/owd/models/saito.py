"""
Primal models of the simple singularities: the Saito A_ell and D_ell Frobenius manifolds with their extended
prepotentials, and the foldings of A_m to B_ell and I_2(ell).
"""
import logging
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from owd.exceptions import ParameterError
from owd.frobenius import flat_coordinates as fc
from owd.frobenius.geometry import polynomial_roots
from owd.models.bundle import Folding, ModelBundle, ParameterChart
from owd.symbolic import expression as ex

_logger = logging.getLogger(__name__)

MAX_D_RANK = 8


def build_varpi_a(ell: int) -> ex.Expression:
    """integration constant of the A_ell extended prepotential as a polynomial in v_1..v_ell"""
    v = [ex.var(n) for n in fc.flat_names(ell)]
    terms = []
    for exponents, coefficient in sorted(fc.varpi_coefficients(ell).items()):
        factors = [float(coefficient)] + [ex.power(v[i], k) for i, k in enumerate(exponents) if k]
        terms.append(ex.mul(*factors))
    return ex.add(*terms)


def format_varpi(ell: int) -> str:
    terms = []
    for exponents, coefficient in sorted(fc.varpi_coefficients(ell).items()):
        monomial = '*'.join('v{}'.format(i + 1) if k == 1 else 'v{}^{}'.format(i + 1, k)
                            for i, k in enumerate(exponents) if k)
        terms.append('{} {}'.format(coefficient, monomial))
    return '\n'.join(terms) if terms else '0'


def _polynomial(x: ex.Expression, ell: int, a: Sequence[ex.Expression]) -> ex.Expression:
    terms = [ex.power(x, ell + 1)]
    for alpha, a_alpha in enumerate(a, start=1):
        terms.append(ex.mul(a_alpha, ex.power(x, ell - alpha)))
    return ex.add(*terms)


def _primitive(x: ex.Expression, ell: int, a: Sequence[ex.Expression]) -> ex.Expression:
    terms = [ex.mul(1.0 / (ell + 2), ex.power(x, ell + 2))]
    for alpha, a_alpha in enumerate(a, start=1):
        terms.append(ex.mul(1.0 / (ell + 1 - alpha), a_alpha, ex.power(x, ell + 1 - alpha)))
    return ex.add(*terms)


def _a_locator(ell: int):
    names = fc.flat_names(ell)
    expressions = fc.parameter_expressions(ell)

    def locate(point: Mapping[str, complex]):
        ev = ex.Evaluator({n: point[n] for n in names})
        a = [ev(e) for e in expressions]
        # lambda' = (ell+1) x^ell + (ell-1) a_1 x^(ell-2) + ... + a_(ell-1)
        coefficients = [ell + 1, 0] + [(ell - alpha) * a[alpha - 1] for alpha in range(1, ell)]
        return polynomial_roots(coefficients[:ell + 1])

    return locate


def _parameter_chart(ell: int) -> ParameterChart:
    a_names = fc.parameter_names(ell)
    v_names = fc.flat_names(ell)
    expressions = fc.parameter_expressions(ell)
    x = ex.var('x')

    def to_parameters(point: Mapping[str, complex]) -> Dict[str, complex]:
        ev = ex.Evaluator({n: point[n] for n in v_names})
        return {a: ev(e) for a, e in zip(a_names, expressions)}

    def to_flat(point: Mapping[str, complex]) -> Dict[str, complex]:
        values = fc.flat_values(ell, [point[n] for n in a_names])
        return dict(zip(v_names, values))

    lam = _polynomial(x, ell, [ex.var(n) for n in a_names])
    return ParameterChart(names=a_names, superpotential=lam, to_parameters=to_parameters, to_flat=to_flat)


def build_saito_a(ell: int, varpi: Optional[ex.Expression] = None) -> ModelBundle:
    """
    Saito A_ell model in the flat chart v_1..v_ell.

    Args:
        ell: rank, 1 <= ell <= 8
        varpi: replacement for the integration constant of Omega; used for negative controls

    Returns: ModelBundle with lambda = x^(ell+1) + a_1(v) x^(ell-1) + ... + a_ell(v)
    """
    if not 1 <= ell <= fc.MAX_ELL:
        raise ParameterError('saito-a needs 1 <= ell <= {}, got {}'.format(fc.MAX_ELL, ell))
    x = ex.var('x')
    names = fc.flat_names(ell)
    a = fc.parameter_expressions(ell)
    h = ell + 1
    lam = _polynomial(x, ell, a)
    constant = build_varpi_a(ell) if varpi is None else varpi
    omega = ex.add(_primitive(x, ell, a), constant)
    euler = ex.VectorField.from_mapping({n: ex.mul((alpha + 1.0) / h, ex.var(n)) for alpha, n in enumerate(names, 1)})
    eventual = ex.VectorField(euler.components + (('x', ex.mul(1.0 / h, x)),))
    params = {'ell': ell}
    if varpi is not None:
        params['varpi'] = 'override'
    return ModelBundle(family='saito-a', params=params, chart=names, superpotential=lam, prepotential=omega,
                       euler=euler, eventual_identity=eventual, charge=1 - 2.0 / h, shift=0.0, dual=False,
                       locator=_a_locator(ell), special_points=lambda point: (),
                       parameter_chart=_parameter_chart(ell), metadata={'coxeter_number': h})


def d_weights(ell: int):
    """degrees of a_1..a_ell in units where deg z = 2: a_i has degree 2i for i < ell and a_ell has degree ell"""
    return tuple([2 * i for i in range(1, ell)] + [ell])


def build_saito_d(ell: int) -> ModelBundle:
    """
    Saito D_ell model in the non-flat chart a_1..a_ell, written in x with x^2 = 2z so that omega = dx
    """
    if ell < 3 or ell > MAX_D_RANK:
        raise ParameterError('saito-d needs 3 <= ell <= {}, got {}'.format(MAX_D_RANK, ell))
    if ell == 3:
        _logger.warning('saito-d with ell = 3 coincides with A_3 in a different chart; ell >= 4 is the usual range')
    x = ex.var('x')
    names = tuple('a{}'.format(i) for i in range(1, ell + 1))
    a = [ex.ONE] + [ex.var(n) for n in names]
    h = 2 * (ell - 1)
    lam_terms, omega_terms = [], []
    for i in range(ell):
        degree = 2 * (ell - 1 - i)
        scale = 1.0 / 2 ** (ell - 1 - i)
        lam_terms.append(ex.mul(scale, a[i], ex.power(x, degree)))
        omega_terms.append(ex.mul(scale / (degree + 1), a[i], ex.power(x, degree + 1)))
    lam_terms.append(ex.mul(-0.5, ex.power(a[ell], 2), ex.power(x, -2)))
    omega_terms.append(ex.mul(0.5, ex.power(a[ell], 2), ex.power(x, -1)))
    lam = ex.add(*lam_terms)
    omega = ex.add(*omega_terms)
    weights = d_weights(ell)
    euler = ex.VectorField.from_mapping({n: ex.mul(float(w) / h, ex.var(n)) for n, w in zip(names, weights)})
    eventual = ex.VectorField(euler.components + (('x', ex.mul(1.0 / h, x)),))

    def locate(point: Mapping[str, complex]):
        values = [1.0] + [complex(point[n]) for n in names]
        # x^3 lambda' = sum_i 2(ell-1-i) a_i / 2^(ell-1-i) x^(2(ell-1-i)+2) + a_ell^2
        coefficients = np.zeros(2 * ell + 1, dtype=complex)
        for i in range(ell - 1):
            degree = 2 * (ell - 1 - i)
            coefficients[2 * ell - (degree + 2)] = degree * values[i] / 2 ** (ell - 1 - i)
        coefficients[-1] = values[ell] ** 2
        return polynomial_roots(coefficients)

    return ModelBundle(family='saito-d', params={'ell': ell}, chart=names, superpotential=lam, prepotential=omega,
                       euler=euler, eventual_identity=eventual, charge=1 - 2.0 / h, shift=0.0, dual=False,
                       locator=locate, special_points=lambda point: (0j,), sheet_involution=lambda q: -q,
                       flat=False, metadata={'coxeter_number': h, 'weights': weights})


FOLD_RULES = {
    # B_ell from A_(2 ell - 1): (v1, 0, v2, 0, ..., v_ell)
    'fold-b': (lambda ell: 2 * ell - 1, lambda ell: tuple(range(0, 2 * ell - 1, 2))),
    # I_2(ell) from A_(ell - 1): (v1, 0, ..., 0, v2)
    'fold-i2': (lambda ell: ell - 1, lambda ell: (0, ell - 2)),
}


def fold(source: ModelBundle, rule: str, ell: int) -> ModelBundle:
    """
    restricts an A_m model to the fixed locus of a folding: Omega_folded(x, v) = Omega_source(x, embed(v))
    """
    if rule not in FOLD_RULES:
        raise ParameterError('unknown folding {}'.format(rule))
    rank_of, embedding_of = FOLD_RULES[rule]
    if rule == 'fold-b' and ell < 2 or rule == 'fold-i2' and ell < 3:
        raise ParameterError('{} is not defined for ell = {}'.format(rule, ell))
    if source.family != 'saito-a' or source.dimension != rank_of(ell):
        raise ParameterError('{} with ell = {} folds A_{}, got {}'.format(rule, ell, rank_of(ell), source.label))
    embedding = embedding_of(ell)
    folding = Folding(rule=rule, source=source, embedding=embedding)
    names = folding.names
    mapping = {n: 0 for n in source.chart}
    for name, index in zip(names, embedding):
        mapping[source.chart[index]] = ex.var(name)
    h = source.metadata['coxeter_number']
    euler = ex.VectorField.from_mapping({n: ex.mul((index + 2.0) / h, ex.var(n)) for n, index in zip(names, embedding)})
    x = ex.var('x')
    eventual = ex.VectorField(euler.components + (('x', ex.mul(1.0 / h, x)),))

    def locate(point: Mapping[str, complex]):
        return source.locator(folding.source_point(point))

    return ModelBundle(family=rule, params={'ell': ell}, chart=names,
                       superpotential=ex.substitute(source.superpotential, mapping),
                       prepotential=ex.substitute(source.prepotential, mapping), euler=euler,
                       eventual_identity=eventual, charge=source.charge, shift=0.0, dual=False, locator=locate,
                       special_points=lambda point: (), folding=folding,
                       metadata={'coxeter_number': h, 'source': source.label})
