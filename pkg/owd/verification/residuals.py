"""
Residuals of the identities satisfied by a Landau-Ginzburg model and its extension: closed and open WDVV, the
functions K_ab, quasi-homogeneity, the eventual identity and the extended products. Every function returns a
non-negative float (or a tuple of them) that vanishes when the identity holds. Residuals are scaled: the largest
absolute defect is divided by the size of the terms entering it whenever those are larger than one, and reported
as is otherwise.
"""
import cmath
import dataclasses
import math
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from owd.frobenius.geometry import (CanonicalFrame, ProductData, TangentData, critical_value_jacobian, eta_residue,
                                    g_residue)
from owd.symbolic import expression as ex
from owd.verification import algebra

AUXILIARY_SECOND_FAMILY = 1e-10
AUXILIARY_CURVATURE = 1e-3


def _scaled(difference, *terms) -> float:
    """max |difference| divided by max(1, max |term|): absolute for terms of size up to one, relative beyond"""
    scale = max([1.0] + [float(np.max(np.abs(t), initial=0.0)) for t in terms])
    return float(np.max(np.abs(difference), initial=0.0)) / scale


def _values(ev: ex.Evaluator, expressions) -> np.ndarray:
    if isinstance(expressions, (list, tuple)):
        return np.array([_values(ev, e) for e in expressions], dtype=complex)
    return np.asarray(ev(expressions), dtype=complex)


def closed_wdvv_residual(td: TangentData) -> float:
    """associativity of the tensor c over the metric: c_abm eta^mn c_ngd symmetric in b <-> g"""
    A = np.einsum('abm,mn,ngd->abgd', td.tensor, td.inverse_metric, td.tensor)
    return _scaled(A - A.transpose(0, 2, 1, 3), A)


def perturbed_tensor(td: TangentData, delta: float = 0.1) -> TangentData:
    tensor = td.tensor.copy()
    tensor[0, 0, 0] += delta
    return TangentData.from_tensors(td.chart, td.metric, tensor)


def omega_x_residual(bundle, point: Mapping[str, complex], xs: Sequence[complex]) -> float:
    """
    Omega_x / a against lambda (primal) or log lambda (dual); in the dual case the difference must be a constant
    modulo 2 pi i, so the spread of the differences is measured
    """
    if not bundle.dual:
        worst = 0.0
        for x in xs:
            ev = ex.Evaluator(bundle.point(point, x))
            lam = ev(bundle.superpotential)
            worst = max(worst, abs(ev(bundle.fibre_derivative) - lam) / max(1.0, abs(lam)))
        return worst
    deltas = []
    for x in xs:
        ev = ex.Evaluator(bundle.point(point, x))
        deltas.append(ev(bundle.fibre_derivative) - cmath.log(ev(bundle.superpotential)))
    worst = 0.0
    for d in deltas[1:]:
        shift = d - deltas[0]
        turns = round(shift.imag / (2 * math.pi))
        worst = max(worst, abs(shift - 2j * math.pi * turns))
    return worst


def structure_of(bundle, products: ProductData) -> np.ndarray:
    return products.require_dual() if bundle.dual else products.structure


def open_wdvv_residual(bundle, point: Mapping[str, complex], x: complex, products: ProductData,
                       structure: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    r1: c^a_mn Omega_ar + Omega_mn Omega'_r symmetric under m <-> r
    r2: c^a_mn Omega'_a + Omega'' Omega_mn - Omega'_m Omega'_n
    with ' the derivative along the flat fibre coordinate a x; `structure` replaces the residue structure constants
    (the dual product read off F*, say)
    """
    ev = ex.Evaluator(bundle.point(point, x))
    hessian = _values(ev, bundle.omega_hessian)
    slopes = _values(ev, list(bundle.fibre_gradient))
    curvature = ev(bundle.fibre_second)
    c = structure_of(bundle, products) if structure is None else structure
    T = np.einsum('amn,ar->mnr', c, hessian) + np.einsum('mn,r->mnr', hessian, slopes)
    r1 = _scaled(T - T.transpose(2, 1, 0), T)
    outer = np.outer(slopes, slopes)
    S = np.einsum('amn,a->mn', c, slopes) + curvature * hessian - outer
    r2 = _scaled(S, outer, curvature * hessian)
    return r1, r2


def first_family_where_implied(r1s: Sequence[float], r2s: Sequence[float], curvatures: Sequence[float],
                               second: float = AUXILIARY_SECOND_FAMILY,
                               curvature: float = AUXILIARY_CURVATURE) -> float:
    """
    largest r1 over the fibre points where the second family holds (r2 < `second`) and |Omega''| > `curvature`: there
    the first family follows from the second, so the value must vanish; zero when no point qualifies
    """
    implied = [r1 for r1, r2, k in zip(r1s, r2s, curvatures) if r2 < second and k > curvature]
    return max(implied, default=0.0)


def auxiliary_extension_residual(bundle, point: Mapping[str, complex], xs: Sequence[complex],
                                 values: Sequence[Tuple[float, float]]) -> float:
    """first_family_where_implied over the fibre points xs, given their (r1, r2) pairs"""
    curvatures = [abs(ex.evaluate(bundle.fibre_second, bundle.point(point, x))) for x in xs]
    return first_family_where_implied([v[0] for v in values], [v[1] for v in values], curvatures)


@lru_cache(maxsize=None)
def _kab_expressions(bundle, fibre: ex.Expression):
    x = bundle.variable
    first = [ex.differentiate(fibre, n) for n in bundle.chart]
    second = [[ex.differentiate(f, n) for n in bundle.chart] for f in first]
    mixed = [ex.differentiate(f, x) for f in first]
    slope = ex.differentiate(fibre, x)
    return first, second, mixed, slope, ex.differentiate(slope, x)


def spurious_fibre(bundle) -> ex.Expression:
    """fibre derivative of Omega + x v_1, with v_1 the first chart coordinate"""
    return ex.add(bundle.fibre_derivative, ex.mul(1.0 / bundle.omega_scale, ex.var(bundle.chart[0])))


def kab_values(bundle, point: Mapping[str, complex], xs: Sequence[complex], products: ProductData,
               fibre: Optional[ex.Expression] = None) -> np.ndarray:
    """
    K_ab(x) = L_ab - d/dx [(L_a L_b - c*^d_ab L_d) / L'] for a <= b, with L = log lambda; one row per x
    """
    fibre = bundle.fibre_derivative if fibre is None else fibre
    first, second, mixed, slope, curvature = _kab_expressions(bundle, fibre)
    c = products.require_dual()
    upper = np.triu_indices(bundle.dimension)
    rows = []
    for x in xs:
        ev = ex.Evaluator(bundle.point(point, x))
        L1 = _values(ev, first)
        L2 = _values(ev, second)
        L1x = _values(ev, mixed)
        Lx, Lxx = ev(slope), ev(curvature)
        N = np.outer(L1, L1) - np.einsum('dab,d->ab', c, L1)
        Nx = np.outer(L1x, L1) + np.outer(L1, L1x) - np.einsum('dab,d->ab', c, L1x)
        K = L2 - (Nx * Lx - N * Lxx) / Lx ** 2
        rows.append(K[upper])
    return np.array(rows)


def kab_constancy(bundle, point: Mapping[str, complex], xs: Sequence[complex], products: ProductData,
                  fibre: Optional[ex.Expression] = None) -> Tuple[float, float]:
    """(largest spread of K_ab over xs, largest |mean K_ab|)"""
    K = kab_values(bundle, point, xs, products, fibre)
    return float(np.max(np.std(K, axis=0))), float(np.max(np.abs(np.mean(K, axis=0))))


def homogeneity_factor(bundle) -> float:
    if bundle.dual:
        return (1 - bundle.charge) / 2
    return (3 - bundle.charge) / 2


@lru_cache(maxsize=None)
def _homogeneity_expressions(bundle):
    names = tuple(bundle.chart) + (bundle.variable,)
    lie_lambda = ex.lie_derivative(bundle.euler, bundle.superpotential)
    lie_omega = ex.lie_derivative(bundle.eventual_identity, bundle.prepotential)
    return lie_lambda, ex.hessian(lie_omega, names), ex.hessian(bundle.prepotential, names)


def homogeneity_residual(bundle, point: Mapping[str, complex], x: complex) -> Tuple[float, float]:
    """
    h_lambda = |Lie_E lambda - lambda + ((1-d)x/2 + d0) lambda'|
    h_omega  = second derivatives in (t, x) of Lie_E Omega - k Omega, k = (3-d)/2 or (1-d)/2 for dual models
    """
    p = bundle.point(point, x)
    ev = ex.Evaluator(p)
    lie_lambda, lie_hessian, hessian = _homogeneity_expressions(bundle)
    lam = ev(bundle.superpotential)
    h_lambda = abs(ev(lie_lambda) - lam + bundle.fibre_shift(p) * ev(bundle.lambda_x)) / max(1.0, abs(lam))
    H_lie = _values(ev, lie_hessian)
    H = _values(ev, hessian)
    k = homogeneity_factor(bundle)
    return h_lambda, _scaled(H_lie - k * H, H_lie, k * H)


def with_charge(bundle, delta: float):
    return dataclasses.replace(bundle, charge=bundle.charge + delta)


def without_fibre_shift(bundle):
    return dataclasses.replace(bundle, eventual_identity=bundle.eventual_identity.without(bundle.variable))


def eventual_identity_residuals(bundle, point: Mapping[str, complex], x: complex,
                                products: ProductData) -> Tuple[float, float]:
    """
    e1: Lie of the stored eventual identity on lambda against lambda, and the stored vertical component against
        (lambda - Lie_E lambda) / lambda'
    e2: Lie of E^-1 + (1/lambda - Lie_(E^-1) lambda)/lambda' d/dx on lambda against 1/lambda, and its extended
        product with the eventual identity against the unit
    """
    p = bundle.point(point, x)
    ev = ex.Evaluator(p)
    jet = algebra.fibre_jet(bundle, p, ev)
    stored = algebra.stored_eventual_identity(bundle, p, ev)
    rebuilt = algebra.eventual_identity(bundle, p, jet)
    lam = jet.value
    e1 = max(abs(jet.lie(stored.base) + stored.fibre * jet.slope - lam) / max(1.0, abs(lam)),
             algebra.defect(stored, rebuilt))
    inverse = algebra.eventual_inverse(products, jet)
    lie_inverse = jet.lie(inverse.base) + inverse.fibre * jet.slope
    product = algebra.extended_product(jet, products, stored, inverse)
    e2 = max(abs(lie_inverse - 1 / lam) / max(1.0, abs(1 / lam)), algebra.defect(product, algebra.unit(products)))
    return e1, e2


def extended_product_defect(bundle, point: Mapping[str, complex], x: complex, products: ProductData,
                            rng: np.random.Generator) -> float:
    """
    associativity of both extended products on random vectors with random vertical parts, e as unit of the
    extended product and the eventual identity as unit of the extended dual product
    """
    p = bundle.point(point, x)
    ev = ex.Evaluator(p)
    jet = algebra.fibre_jet(bundle, p, ev)
    X, Y, Z = (algebra.random_vector(rng, bundle.dimension) for _ in range(3))

    def times(U, V, dual=False):
        return algebra.extended_product(jet, products, U, V, dual)

    defects = [algebra.defect(times(times(X, Y), Z), times(X, times(Y, Z))),
               algebra.defect(times(times(X, Y, True), Z, True), times(X, times(Y, Z, True), True)),
               algebra.defect(times(algebra.unit(products), X), X),
               algebra.defect(times(algebra.stored_eventual_identity(bundle, p, ev), X, True), X)]
    return max(defects)


def euler_canonical_residual(bundle, point: Mapping[str, complex], products: ProductData) -> float:
    """the Euler field has components u_mu in the canonical frame"""
    stored = bundle.euler_components(point)
    return _scaled(products.euler - stored, stored)


def canonical_diagonal_residual(bundle, point: Mapping[str, complex], frame: CanonicalFrame) -> float:
    """
    eta pushed to canonical coordinates is diag(eta_mu), with the Jacobian of the critical values taken by finite
    differences; folded models are checked on their source at the embedded point, where the frame lives
    """
    if bundle.folding is not None:
        bundle, point = bundle.folding.source, bundle.folding.source_point(point)
    metric = eta_residue(bundle, point, frame).metric
    J_inv = np.linalg.inv(critical_value_jacobian(bundle, point, frame))
    canonical = J_inv.T @ metric @ J_inv
    etas = np.asarray(frame.etas, dtype=complex)
    return _scaled(canonical - np.diag(etas), etas)


def flat_metric(bundle, point: Mapping[str, complex], frame: CanonicalFrame) -> np.ndarray:
    """the metric that is constant in the chart: g for dual models, eta otherwise"""
    if bundle.dual:
        return g_residue(bundle, point, frame).metric
    return eta_residue(bundle, point, frame).metric


def metric_variation(metric: np.ndarray, reference: np.ndarray) -> float:
    return _scaled(metric - reference, reference)


@lru_cache(maxsize=None)
def _third_derivatives(bundle):
    chart = bundle.chart
    return [[[ex.differentiate(ex.differentiate(ex.differentiate(bundle.dual_prepotential, a), b), d)
              for d in chart] for b in chart] for a in chart]


def dual_metric(bundle, point: Mapping[str, complex], frame: CanonicalFrame) -> np.ndarray:
    """g_ab of a dual bundle: the closed form when the family has one, the residue pairing otherwise"""
    if bundle.closed_metric is not None:
        return bundle.closed_metric
    return g_residue(bundle, point, frame).metric


def prepotential_third_derivatives(bundle, point: Mapping[str, complex]) -> np.ndarray:
    ev = ex.Evaluator(bundle.point(point))
    return _values(ev, _third_derivatives(bundle))


def prepotential_structure(bundle, point: Mapping[str, complex], frame: CanonicalFrame) -> np.ndarray:
    """c*^d_ab = s g^de F*_eab, the dual product read off the dual prepotential"""
    F = prepotential_third_derivatives(bundle, point)
    inverse = np.linalg.inv(dual_metric(bundle, point, frame))
    return bundle.prepotential_sign * np.einsum('de,abe->dab', inverse, F)


def fstar_residual(bundle, point: Mapping[str, complex], frame: CanonicalFrame, products: ProductData) -> float:
    """F*_abd - s g_de c*^e_ab against the residue dual product"""
    F = prepotential_third_derivatives(bundle, point)
    g = dual_metric(bundle, point, frame)
    lowered = np.einsum('de,eab->abd', g, products.require_dual())
    return _scaled(F - bundle.prepotential_sign * lowered, F)


def intersection_form_residual(bundle, point: Mapping[str, complex], frame: CanonicalFrame) -> float:
    """the residue intersection form, inverted, against the closed form g^ab of the family"""
    inverse = np.linalg.inv(g_residue(bundle, point, frame).metric)
    closed = np.asarray(bundle.intersection_form, dtype=complex)
    return _scaled(inverse - closed, closed)


@lru_cache(maxsize=None)
def _rank2_expressions(bundle):
    chart, fibre = bundle.chart, bundle.fibre
    hb = [ex.hessian(o, chart) for o in bundle.components]
    hm = [[[ex.differentiate(ex.differentiate(o, a), b) for b in fibre] for a in chart] for o in bundle.components]
    hf = [ex.hessian(o, fibre) for o in bundle.components]
    return hb, hm, hf


def _rank2_second_derivatives(bundle, point: Mapping[str, complex], z: complex, w: complex):
    z_name, w_name = bundle.fibre
    ev = ex.Evaluator({**point, z_name: complex(z), w_name: complex(w)})
    return tuple(_values(ev, e) for e in _rank2_expressions(bundle))


def rank2_residual(bundle, point: Mapping[str, complex], z: complex, w: complex,
                   products: ProductData) -> Tuple[float, float, float, float]:
    """
    the four families of associativity conditions of the rank-two extension with components (Phi, Psi) over the
    fibre coordinates (z, w); Hb, Hm and Hf hold the base, mixed and fibre second derivatives of each component
    """
    Hb, Hm, Hf = _rank2_second_derivatives(bundle, point, z, w)
    c = products.structure
    T1 = np.einsum('mab,kmg->kabg', c, Hb) + np.einsum('jab,kgj->kabg', Hb, Hm)
    f1 = _scaled(T1 - T1.transpose(0, 3, 2, 1), T1)
    left = np.einsum('mab,kmc->kabc', c, Hm) + np.einsum('jab,kjc->kabc', Hb, Hf)
    right = np.einsum('jbc,kaj->kabc', Hm, Hm)
    f2 = _scaled(left - right, left, right)
    left = np.einsum('dab,cqd->cqab', Hf, Hm)
    right = np.einsum('dqa,cdb->cqab', Hm, Hf)
    f3 = _scaled(left - right, left, right)
    left = np.einsum('kbc,dak->dabc', Hf, Hf)
    right = np.einsum('kab,dkc->dabc', Hf, Hf)
    f4 = _scaled(left - right, left, right)
    return f1, f2, f3, f4


@lru_cache(maxsize=None)
def _restriction_expressions(bundle):
    z_name, w_name = bundle.fibre
    base = bundle.base
    z = ex.var(z_name)
    lam = ex.substitute(base.superpotential, {base.variable: z})
    omega = ex.substitute(base.prepotential, {base.variable: z})
    return (lam, omega, ex.differentiate(lam, z_name), ex.differentiate(bundle.phi, z_name),
            ex.differentiate(bundle.psi, z_name), ex.differentiate(bundle.psi, w_name))


def rank2_restriction_residual(bundle, point: Mapping[str, complex], z: complex, w: complex) -> float:
    """
    the w = 0 slice reproduces the rank-one extension: Phi_z = lambda(z), Phi = Omega(x = z) and Psi(w = 0) = 0; for
    Psi = w lambda(z) also Psi_z = w lambda_z and Psi_w = lambda
    """
    z_name, w_name = bundle.fibre
    lam, omega, lam_z, phi_z, psi_z, psi_w = _restriction_expressions(bundle)
    ev = ex.Evaluator({**point, z_name: complex(z), w_name: complex(w)})
    on_slice = ex.Evaluator({**point, z_name: complex(z), w_name: 0j})
    L, O = ev(lam), ev(omega)
    residuals = [abs(ev(phi_z) - L) / max(1.0, abs(L)), abs(ev(bundle.phi) - O) / max(1.0, abs(O)),
                 abs(on_slice(bundle.psi)) / max(1.0, abs(L))]
    if bundle.params.get('psi') == 'linear':
        Lz = ev(lam_z)
        residuals.append(abs(ev(psi_z) - w * Lz) / max(1.0, abs(w * Lz)))
        residuals.append(abs(ev(psi_w) - L) / max(1.0, abs(L)))
    return max(residuals)


@lru_cache(maxsize=None)
def _miniversal_derivatives(bundle):
    z_name = bundle.fibre[0]
    f_z = ex.differentiate(bundle.miniversal, z_name)
    return f_z, ex.differentiate(f_z, z_name)


def rank2_table_residual(bundle, point: Mapping[str, complex], z: complex, w: complex) -> float:
    """Z Z = f_z Z + w f_zz W, Z W = f_z W, W W = 0 read from the fibre second derivatives of (Phi, Psi)"""
    _, _, Hf = _rank2_second_derivatives(bundle, point, z, w)
    z_name, w_name = bundle.fibre
    ev = ex.Evaluator({**point, z_name: complex(z), w_name: complex(w)})
    f_z, f_zz = (ev(e) for e in _miniversal_derivatives(bundle))
    expected = np.zeros((2, 2, 2), dtype=complex)
    expected[0, 0, 0] = f_z
    expected[1, 0, 0] = w * f_zz
    expected[1, 0, 1] = expected[1, 1, 0] = f_z
    return _scaled(Hf - expected, expected)
