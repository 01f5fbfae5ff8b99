"""
Frobenius data of a Landau-Ginzburg pair (lambda, omega = a dx) by residue calculus at the critical points of lambda.
"""
import cmath
import itertools
import logging
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from owd.exceptions import DegenerateCriticalPointError, DiscriminantError, NumericDomainError
from owd.symbolic import expression as ex
from owd.symbolic import series as sr
from owd.utility.utility import Utility

_logger = logging.getLogger(__name__)

CRITICAL_TOLERANCE = 1e-10
DEGENERACY_GUARD = 1e-8
DISCRIMINANT_GUARD = 1e-8
SEMISIMPLE_GUARD = 1e-6
MAX_POLISH_STEPS = 20
TORUS_GRID = 8
DIFFERENCE_STEP = 1e-5


@dataclass(frozen=True)
class CanonicalFrame:
    """
    critical points grouped by critical value; each group is one canonical coordinate u_mu with
    eta_mu = sum over the group of a^2 / lambda''(q)
    """
    groups: Tuple[Tuple[complex, ...], ...]
    curvatures: Tuple[Tuple[complex, ...], ...]
    values: Tuple[complex, ...]
    etas: Tuple[complex, ...]

    def __len__(self):
        return len(self.values)

    @property
    def points(self) -> Tuple[complex, ...]:
        return tuple(g[0] for g in self.groups)

    def entries(self) -> List[Tuple[complex, complex, complex]]:
        return list(zip(self.points, self.values, self.etas))

    def all_points(self) -> List[Tuple[complex, complex, complex]]:
        """(q, u, lambda''(q)) for every critical point"""
        out = []
        for group, curvatures, u in zip(self.groups, self.curvatures, self.values):
            for q, c in zip(group, curvatures):
                out.append((q, u, c))
        return out


@dataclass(frozen=True)
class TangentData:
    chart: Tuple[str, ...]
    metric: np.ndarray
    tensor: np.ndarray
    structure: np.ndarray

    @classmethod
    def from_tensors(cls, chart: Sequence[str], metric: np.ndarray, tensor: np.ndarray) -> 'TangentData':
        structure = np.einsum('dm,mab->dab', np.linalg.inv(metric), tensor)
        return cls(tuple(chart), metric, tensor, structure)

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.metric))

    @property
    def inverse_metric(self) -> np.ndarray:
        return np.linalg.inv(self.metric)

    def symmetry_defect(self) -> float:
        defect = float(np.max(np.abs(self.metric - self.metric.T)))
        for perm in itertools.permutations(range(3)):
            defect = max(defect, float(np.max(np.abs(self.tensor - np.transpose(self.tensor, perm)))))
        return defect

    def restrict(self, indices: Sequence[int], chart: Sequence[str]) -> 'TangentData':
        idx = np.asarray(indices)
        metric = self.metric[np.ix_(idx, idx)]
        tensor = self.tensor[np.ix_(idx, idx, idx)]
        return TangentData.from_tensors(chart, metric, tensor)


@dataclass(frozen=True)
class ProductData:
    """
    product and dual product of the Frobenius manifold at a point, expressed in the chart:
    structure[d, a, b] = c^d_ab, dual_structure[d, a, b] = c*^d_ab (None on the discriminant)
    """
    chart: Tuple[str, ...]
    values: np.ndarray
    structure: np.ndarray
    dual_structure: Optional[np.ndarray]
    unit: np.ndarray
    euler: np.ndarray
    euler_inverse: Optional[np.ndarray]

    def require_dual(self) -> np.ndarray:
        if self.dual_structure is None:
            raise DiscriminantError('a canonical coordinate vanishes, min |u| = {:.3e}'.format(
                float(np.min(np.abs(self.values)))))
        return self.dual_structure

    def multiply(self, X: np.ndarray, Y: np.ndarray, dual: bool = False) -> np.ndarray:
        c = self.require_dual() if dual else self.structure
        return np.einsum('dab,a,b->d', c, X, Y)

    def restrict(self, indices: Sequence[int], chart: Sequence[str]) -> 'ProductData':
        idx = np.asarray(indices)

        def cut(c):
            return None if c is None else c[np.ix_(idx, idx, idx)]

        return ProductData(chart=tuple(chart), values=self.values, structure=cut(self.structure),
                           dual_structure=cut(self.dual_structure), unit=self.unit[idx], euler=self.euler[idx],
                           euler_inverse=None if self.euler_inverse is None else self.euler_inverse[idx])


def polynomial_roots(coefficients: Sequence[complex]) -> List[complex]:
    """roots of a polynomial given by descending coefficients (companion-matrix eigenvalues)"""
    coefficients = np.trim_zeros(np.asarray(coefficients, dtype=complex), 'f')
    if len(coefficients) < 2:
        return []
    return [complex(r) for r in np.roots(coefficients)]


def logarithmic_critical_points(poles: Sequence[Tuple[complex, float]], constant: complex = 0j,
                                exponential: bool = False) -> List[complex]:
    """
    zeros of  constant + sum_i m_i / (s - s_i)           (exponential=False, s = x)
           or constant + s sum_i m_i / (s - s_i)         (exponential=True,  s = e^x, returned as x = log s)

    which is the x-derivative of log lambda for a lambda that is a product of powers of linear factors in s.
    """
    locations = [complex(p) for p, _ in poles]
    denominator = np.poly(locations) if locations else np.array([1.0 + 0j])
    numerator = constant * denominator
    for i, (_, multiplicity) in enumerate(poles):
        others = locations[:i] + locations[i + 1:]
        term = multiplicity * (np.poly(others) if others else np.array([1.0 + 0j]))
        if exponential:
            term = np.polymul(term, [1.0, 0.0])
        numerator = np.polyadd(numerator, term)
    roots = polynomial_roots(numerator)
    if exponential:
        return [cmath.log(r) for r in roots if abs(r) > 1e-300]
    return roots


def torus_critical_points(function: ex.Expression, derivative: ex.Expression, variable: str,
                          point: Mapping[str, complex], periods: Sequence[complex], count: int) -> List[complex]:
    """
    zeros of an elliptic function on the torus C / (Z + tau Z) by Newton iteration from a grid over the fundamental
    parallelogram; the grid is refined until `count` distinct zeros are found
    """
    w1, w2 = complex(periods[0]), complex(periods[1])
    found: List[complex] = []
    grid = TORUS_GRID
    while grid <= 4 * TORUS_GRID:
        for i, j in itertools.product(range(grid), repeat=2):
            start = (i + 0.5) / grid * w1 + (j + 0.5) / grid * w2
            q = _newton(function, derivative, variable, point, start, steps=40)
            if q is None:
                continue
            q = _reduce(q, w1, w2)
            if all(Utility.lattice_distance(q - f, [w1, w2]) > 1e-7 for f in found):
                found.append(q)
        if len(found) >= count:
            break
        _logger.debug('torus grid %d found %d of %d zeros, refining', grid, len(found), count)
        grid *= 2
    if len(found) != count:
        raise DegenerateCriticalPointError('expected {} critical points on the torus, found {}'.format(
            count, len(found)))
    return found


def _reduce(q: complex, w1: complex, w2: complex) -> complex:
    t = q.imag / w2.imag
    q = q - np.floor(t) * w2
    s = (q - (q.imag / w2.imag) * w2).real / w1.real
    return complex(q - np.floor(s) * w1)


def _newton(function, derivative, variable, point, start, steps=MAX_POLISH_STEPS) -> Optional[complex]:
    q = complex(start)
    for _ in range(steps):
        try:
            ev = ex.Evaluator({**point, variable: q})
            f = ev(function)
            df = ev(derivative)
        except NumericDomainError:
            return None
        if df == 0:
            return None
        step = f / df
        q -= step
        if not cmath.isfinite(q):
            return None
        if abs(step) <= 1e-15 * max(1.0, abs(q)):
            break
    try:
        ev = ex.Evaluator({**point, variable: q})
        f, df = ev(function), ev(derivative)
    except NumericDomainError:
        return None
    if abs(f) > CRITICAL_TOLERANCE * max(1.0, abs(df)):
        return None
    return q


def critical_points(bundle, point: Mapping[str, complex], distinct_values: bool = True) -> CanonicalFrame:
    """
    canonical frame of `bundle` at `point`: polished critical points of lambda, critical values u_mu and the
    normalizations eta_mu = a^2 / lambda''(q_mu). Critical points exchanged by the sheet involution of the bundle
    (x -> -x for D_ell) are one point of the curve and form one group.

    Folded bundles report the frame of their source at the embedded point; there distinct critical points may share a
    critical value, so only the count is checked.

    Raises:
        DegenerateCriticalPointError: a critical point is degenerate, the critical values coalesce or their number
            does not match the dimension of the manifold
    """
    if bundle.folding is not None:
        return critical_points(bundle.folding.source, bundle.folding.source_point(point), distinct_values=False)
    x = bundle.variable
    function = bundle.critical_function
    derivative = bundle.critical_derivative
    scale2 = bundle.omega_scale ** 2
    involution = bundle.sheet_involution
    groups: List[List[complex]] = []
    curvatures: List[List[complex]] = []
    values: List[complex] = []
    for start in bundle.locator(point):
        q = _newton(function, derivative, x, point, start)
        if q is None:
            raise DegenerateCriticalPointError('critical point near {} does not verify'.format(start))
        ev = ex.Evaluator({**point, x: q})
        u = ev(bundle.superpotential)
        second = ev(derivative)
        if bundle.dual:
            second = u * second
        if abs(second) < DEGENERACY_GUARD:
            raise DegenerateCriticalPointError("|lambda''| = {:.3e} at q = {}".format(abs(second), q))
        if any(abs(q - other) < 1e-9 * max(1.0, abs(q)) for group in groups for other in group):
            continue
        image = involution(q) if involution is not None else None
        for g, group in enumerate(groups):
            if image is not None and abs(image - group[0]) < 1e-7 * max(1.0, abs(q)):
                group.append(q)
                curvatures[g].append(second)
                break
        else:
            groups.append([q])
            curvatures.append([second])
            values.append(u)
    if len(values) != bundle.dimension:
        raise DegenerateCriticalPointError('{} critical values for a {}-dimensional manifold'.format(
            len(values), bundle.dimension))
    if distinct_values:
        for u, v in itertools.combinations(values, 2):
            if abs(u - v) < SEMISIMPLE_GUARD:
                raise DegenerateCriticalPointError('critical values {} and {} coalesce'.format(u, v))
    etas = tuple(sum(scale2 / c for c in group) for group in curvatures)
    return CanonicalFrame(groups=tuple(tuple(g) for g in groups), curvatures=tuple(tuple(c) for c in curvatures),
                          values=tuple(values), etas=etas)


def _gradient_rows(bundle, point, frame: CanonicalFrame, everywhere: bool) -> np.ndarray:
    """rows of d_alpha lambda at the critical points (d_alpha log lambda for dual bundles)"""
    x = bundle.variable
    locations = [q for q, _, _ in frame.all_points()] if everywhere else list(frame.points)
    rows = []
    for q in locations:
        ev = ex.Evaluator({**point, x: q})
        rows.append([ev(d) for d in bundle.superpotential_gradient])
    return np.array(rows, dtype=complex)


def canonical_jacobian(bundle, point: Mapping[str, complex], frame: Optional[CanonicalFrame] = None) -> np.ndarray:
    """J[mu, alpha] = d u_mu / d t_alpha = d_alpha lambda (q_mu)"""
    frame = frame or critical_points(bundle, point)
    rows = _gradient_rows(bundle, point, frame, everywhere=False)
    if bundle.dual:
        rows = rows * np.asarray(frame.values)[:, None]
    return rows


def critical_value_jacobian(bundle, point: Mapping[str, complex], frame: CanonicalFrame,
                            step: float = DIFFERENCE_STEP) -> np.ndarray:
    """
    d u_mu / d t_alpha by central differences of the critical values; each critical point is re-polished by Newton
    iteration at the shifted chart values
    """
    x = bundle.variable
    columns = []
    for name in bundle.chart:
        shifted = []
        for sign in (1, -1):
            at = {**point, name: complex(point[name]) + sign * step}
            values = []
            for q in frame.points:
                moved = _newton(bundle.critical_function, bundle.critical_derivative, x, at, q)
                if moved is None:
                    raise DegenerateCriticalPointError('critical point {} lost when shifting {}'.format(q, name))
                values.append(ex.evaluate(bundle.superpotential, {**at, x: moved}))
            shifted.append(np.array(values, dtype=complex))
        columns.append((shifted[0] - shifted[1]) / (2 * step))
    return np.array(columns).T


def eta_residue(bundle, point: Mapping[str, complex], frame: Optional[CanonicalFrame] = None) -> TangentData:
    """
    eta(d_a, d_b) = sum_q Res_q d_a lambda d_b lambda a^2 dx / lambda'  and the tensor c with three factors

    Args:
        bundle: a ModelBundle; folded bundles restrict the data of their source
        point: values of the chart variables

    Returns: TangentData with metric eta
    """
    if bundle.folding is not None:
        source, at = bundle.folding.source, bundle.folding.source_point(point)
        data = eta_residue(source, at, critical_points(source, at, distinct_values=False))
        return data.restrict(bundle.folding.embedding, bundle.chart)
    frame = frame or critical_points(bundle, point)
    entries = frame.all_points()
    rows = _gradient_rows(bundle, point, frame, everywhere=True)
    if bundle.dual:
        rows = rows * np.array([u for _, u, _ in entries])[:, None]
    weights = np.array([bundle.omega_scale ** 2 / c for _, _, c in entries], dtype=complex)
    metric = np.einsum('q,qa,qb->ab', weights, rows, rows)
    tensor = np.einsum('q,qa,qb,qc->abc', weights, rows, rows, rows)
    return TangentData.from_tensors(bundle.chart, metric, tensor)


def g_residue(bundle, point: Mapping[str, complex], frame: Optional[CanonicalFrame] = None) -> TangentData:
    """
    intersection form g(d_a, d_b) = s sum_q Res_q d_a log lambda d_b log lambda a^2 dx / (log lambda)', with the
    matching tensor of the dual product; s is the intersection_scale of the bundle (one unless the closed form of
    the family is normalized differently)

    Raises:
        DiscriminantError: some critical value vanishes
    """
    if bundle.folding is not None:
        source, at = bundle.folding.source, bundle.folding.source_point(point)
        data = g_residue(source, at, critical_points(source, at, distinct_values=False))
        return data.restrict(bundle.folding.embedding, bundle.chart)
    frame = frame or critical_points(bundle, point)
    entries = frame.all_points()
    values = np.array([u for _, u, _ in entries], dtype=complex)
    if np.min(np.abs(values)) < DISCRIMINANT_GUARD:
        raise DiscriminantError('min |u| = {:.3e}'.format(float(np.min(np.abs(values)))))
    rows = _gradient_rows(bundle, point, frame, everywhere=True)
    if not bundle.dual:
        rows = rows / values[:, None]
    scale = bundle.omega_scale ** 2 * bundle.intersection_scale
    weights = np.array([scale * u / c for _, u, c in entries], dtype=complex)
    metric = np.einsum('q,qa,qb->ab', weights, rows, rows)
    tensor = np.einsum('q,qa,qb,qc->abc', weights, rows, rows, rows)
    return TangentData.from_tensors(bundle.chart, metric, tensor)


def product_data(bundle, point: Mapping[str, complex], frame: Optional[CanonicalFrame] = None) -> ProductData:
    """
    structure constants of the product and of the dual product, the unit and E^{-1} in the chart, read off from the
    canonical frame: the idempotents d/du_mu have chart components given by the columns of J^{-1}
    """
    if bundle.folding is not None:
        source, at = bundle.folding.source, bundle.folding.source_point(point)
        data = product_data(source, at, critical_points(source, at, distinct_values=False))
        return data.restrict(bundle.folding.embedding, bundle.chart)
    frame = frame or critical_points(bundle, point)
    J = canonical_jacobian(bundle, point, frame)
    J_inv = np.linalg.inv(J)
    u = np.asarray(frame.values, dtype=complex)
    structure = np.einsum('dm,ma,mb->dab', J_inv, J, J)
    unit = J_inv @ np.ones(len(u), dtype=complex)
    euler = J_inv @ u
    if np.min(np.abs(u)) < DISCRIMINANT_GUARD:
        dual_structure = None
        euler_inverse = None
    else:
        dual_structure = np.einsum('dm,ma,mb,m->dab', J_inv, J, J, 1 / u)
        euler_inverse = J_inv @ (1 / u)
    return ProductData(chart=tuple(bundle.chart), values=u, structure=structure, dual_structure=dual_structure,
                       unit=unit, euler=euler, euler_inverse=euler_inverse)


def eta_at_infinity(bundle, point: Mapping[str, complex], order: Optional[int] = None) -> np.ndarray:
    """
    eta for a polynomial superpotential as minus the residue at infinity of d_a lambda d_b lambda a^2 dx / lambda'
    """
    x = bundle.variable
    gradient = bundle.superpotential_gradient
    n = len(gradient)
    order = order or 4
    metric = np.zeros((n, n), dtype=complex)
    base = {k: v for k, v in point.items() if k != x}
    for a, b in itertools.combinations_with_replacement(range(n), 2):
        integrand = ex.mul(bundle.omega_scale ** 2, gradient[a], gradient[b], ex.power(bundle.lambda_x, -1))
        series = sr.expand(integrand, x, sr.INFINITY, order, base)
        metric[a, b] = metric[b, a] = -sr.residue(series)
    return metric
