import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from owd.symbolic import expression as ex
from owd.utility.utility import Utility

_logger = logging.getLogger(__name__)

DEFAULT_MODULUS = (0.6, 1.4)


@dataclass(frozen=True)
class SamplingHints:
    """how admissible points of a bundle are drawn"""
    ranges: Tuple[Tuple[str, float, float], ...] = ()
    fixed: Tuple[Tuple[str, complex], ...] = ()
    fibre: str = 'annulus'
    guard: float = 0.05

    def modulus_range(self, name: str) -> Tuple[float, float]:
        for n, low, high in self.ranges:
            if n == name:
                return low, high
        return DEFAULT_MODULUS

    def fixed_values(self) -> Dict[str, complex]:
        return dict(self.fixed)


@dataclass(frozen=True)
class ParameterChart:
    """the non-flat parameters a of the A_ell superpotential and the transition maps to the flat chart"""
    names: Tuple[str, ...]
    superpotential: ex.Expression
    to_parameters: Callable[[Mapping[str, complex]], Dict[str, complex]]
    to_flat: Callable[[Mapping[str, complex]], Dict[str, complex]]


@dataclass(frozen=True)
class Folding:
    rule: str
    source: 'ModelBundle'
    embedding: Tuple[int, ...]

    def source_point(self, point: Mapping[str, complex]) -> Dict[str, complex]:
        out = {name: 0j for name in self.source.chart}
        for name, index in zip(self.names, self.embedding):
            out[self.source.chart[index]] = complex(point[name])
        for key, value in point.items():
            if key not in out and key not in self.names:
                out[key] = value
        return out

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple('v{}'.format(i + 1) for i in range(len(self.embedding)))


@dataclass(frozen=True)
class IntegrationPath:
    waypoints: Tuple[complex, ...]
    nodes: int = 20

    def segments(self):
        return list(zip(self.waypoints[:-1], self.waypoints[1:]))


@dataclass(frozen=True, eq=False)
class ModelBundle:
    """
    One Landau-Ginzburg model: superpotential lambda on the curve variable x, extended prepotential Omega with
    (1/a) Omega_x = lambda (primal) or log lambda (dual), vector fields and charge.

    `locator` returns rough critical points of lambda in x at a point of the chart; `special_points` returns the
    zeros and poles of lambda that samples must avoid.

    Dual bundles may carry the intersection form in closed form (`intersection_form`, the contravariant g^ab in the
    chart); `intersection_scale` normalizes the residue pairing to it and `prepotential_sign` s fixes the convention
    F*_abc = s g(d_a * d_b, d_c) of the displayed dual prepotential.
    """
    family: str
    params: Mapping[str, object]
    chart: Tuple[str, ...]
    superpotential: ex.Expression
    prepotential: ex.Expression
    euler: ex.VectorField
    eventual_identity: ex.VectorField
    charge: float
    shift: float
    dual: bool
    locator: Callable[[Mapping[str, complex]], Sequence[complex]]
    special_points: Callable[[Mapping[str, complex]], Sequence[complex]]
    omega_scale: int = 1
    dual_prepotential: Optional[ex.Expression] = None
    parameter_chart: Optional[ParameterChart] = None
    folding: Optional[Folding] = None
    periods: Tuple[complex, ...] = ()
    sampling: SamplingHints = SamplingHints()
    sheet_involution: Optional[Callable[[complex], complex]] = None
    flat: bool = True
    metadata: Mapping[str, object] = field(default_factory=dict)
    variable: str = 'x'
    intersection_form: Optional[np.ndarray] = None
    intersection_scale: float = 1.0
    prepotential_sign: int = -1

    @property
    def dimension(self) -> int:
        return len(self.chart)

    @property
    def label(self) -> str:
        params = ','.join('{}={}'.format(k, v) for k, v in self.params.items())
        return '{}[{}]'.format(self.family, params)

    @cached_property
    def lambda_x(self) -> ex.Expression:
        return ex.differentiate(self.superpotential, self.variable)

    @cached_property
    def fibre_derivative(self) -> ex.Expression:
        """Omega' = Omega_x / a"""
        return ex.mul(1.0 / self.omega_scale, ex.differentiate(self.prepotential, self.variable))

    @cached_property
    def fibre_second(self) -> ex.Expression:
        return ex.mul(1.0 / self.omega_scale, ex.differentiate(self.fibre_derivative, self.variable))

    @cached_property
    def log_superpotential(self) -> ex.Expression:
        if self.dual:
            return self.fibre_derivative
        return ex.log(self.superpotential)

    @cached_property
    def critical_function(self) -> ex.Expression:
        """lambda' for primal bundles, (log lambda)' for dual ones; both vanish at the critical points"""
        if self.dual:
            return ex.differentiate(self.log_superpotential, self.variable)
        return self.lambda_x

    @cached_property
    def critical_derivative(self) -> ex.Expression:
        return ex.differentiate(self.critical_function, self.variable)

    @cached_property
    def superpotential_gradient(self) -> Tuple[ex.Expression, ...]:
        if self.dual:
            return tuple(ex.differentiate(self.log_superpotential, n) for n in self.chart)
        return tuple(ex.differentiate(self.superpotential, n) for n in self.chart)

    @cached_property
    def omega_hessian(self) -> List[List[ex.Expression]]:
        return ex.hessian(self.prepotential, self.chart)

    @cached_property
    def closed_metric(self) -> Optional[np.ndarray]:
        """g_ab, the inverse of the closed-form intersection form"""
        if self.intersection_form is None:
            return None
        return np.linalg.inv(np.asarray(self.intersection_form, dtype=complex))

    @cached_property
    def fibre_gradient(self) -> Tuple[ex.Expression, ...]:
        return tuple(ex.differentiate(self.fibre_derivative, n) for n in self.chart)

    def point(self, values: Mapping[str, complex], x: Optional[complex] = None) -> Dict[str, complex]:
        out = dict(self.sampling.fixed_values())
        out.update({k: complex(v) for k, v in values.items()})
        if x is not None:
            out[self.variable] = complex(x)
        return out

    def chart_vector(self, values: Mapping[str, complex]) -> np.ndarray:
        return np.array([complex(values[n]) for n in self.chart], dtype=complex)

    def euler_components(self, point: Mapping[str, complex], evaluator: Optional[ex.Evaluator] = None) -> np.ndarray:
        return np.array(self.euler.values(point, self.chart, evaluator), dtype=complex)

    def fibre_shift(self, point: Mapping[str, complex]) -> complex:
        """x-component (1-d)x/2 + d0 of the eventual identity"""
        x = complex(point[self.variable])
        return (1 - self.charge) * x / 2 + self.shift

    def separation(self, point: Mapping[str, complex], x: complex) -> float:
        specials = list(self.special_points(point))
        if not specials:
            return float('inf')
        return min(Utility.lattice_distance(x - s, list(self.periods)) for s in specials)

    def describe(self) -> str:
        kind = 'dual' if self.dual else 'primal'
        return '{} ({}, d={:g}, chart {})'.format(self.label, kind, self.charge, ','.join(self.chart))


@dataclass(frozen=True, eq=False)
class RankTwoBundle:
    """rank-two extension over the A_ell Frobenius manifold with fibre coordinates z, w"""
    family: str
    params: Mapping[str, object]
    base: ModelBundle
    phi: ex.Expression
    psi: ex.Expression
    miniversal: ex.Expression
    fibre: Tuple[str, str] = ('z', 'w')

    @property
    def chart(self) -> Tuple[str, ...]:
        return self.base.chart

    @property
    def components(self) -> Tuple[ex.Expression, ex.Expression]:
        return self.phi, self.psi

    @property
    def label(self) -> str:
        params = ','.join('{}={}'.format(k, v) for k, v in self.params.items())
        return '{}[{}]'.format(self.family, params)

    def replace_components(self, phi: ex.Expression, psi: ex.Expression) -> 'RankTwoBundle':
        return RankTwoBundle(self.family, self.params, self.base, phi, psi, self.miniversal, self.fibre)
