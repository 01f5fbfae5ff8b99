"""
Seeded drawing of admissible sample points: chart values of a bundle together with a handful of points x on the
curve (or pairs (z, w) on the fibre of a rank-two bundle).
"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

import numpy as np

from owd.exceptions import DiscriminantError, InadmissiblePointError, NumericDomainError
from owd.frobenius.geometry import CanonicalFrame, ProductData, critical_points, product_data
from owd.models.bundle import DEFAULT_MODULUS, ModelBundle, RankTwoBundle
from owd.symbolic import expression as ex
from owd.utility.utility import Utility

_logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 100
FIBRE_SAMPLES = 5
CRITICAL_GUARD = 1e-6
ZERO_GUARD = 1e-8

Bundle = Union[ModelBundle, RankTwoBundle]


@dataclass(frozen=True)
class Sample:
    """
    one admissible point: `point` holds the chart values (and the held values such as tau), `xs` the points on the
    curve; for rank-two bundles `xs` are the z values and `ws` the matching w values
    """
    index: int
    point: Dict[str, complex]
    xs: Tuple[complex, ...]
    frame: CanonicalFrame
    products: ProductData
    entropy: int
    ws: Tuple[complex, ...] = ()

    def at(self, x: complex, variable: str = 'x') -> Dict[str, complex]:
        return {**self.point, variable: complex(x)}

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.entropy)


class Sampler(object):
    def __init__(self, bundle: Bundle, seed: int, fibre_samples: int = FIBRE_SAMPLES, real: bool = False,
                 attempts: int = MAX_ATTEMPTS):
        """
        Args:
            bundle: the model to sample
            seed: seed of the numpy generator; equal seeds give equal samples
            fibre_samples: number of curve points per sample
            real: draw real chart values (twisted periods integrate between real zeros of lambda)
            attempts: draws per sample before giving up
        """
        self.bundle = bundle
        self.base = bundle.base if isinstance(bundle, RankTwoBundle) else bundle
        self.rng = np.random.default_rng(seed)
        self.fibre_samples = fibre_samples
        self.real = real
        self.attempts = attempts

    def draw(self, count: int) -> List[Sample]:
        return [self._sample(i) for i in range(count)]

    def _value(self, modulus: Tuple[float, float], real: bool = False) -> complex:
        r = self.rng.uniform(*modulus)
        if real:
            return complex(r if self.rng.uniform() < 0.5 else -r)
        return r * cmath.exp(1j * self.rng.uniform(0, 2 * math.pi))

    def _chart_point(self) -> Dict[str, complex]:
        hints = self.base.sampling
        fixed = hints.fixed_values()
        values = {n: self._value(hints.modulus_range(n), self.real) for n in self.base.chart if n not in fixed}
        return self.base.point(values)

    def _curve_point(self) -> complex:
        hints = self.base.sampling
        if hints.fibre == 'torus':
            w1, w2 = self.base.periods
            return complex(self.rng.uniform() * w1 + self.rng.uniform() * w2)
        return self._value(DEFAULT_MODULUS)

    def _check_special_points(self, point: Dict[str, complex]):
        specials = list(self.base.special_points(point))
        periods = list(self.base.periods)
        for s, t in itertools.combinations(specials, 2):
            if Utility.lattice_distance(s - t, periods) <= self.base.sampling.guard:
                raise InadmissiblePointError('special-points', 'zeros or poles {} and {} collide'.format(s, t))

    def _check_curve_point(self, point: Dict[str, complex], x: complex):
        bundle = self.base
        if bundle.separation(point, x) <= bundle.sampling.guard:
            raise InadmissiblePointError('special-points', 'x = {} is too close to a zero or pole'.format(x))
        ev = ex.Evaluator(bundle.point(point, x))
        if abs(ev(bundle.critical_function)) <= CRITICAL_GUARD:
            raise InadmissiblePointError('critical', 'x = {} is too close to a critical point'.format(x))
        if abs(ev(bundle.superpotential)) <= ZERO_GUARD:
            raise InadmissiblePointError('zero', 'lambda vanishes at x = {}'.format(x))

    def _admissible(self, index: int) -> Sample:
        point = self._chart_point()
        self._check_special_points(point)
        frame = critical_points(self.base, point)
        products = product_data(self.base, point, frame)
        if products.dual_structure is None:
            raise DiscriminantError('min |u| = {:.3e}'.format(float(np.min(np.abs(products.values)))))
        xs, ws = [], []
        while len(xs) < self.fibre_samples:
            x = self._curve_point()
            self._check_curve_point(point, x)
            xs.append(x)
            if isinstance(self.bundle, RankTwoBundle):
                ws.append(self._value(DEFAULT_MODULUS))
        return Sample(index=index, point=point, xs=tuple(xs), frame=frame, products=products,
                      entropy=int(self.rng.integers(2 ** 32)), ws=tuple(ws))

    def _sample(self, index: int) -> Sample:
        for attempt in range(self.attempts):
            try:
                return self._admissible(index)
            except (InadmissiblePointError, NumericDomainError, np.linalg.LinAlgError) as e:
                _logger.debug('sample %d attempt %d rejected: %s', index, attempt, e)
        raise InadmissiblePointError('sampling', 'no admissible point for {} after {} attempts'.format(
            self.bundle.label, self.attempts))
