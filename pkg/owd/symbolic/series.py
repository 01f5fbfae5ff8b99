"""
Truncated Laurent series in one variable.

A LaurentSeries stores the coefficients of exponents valuation .. order-1 of
its local coordinate: (var - center) at a finite center, 1/var at infinity.
Coefficients are complex numbers or Expressions; the same arithmetic serves
numeric expansions and the symbolic flat-coordinate construction.
"""
import cmath
import logging
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Tuple, Union

from owd.exceptions import (EssentialSingularityError, TruncationError, UnboundVariableError,
                            WrongLeadingTermError)
from owd.symbolic import expression as ex

_logger = logging.getLogger(__name__)

INFINITY = 'infinity'
EXPANSION_GUARD = 12
NUMERIC_ZERO = 1e-13

Coefficient = Union[complex, ex.Expression]


def _is_zero(c) -> bool:
    if isinstance(c, ex.Const):
        return c.constant == 0
    if isinstance(c, ex.Expression):
        return False
    return c == 0


def _is_numeric(c) -> bool:
    return isinstance(c, numbers.Number)


def _fraction_power(c, p: Fraction):
    if _is_numeric(c):
        return cmath.exp(float(p) * cmath.log(complex(c)))
    return ex.rational_power(c, p)


@dataclass(frozen=True)
class LaurentSeries:
    var: str
    center: Union[complex, str]
    valuation: int
    coefficients: Tuple
    order: int

    def __post_init__(self):
        size = self.order - self.valuation
        coefficients = tuple(self.coefficients[:max(size, 0)])
        if len(coefficients) < size:
            coefficients = coefficients + (0,) * (size - len(coefficients))
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def at_infinity(self) -> bool:
        return self.center == INFINITY

    @property
    def precision(self) -> int:
        return self.order - self.valuation

    def coefficient(self, k: int):
        if k >= self.order:
            raise TruncationError('coefficient {} requested beyond truncation order {}'.format(k, self.order))
        if k < self.valuation:
            return 0
        return self.coefficients[k - self.valuation]

    def _like(self, valuation, coefficients, order) -> 'LaurentSeries':
        return LaurentSeries(self.var, self.center, valuation, tuple(coefficients), order)

    def constant(self, value, order=None) -> 'LaurentSeries':
        order = self.order if order is None else order
        if order <= 0:
            return self._like(order, (), order)
        return self._like(0, (value,), order)

    def _coerce(self, other) -> 'LaurentSeries':
        if isinstance(other, LaurentSeries):
            if other.var != self.var or other.center != self.center:
                raise ValueError('series in {}@{} and {}@{} cannot be combined'.format(
                    self.var, self.center, other.var, other.center))
            return other
        return self.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        valuation = min(self.valuation, other.valuation)
        order = min(self.order, other.order)
        coefficients = [self.coefficient(k) + other.coefficient(k) for k in range(valuation, order)]
        return self._like(valuation, coefficients, order)

    __radd__ = __add__

    def __neg__(self):
        return self._like(self.valuation, [-c for c in self.coefficients], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, factor) -> 'LaurentSeries':
        return self._like(self.valuation, [factor * c for c in self.coefficients], self.order)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.valuation, other.valuation
        valuation = a + b
        order = min(self.order + b, other.order + a)
        coefficients = []
        for k in range(valuation, order):
            total = 0
            for i in range(a, k - b + 1):
                x = self.coefficients[i - a]
                y = other.coefficients[k - i - b]
                if _is_zero(x) or _is_zero(y):
                    continue
                total = total + x * y
            coefficients.append(total)
        return self._like(valuation, coefficients, order)

    __rmul__ = __mul__

    def strip(self, tolerance: float = NUMERIC_ZERO) -> 'LaurentSeries':
        """drops leading coefficients that vanish exactly, or numerically relative to the largest one"""
        numeric = [abs(c) for c in self.coefficients if _is_numeric(c)]
        scale = max(numeric) if numeric else 0.0
        skip = 0
        for c in self.coefficients:
            if _is_zero(c) or (_is_numeric(c) and abs(c) <= tolerance * scale):
                skip += 1
            else:
                break
        if skip == 0:
            return self
        return self._like(self.valuation + skip, self.coefficients[skip:], self.order)

    def inverse(self) -> 'LaurentSeries':
        s = self.strip()
        if s.precision <= 0:
            raise TruncationError('cannot invert a series without a nonzero leading coefficient')
        c0 = s.coefficients[0]
        inv0 = 1 / c0
        out = [inv0]
        for n in range(1, s.precision):
            total = 0
            for k in range(1, n + 1):
                ck = s.coefficients[k]
                if _is_zero(ck):
                    continue
                total = total + ck * out[n - k]
            out.append(-inv0 * total)
        return self._like(-s.valuation, out, -s.valuation + s.precision)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self.scale(1 / other)

    def __rtruediv__(self, other):
        return self.inverse().scale(other)

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = self.constant(1, order=self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def power_fraction(self, p) -> 'LaurentSeries':
        """principal p-th power; p times the valuation must be an integer"""
        p = Fraction(p)
        s = self.strip()
        shifted = p * s.valuation
        if shifted.denominator != 1:
            raise EssentialSingularityError('branch point: exponent {} at valuation {}'.format(p, s.valuation))
        c0 = s.coefficients[0]
        normalized = [c / c0 for c in s.coefficients]
        out = [1]
        for n in range(1, s.precision):
            total = 0
            for k in range(1, n + 1):
                if _is_zero(normalized[k]):
                    continue
                weight = (p + 1) * k - n
                if weight == 0:
                    continue
                total = total + float(weight) * normalized[k] * out[n - k]
            out.append(total * (1.0 / n))
        lead = _fraction_power(c0, p)
        valuation = int(shifted)
        return self._like(valuation, [lead * c for c in out], valuation + s.precision)

    def truncate(self, order: int) -> 'LaurentSeries':
        order = min(order, self.order)
        return self._like(self.valuation, self.coefficients[:max(order - self.valuation, 0)], order)

    def compose(self, inner: 'LaurentSeries') -> 'LaurentSeries':
        """self(inner) where inner has positive valuation; the result lives in inner's variable"""
        inner = inner.strip()
        if inner.valuation < 1:
            raise ValueError('composition needs an inner series of positive valuation')
        base = inner.constant(0, order=inner.order)
        result = base
        powers = {}
        if self.valuation < 0:
            negative = inner.inverse()
            for k in range(self.valuation, 0):
                powers[k] = negative ** (-k)
        running = inner.constant(1, order=inner.order)
        for k in range(0, self.order):
            if k > 0:
                running = running * inner
            if k >= self.valuation:
                powers[k] = running
        for k in range(self.valuation, self.order):
            c = self.coefficients[k - self.valuation]
            if _is_zero(c):
                continue
            result = result + powers[k].scale(c)
        if self.order > 0:
            result = result.truncate(self.order * inner.valuation)
        return result

    def derivative(self) -> 'LaurentSeries':
        """derivative with respect to var"""
        if self.at_infinity:
            # d/dx = -s^2 d/ds with s = 1/x
            coefficients = [-k * c for k, c in zip(range(self.valuation, self.order), self.coefficients)]
            return self._like(self.valuation + 1, coefficients, self.order + 1)
        coefficients = [k * c for k, c in zip(range(self.valuation, self.order), self.coefficients)]
        return self._like(self.valuation - 1, coefficients, self.order - 1)

    def local_coordinate(self, value: complex) -> complex:
        if self.at_infinity:
            return 1 / complex(value)
        return complex(value) - complex(self.center)

    def evaluate_at(self, value: complex) -> complex:
        t = self.local_coordinate(value)
        return sum(complex(c) * t ** k for k, c in zip(range(self.valuation, self.order), self.coefficients))

    def with_variable(self, var: str, center) -> 'LaurentSeries':
        return LaurentSeries(var, center, self.valuation, self.coefficients, self.order)


def residue(s: LaurentSeries) -> complex:
    """
    residue of s d(var): the coefficient of exponent -1 at a finite center, minus the coefficient of 1/var at
    infinity, so that finite residues and the residue at infinity add up to zero
    """
    if s.at_infinity:
        if s.valuation > 1:
            return 0j
        return -s.coefficient(1)
    if s.valuation > -1:
        return 0j
    return s.coefficient(-1)


class _Expander(object):
    def __init__(self, var: str, center, order: int, base: Mapping[str, complex]):
        self.var = var
        self.center = center
        self.order = order
        self.base = base
        self._memo = {}

    def seed(self, value, order=None) -> LaurentSeries:
        order = self.order if order is None else order
        return LaurentSeries(self.var, self.center, 0, (value,), order)

    def __call__(self, e: ex.Expression) -> LaurentSeries:
        key = id(e)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is e:
            return hit[1]
        s = self._expand(e)
        self._memo[key] = (e, s)
        return s

    def _expand(self, e):
        if isinstance(e, ex.Const):
            return self.seed(e.constant)
        if isinstance(e, ex.Var):
            if e.name != self.var:
                try:
                    return self.seed(complex(self.base[e.name]))
                except KeyError:
                    raise UnboundVariableError(e.name)
            if self.center == INFINITY:
                return LaurentSeries(self.var, INFINITY, -1, (1,), self.order)
            c = complex(self.center)
            if c == 0:
                return LaurentSeries(self.var, c, 1, (1,), self.order)
            return LaurentSeries(self.var, c, 0, (c, 1), self.order)
        if isinstance(e, ex.Sum):
            out = self(e.children[0])
            for child in e.children[1:]:
                out = out + self(child)
            return out
        if isinstance(e, ex.Product):
            out = self(e.children[0])
            for child in e.children[1:]:
                out = out * self(child)
            return out
        if isinstance(e, ex.Neg):
            return -self(e.children[0])
        if isinstance(e, ex.Power):
            return self(e.children[0]).strip() ** e.exponent
        if isinstance(e, ex.RationalPower):
            return self(e.children[0]).power_fraction(e.exponent)
        if isinstance(e, ex.Exp):
            return self._exp(self(e.children[0]).strip())
        if isinstance(e, ex.Log):
            return self._log(self(e.children[0]).strip())
        if isinstance(e, ex.Polylog):
            return self._analytic(e, self(e.children[0]).strip())
        raise EssentialSingularityError('expansion of {} nodes is not supported'.format(e.kind))

    def _exp(self, g: LaurentSeries) -> LaurentSeries:
        if g.valuation < 0:
            raise EssentialSingularityError('exp of a series with a pole')
        n_terms = g.order
        gk = [g.coefficient(k) for k in range(n_terms)]
        out = [cmath.exp(complex(gk[0]))]
        for n in range(1, n_terms):
            out.append(sum(k * gk[k] * out[n - k] for k in range(1, n + 1)) / n)
        return LaurentSeries(self.var, self.center, 0, tuple(out), n_terms)

    def _log(self, g: LaurentSeries) -> LaurentSeries:
        if g.valuation != 0:
            raise EssentialSingularityError('log of a series with a zero or pole')
        gk = g.coefficients
        g0 = complex(gk[0])
        out = [cmath.log(g0)]
        for n in range(1, g.precision):
            total = gk[n] - sum(k * out[k] * gk[n - k] for k in range(1, n)) / n
            out.append(total / g0)
        return LaurentSeries(self.var, self.center, 0, tuple(out), g.order)

    def _analytic(self, e: ex.Expression, g: LaurentSeries) -> LaurentSeries:
        """Taylor composition F(g) for a one-argument analytic node"""
        if g.valuation < 0:
            raise EssentialSingularityError('{} of a series with a pole'.format(e.kind))
        g0 = complex(g.coefficient(0))
        dummy = ex.Var('_w')
        node = e.rebuild((dummy,))
        shift = g - g0
        result = self.seed(0, order=g.order)
        running = self.seed(1, order=g.order)
        derivative = node
        for j in range(g.order):
            if j:
                derivative = ex.differentiate(derivative, '_w')
                running = running * shift
            value = ex.evaluate(derivative, {'_w': g0}) / math.factorial(j)
            result = result + running.scale(value)
        return result


def expand(e: ex.Expression, var: str, center, order: int, base: Mapping[str, complex]) -> LaurentSeries:
    """
    Laurent expansion of e in `var` about `center` (a complex number or INFINITY), exact up to exponent order-1
    """
    expander = _Expander(var, center, order + EXPANSION_GUARD, base)
    s = expander(e)
    if s.order < order:
        raise TruncationError('expansion reached order {} of the requested {}'.format(s.order, order))
    return s.truncate(order)


def lagrange_revert(f: LaurentSeries, var: str) -> LaurentSeries:
    """
    compositional inverse g of a series f with valuation one: f(g(r)) = r, g_n = (1/n)[s^(n-1)] (s/f)^n
    """
    f = f.strip()
    if f.valuation != 1:
        raise WrongLeadingTermError('reversion needs a series of valuation one, got {}'.format(f.valuation))
    quotient = LaurentSeries(f.var, f.center, 0, f.coefficients, f.precision).inverse()
    coefficients = []
    running = quotient.constant(1, order=quotient.precision)
    for n in range(1, f.precision + 1):
        running = running * quotient
        coefficients.append(running.coefficient(n - 1) * (1.0 / n))
    return LaurentSeries(var, 0j, 1, tuple(coefficients), f.precision + 1)


def invert_branch(s: LaurentSeries, degree: int, order: int) -> LaurentSeries:
    """
    x as a Laurent series in k at infinity with lambda(x(k)) = k**degree, for s the expansion of lambda at infinity
    with leading term x**degree

    Args:
        s: expansion at INFINITY in the local coordinate 1/x
        degree: ell + 1
        order: exclusive exponent bound of the result in the local coordinate 1/k

    Returns: LaurentSeries in variable 'k' centered at INFINITY
    """
    if not s.at_infinity:
        raise WrongLeadingTermError('branch inversion needs an expansion at infinity')
    s = s.strip()
    if s.valuation != -degree:
        raise WrongLeadingTermError('leading exponent {} does not match degree {}'.format(-s.valuation, degree))
    lead = s.coefficients[0]
    if _is_numeric(lead):
        if abs(lead - 1) > 1e-12:
            raise WrongLeadingTermError('leading coefficient {} is not 1'.format(lead))
    elif not (isinstance(lead, ex.Const) and lead.constant == 1):
        raise WrongLeadingTermError('leading coefficient must be the constant 1')
    n_terms = s.precision
    phi = LaurentSeries('_sigma', 0j, 0, s.coefficients, n_terms)
    rho = phi.power_fraction(Fraction(-1, degree))
    rho = LaurentSeries('_sigma', 0j, 1, rho.coefficients, n_terms + 1)
    sigma = lagrange_revert(rho, '_rho')
    x = sigma.inverse()
    if x.order < order:
        raise TruncationError('branch inversion reached order {} of the requested {}'.format(x.order, order))
    return LaurentSeries('k', INFINITY, x.valuation, x.coefficients, x.order).truncate(order)


def polynomial_at_infinity(coefficients: Sequence, var: str, precision: int) -> LaurentSeries:
    """
    exact expansion at infinity of sum_i coefficients[i] * var**(deg - i) (descending powers, leading first)
    """
    degree = len(coefficients) - 1
    return LaurentSeries(var, INFINITY, -degree, tuple(coefficients), -degree + max(precision, len(coefficients)))
