"""
Immutable expression trees over complex scalars.

Trees are built through the smart constructors (add, mul, power, ...) or the
overloaded operators, differentiated exactly with `differentiate`, and
evaluated at a Point with `evaluate` or a reusable `Evaluator`.
"""
import cmath
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from owd.exceptions import NumericDomainError, UnboundVariableError
from owd.special import functions as sf

Point = Dict[str, complex]

MAX_THETA_ORDER = 4


class Expression(object):
    kind = 'expression'

    def __init__(self, *children):
        self.children = tuple(children)
        self._derivatives = {}
        self._free = None

    @property
    def free_variables(self) -> frozenset:
        if self._free is None:
            free = frozenset()
            for child in self.children:
                free = free | child.free_variables
            self._free = free
        return self._free

    def depends_on(self, name: str) -> bool:
        return name in self.free_variables

    def rebuild(self, children):
        raise NotImplementedError

    def derive(self, name: str) -> 'Expression':
        raise NotImplementedError

    def value(self, args) -> complex:
        raise NotImplementedError

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, negate(wrap(other)))

    def __rsub__(self, other):
        return add(other, negate(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(wrap(other), -1))

    def __rtruediv__(self, other):
        return mul(other, power(self, -1))

    def __neg__(self):
        return negate(self)

    def __pow__(self, exponent):
        if isinstance(exponent, Fraction):
            return rational_power(self, exponent)
        if isinstance(exponent, numbers.Integral):
            return power(self, int(exponent))
        raise TypeError('only integer and Fraction exponents are supported')

    def __repr__(self):
        return '{}({})'.format(self.kind, ', '.join(repr(c) for c in self.children))


class Const(Expression):
    kind = 'const'

    def __init__(self, value):
        super(Const, self).__init__()
        self.constant = complex(value)
        self._free = frozenset()

    def rebuild(self, children):
        return self

    def derive(self, name):
        return ZERO

    def value(self, args):
        return self.constant

    def __repr__(self):
        c = self.constant
        return repr(c.real) if c.imag == 0 else repr(c)


class Var(Expression):
    kind = 'var'

    def __init__(self, name: str):
        super(Var, self).__init__()
        self.name = name
        self._free = frozenset([name])

    def rebuild(self, children):
        return self

    def derive(self, name):
        return ONE if name == self.name else ZERO

    def __repr__(self):
        return self.name


ZERO = Const(0)
ONE = Const(1)


class Sum(Expression):
    kind = 'sum'

    def rebuild(self, children):
        return add(*children)

    def derive(self, name):
        return add(*[differentiate(c, name) for c in self.children])

    def value(self, args):
        return sum(args, 0j)


class Product(Expression):
    kind = 'product'

    def rebuild(self, children):
        return mul(*children)

    def derive(self, name):
        terms = []
        for i, child in enumerate(self.children):
            d = differentiate(child, name)
            if d is ZERO:
                continue
            terms.append(mul(*self.children[:i], d, *self.children[i + 1:]))
        return add(*terms)

    def value(self, args):
        out = 1 + 0j
        for a in args:
            out *= a
        return out


class Neg(Expression):
    kind = 'neg'

    def rebuild(self, children):
        return negate(children[0])

    def derive(self, name):
        return negate(differentiate(self.children[0], name))

    def value(self, args):
        return -args[0]


class Power(Expression):
    kind = 'power'

    def __init__(self, base, exponent: int):
        super(Power, self).__init__(base)
        self.exponent = exponent

    def rebuild(self, children):
        return power(children[0], self.exponent)

    def derive(self, name):
        base = self.children[0]
        return mul(self.exponent, power(base, self.exponent - 1), differentiate(base, name))

    def value(self, args):
        return args[0] ** self.exponent

    def __repr__(self):
        return 'power({!r}, {})'.format(self.children[0], self.exponent)


class RationalPower(Expression):
    """principal branch of base**exponent"""
    kind = 'rational_power'

    def __init__(self, base, exponent: Fraction):
        super(RationalPower, self).__init__(base)
        self.exponent = exponent

    def rebuild(self, children):
        return rational_power(children[0], self.exponent)

    def derive(self, name):
        base = self.children[0]
        return mul(complex(self.exponent), rational_power(base, self.exponent - 1), differentiate(base, name))

    def value(self, args):
        if args[0] == 0:
            if self.exponent > 0:
                return 0j
            raise ZeroDivisionError
        return cmath.exp(float(self.exponent) * cmath.log(args[0]))


class Exp(Expression):
    kind = 'exp'

    def rebuild(self, children):
        return exp(children[0])

    def derive(self, name):
        return mul(self, differentiate(self.children[0], name))

    def value(self, args):
        return cmath.exp(args[0])


class Log(Expression):
    kind = 'log'

    def rebuild(self, children):
        return log(children[0])

    def derive(self, name):
        arg = self.children[0]
        return mul(differentiate(arg, name), power(arg, -1))

    def value(self, args):
        return cmath.log(args[0])


class Polylog(Expression):
    kind = 'polylog'

    def __init__(self, order: int, arg):
        super(Polylog, self).__init__(arg)
        self.order = order

    def rebuild(self, children):
        return polylog(self.order, children[0])

    def derive(self, name):
        arg = self.children[0]
        return mul(polylog(self.order - 1, arg), differentiate(arg, name), power(arg, -1))

    def value(self, args):
        return sf.li(self.order, args[0])

    def __repr__(self):
        return 'li{}({!r})'.format(self.order, self.children[0])


class Theta1(Expression):
    """k-th x-derivative of theta_1(x; tau)"""
    kind = 'theta1'

    def __init__(self, order: int, x, tau):
        super(Theta1, self).__init__(x, tau)
        self.order = order

    def rebuild(self, children):
        return theta1(self.order, children[0], children[1])

    def derive(self, name):
        x, tau = self.children
        # heat equation: 4 pi i d/dtau theta = theta''
        return add(mul(Theta1(self.order + 1, x, tau), differentiate(x, name)),
                   mul(1 / (4j * math.pi), Theta1(self.order + 2, x, tau), differentiate(tau, name)))

    def value(self, args):
        return sf.theta1(self.order, args[0], sf.theta_context(args[1]))

    def __repr__(self):
        return 'theta1_{}({!r}, {!r})'.format(self.order, *self.children)


class EtaLog(Expression):
    kind = 'dedekind_eta_log'

    def __init__(self, tau, order: int = 0):
        super(EtaLog, self).__init__(tau)
        self.order = order

    def rebuild(self, children):
        return EtaLog(children[0], self.order)

    def derive(self, name):
        tau = self.children[0]
        return mul(EtaLog(tau, self.order + 1), differentiate(tau, name))

    def value(self, args):
        return sf.dedekind_eta_log(args[0], self.order)


class EllipticLi(Expression):
    """tau_order-th tau-derivative of the elliptic polylogarithm of order n"""
    kind = 'elliptic_li'

    def __init__(self, order: int, u, tau, tau_order: int = 0):
        super(EllipticLi, self).__init__(u, tau)
        self.order = order
        self.tau_order = tau_order

    def rebuild(self, children):
        return elliptic_li(self.order, children[0], children[1], self.tau_order)

    def derive(self, name):
        u, tau = self.children
        du = differentiate(u, name)
        dtau = differentiate(tau, name)
        u_part = mul(sf.TWO_PI_I, EllipticLi(self.order - 1, u, tau, self.tau_order))
        if self.tau_order == 0:
            u_part = add(u_part, sf.elliptic_li_u_constant(self.order))
        return add(mul(u_part, du), mul(EllipticLi(self.order, u, tau, self.tau_order + 1), dtau))

    def value(self, args):
        return sf.elliptic_li(self.order, args[0], args[1], self.tau_order)

    def __repr__(self):
        return 'elliptic_li{}_{}({!r}, {!r})'.format(self.order, self.tau_order, *self.children)


def wrap(value) -> Expression:
    if isinstance(value, Expression):
        return value
    if isinstance(value, numbers.Number):
        return Const(value) if value != 0 else ZERO
    raise TypeError('cannot build an expression from {!r}'.format(value))


def const(value) -> Expression:
    return wrap(complex(value))


def var(name: str) -> Var:
    return Var(name)


def add(*terms) -> Expression:
    flat = []
    constant = 0j
    stack = [wrap(t) for t in terms]
    for term in stack:
        if isinstance(term, Sum):
            for child in term.children:
                if isinstance(child, Const):
                    constant += child.constant
                else:
                    flat.append(child)
        elif isinstance(term, Const):
            constant += term.constant
        else:
            flat.append(term)
    if constant != 0:
        flat.append(Const(constant))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(*flat)


def mul(*factors) -> Expression:
    flat = []
    constant = 1 + 0j
    for factor in (wrap(f) for f in factors):
        children = factor.children if isinstance(factor, Product) else (factor,)
        for child in children:
            if isinstance(child, Const):
                constant *= child.constant
            else:
                flat.append(child)
    if constant == 0:
        return ZERO
    if not flat:
        return Const(constant)
    if constant != 1:
        flat.insert(0, Const(constant))
    if len(flat) == 1:
        return flat[0]
    return Product(*flat)


def negate(e) -> Expression:
    e = wrap(e)
    if isinstance(e, Const):
        return wrap(-e.constant)
    if isinstance(e, Neg):
        return e.children[0]
    return Neg(e)


def power(base, exponent: int) -> Expression:
    base = wrap(base)
    exponent = int(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const) and not (base.constant == 0 and exponent < 0):
        return Const(base.constant ** exponent)
    if isinstance(base, Power):
        return power(base.children[0], base.exponent * exponent)
    return Power(base, exponent)


def rational_power(base, exponent) -> Expression:
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return power(base, exponent.numerator)
    base = wrap(base)
    if isinstance(base, Const) and base.constant != 0:
        return Const(cmath.exp(float(exponent) * cmath.log(base.constant)))
    return RationalPower(base, exponent)


def exp(arg) -> Expression:
    arg = wrap(arg)
    if isinstance(arg, Const):
        return Const(cmath.exp(arg.constant))
    return Exp(arg)


def log(arg) -> Expression:
    arg = wrap(arg)
    if isinstance(arg, Const) and arg.constant != 0:
        return wrap(cmath.log(arg.constant))
    return Log(arg)


def polylog(order: int, arg) -> Expression:
    return Polylog(order, wrap(arg))


def li2(arg) -> Expression:
    return polylog(2, arg)


def li3(arg) -> Expression:
    return polylog(3, arg)


def theta1(order: int, x, tau) -> Expression:
    return Theta1(order, wrap(x), wrap(tau))


def dedekind_eta_log(tau) -> Expression:
    return EtaLog(wrap(tau))


def elliptic_li(order: int, u, tau, tau_order: int = 0) -> Expression:
    return EllipticLi(order, wrap(u), wrap(tau), tau_order)


def differentiate(e: Expression, name: str) -> Expression:
    """
    exact partial derivative of `e` with respect to the variable `name`; derivatives are cached on the node
    """
    if not e.depends_on(name):
        return ZERO
    cached = e._derivatives.get(name)
    if cached is None:
        cached = e.derive(name)
        e._derivatives[name] = cached
    return cached


def substitute(e: Expression, mapping: Mapping[str, object]) -> Expression:
    """replaces variables by expressions or constants"""
    replacements = {name: wrap(value) for name, value in mapping.items()}
    targets = frozenset(replacements)
    memo = {}

    def walk(node):
        key = id(node)
        if key in memo:
            return memo[key][1]
        if not (node.free_variables & targets):
            out = node
        elif isinstance(node, Var):
            out = replacements[node.name]
        else:
            out = node.rebuild(tuple(walk(c) for c in node.children))
        memo[key] = (node, out)
        return out

    return walk(e)


def max_theta_order(e: Expression) -> int:
    seen = set()
    best = -1
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Theta1):
            best = max(best, node.order)
        stack.extend(node.children)
    return best


class Evaluator(object):
    """
    Evaluates any number of expressions at one point, sharing the values of common sub-trees.
    """

    def __init__(self, point: Mapping[str, complex]):
        self.point = point
        self._memo = {}

    def __call__(self, e: Expression) -> complex:
        key = id(e)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is e:
            return hit[1]
        if isinstance(e, Var):
            try:
                value = complex(self.point[e.name])
            except KeyError:
                raise UnboundVariableError(e.name)
        elif isinstance(e, Const):
            return e.constant
        else:
            args = [self(c) for c in e.children]
            try:
                value = e.value(args)
            except (ZeroDivisionError, OverflowError, ValueError) as exc:
                raise NumericDomainError(e.kind, str(exc))
            if not cmath.isfinite(value):
                raise NumericDomainError(e.kind)
        # the node is kept alive with its value so ids are never reused inside one evaluator
        self._memo[key] = (e, value)
        return value


def evaluate(e: Expression, p: Mapping[str, complex]) -> complex:
    return Evaluator(p)(e)


@dataclass(frozen=True)
class VectorField:
    components: Tuple[Tuple[str, Expression], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> 'VectorField':
        return cls(tuple((name, wrap(coefficient)) for name, coefficient in mapping.items()))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.components)

    def coefficient(self, name: str) -> Expression:
        for n, c in self.components:
            if n == name:
                return c
        return ZERO

    def without(self, name: str) -> 'VectorField':
        return VectorField(tuple((n, c) for n, c in self.components if n != name))

    def values(self, point: Mapping[str, complex], names: Iterable[str], evaluator: Optional[Evaluator] = None):
        ev = evaluator or Evaluator(point)
        return [ev(self.coefficient(n)) for n in names]


def lie_derivative(V: VectorField, e: Expression) -> Expression:
    return add(*[mul(coefficient, differentiate(e, name)) for name, coefficient in V.components])


def gradient(e: Expression, names: Iterable[str]):
    return [differentiate(e, n) for n in names]


def hessian(e: Expression, names: Iterable[str]):
    names = list(names)
    first = gradient(e, names)
    return [[differentiate(first[i], names[j]) for j in range(len(names))] for i in range(len(names))]
