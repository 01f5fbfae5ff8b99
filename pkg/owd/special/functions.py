"""
Numerical special functions used by the transcendental model families:
polylogarithms of integer order, Jacobi's first theta function with its
x-derivatives, the logarithm of the Dedekind eta function and the elliptic
polylogarithms built on the q-series of the torus.

Every function works on Python complex scalars; the theta series is summed
with numpy over the truncation window of a ThetaContext.
"""
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from owd.exceptions import NumericDomainError

TWO_PI_I = 2j * math.pi
SERIES_TOLERANCE = 1e-17
THETA_TOLERANCE = 1e-18

BERNOULLI = (Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30))


def bernoulli(n: int) -> Fraction:
    if n < 0 or n >= len(BERNOULLI):
        raise ValueError('Bernoulli number B_{} is not tabulated'.format(n))
    return BERNOULLI[n]


@lru_cache(maxsize=None)
def eulerian_numbers(n: int):
    return tuple(sum((-1) ** j * math.comb(n + 1, j) * (k + 1 - j) ** n for j in range(k + 1))
                 for k in range(n))


def li(n: int, z: complex) -> complex:
    """
    polylogarithm Li_n(z) on the principal branch.

    Non-positive orders are rational functions of z, Li_1 is -log(1 - z), and higher orders are summed directly
    inside |z| <= 1/2 and handed to mpmath elsewhere.
    """
    z = complex(z)
    if n <= 0:
        if z == 1:
            raise NumericDomainError('li{}'.format(n), 'pole at z = 1')
        if n == 0:
            return z / (1 - z)
        m = -n
        numerator = sum(a * z ** k for k, a in enumerate(eulerian_numbers(m)))
        return z * numerator / (1 - z) ** (m + 1)
    if n == 1:
        if z == 1:
            raise NumericDomainError('li1', 'logarithmic singularity at z = 1')
        return -cmath.log(1 - z)
    if z == 0:
        return 0j
    if abs(z) <= 0.5:
        total = 0j
        power = z
        k = 1
        while True:
            term = power / k ** n
            total += term
            if abs(term) < SERIES_TOLERANCE:
                break
            k += 1
            power *= z
        return total
    return complex(mpmath.polylog(n, z))


@dataclass(frozen=True)
class ThetaContext:
    tau: complex
    q: complex
    truncation: int

    def window(self, x: complex) -> int:
        """truncation index widened for the growth of exp(i pi (2n+1) x) away from the real axis"""
        return self.truncation + int(math.ceil(abs(x.imag) / self.tau.imag)) + 2


@lru_cache(maxsize=64)
def theta_context(tau: complex) -> ThetaContext:
    tau = complex(tau)
    if tau.imag <= 0:
        raise NumericDomainError('theta1', 'Im tau must be positive, got {}'.format(tau))
    q = cmath.exp(1j * math.pi * tau)
    # |q|^((N+1/2)^2) < 1e-18
    bound = math.log(THETA_TOLERANCE) / math.log(abs(q))
    truncation = max(1, int(math.ceil(math.sqrt(bound) - 0.5)))
    return ThetaContext(tau=tau, q=q, truncation=truncation)


def theta1(k: int, x: complex, ctx: ThetaContext, tau_order: int = 0) -> complex:
    """
    k-th x-derivative of theta_1(x; tau) = -i sum_n (-1)^n q^((n+1/2)^2) exp(i pi (2n+1) x), differentiated term by
    term; `tau_order` adds term-wise tau-derivatives.
    """
    x = complex(x)
    window = ctx.window(x)
    n = np.arange(-window, window + 1)
    half = n + 0.5
    odd = 2 * n + 1
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    terms = signs * np.exp(1j * math.pi * ctx.tau * half ** 2 + 1j * math.pi * odd * x)
    if k:
        terms = terms * (1j * math.pi * odd) ** k
    if tau_order:
        terms = terms * (1j * math.pi * half ** 2) ** tau_order
    value = complex(-1j * terms.sum())
    if not cmath.isfinite(value):
        raise NumericDomainError('theta1', 'x = {}'.format(x))
    return value


def dedekind_eta_log(tau: complex, order: int = 0) -> complex:
    """
    log eta(tau) = i pi tau / 12 + sum_{n>=1} log(1 - Q^n), Q = exp(2 pi i tau), or its `order`-th tau-derivative
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise NumericDomainError('dedekind_eta_log', 'Im tau must be positive')
    Q = cmath.exp(TWO_PI_I * tau)
    if order == 0:
        total = 1j * math.pi * tau / 12
    elif order == 1:
        total = 1j * math.pi / 12
    else:
        total = 0j
    n = 1
    while True:
        Qn = Q ** n
        if order == 0:
            term = cmath.log(1 - Qn)
        else:
            term = -(TWO_PI_I * n) ** order * li(1 - order, Qn)
        total += term
        if abs(term) < SERIES_TOLERANCE and abs(Qn) < SERIES_TOLERANCE:
            break
        n += 1
    return total


def chi(n: int, u: complex, tau: complex, tau_order: int = 0) -> complex:
    """Bernoulli correction of the elliptic polylogarithm and its tau-derivatives."""
    if n < 0:
        return 0j
    total = 0j
    for k in range(tau_order, n + 1):
        falling = math.factorial(k) // math.factorial(k - tau_order)
        coefficient = float(bernoulli(k + 1)) * falling / (math.factorial(n - k) * math.factorial(k + 1))
        total += coefficient * u ** (n - k) * tau ** (k - tau_order)
    total *= TWO_PI_I ** n
    if tau_order == 0:
        total += (-1) ** (n - 1) * float(bernoulli(n)) / (2 * math.factorial(n))
    return total


def bernoulli_polynomial(n: int, x: complex) -> complex:
    return sum(math.comb(n, k) * float(bernoulli(k)) * x ** (n - k) for k in range(n + 1))


def _q_series(n: int, u: complex, tau: complex, m: int) -> complex:
    """both k-sums of the elliptic polylogarithm of order n, differentiated m times in tau"""
    order = n - m
    total = 0j
    sign = (-1) ** (n - 1)
    k = 0 if m == 0 else 1
    while True:
        weight = (TWO_PI_I * k) ** m
        term = weight * li(order, cmath.exp(TWO_PI_I * (u + k * tau)))
        if k >= 1:
            term += sign * weight * li(order, cmath.exp(-TWO_PI_I * (u - k * tau)))
        total += term
        if k > m and abs(term) < SERIES_TOLERANCE:
            break
        k += 1
        if k > 400:
            raise NumericDomainError('elliptic_li', 'series did not settle for u = {}, tau = {}'.format(u, tau))
    return total


def _shift_jump(n: int, v: complex, m: int) -> complex:
    """
    m-th derivative of the jump S_n(v + tau) - S_n(v) = (2 pi i)^n / n! B_n(v - N) of the q-series, where N is the
    integer with 0 < Re(v - N) <= 1 (the principal branch of the polylogarithm inversion formula)
    """
    if n < 0 or m > n:
        return 0j
    shifted = v - (math.ceil(v.real) - 1)
    return TWO_PI_I ** n / math.factorial(n - m) * bernoulli_polynomial(n - m, shifted)


def elliptic_li(n: int, u: complex, tau: complex, tau_order: int = 0) -> complex:
    """
    elliptic polylogarithm

        sum_{k>=0} Li_n(e^{2 pi i (u + k tau)}) + (-1)^(n-1) sum_{k>=1} Li_n(e^{-2 pi i (u - k tau)}) - chi_n(u; tau)

    or its `tau_order`-th tau-derivative, obtained term by term. Each term is taken on the principal branch of Li_n,
    so values of order n >= 1 are defined up to the branch conventions of the individual logarithms; orders n <= 0
    are single valued.

    The q-series S_n is summed at v = u - M tau with |Im v| <= Im tau / 2 and carried back with the shift
    S_n(v + tau) = S_n(v) + (2 pi i)^n / n! B_n(v - N), which is exact on the principal branch. At fixed u the
    point v moves with tau, so each tau-derivative also picks up -M d/dv = -2 pi i M on the series order.
    """
    u = complex(u)
    tau = complex(tau)
    m = tau_order
    shift = int(round(u.imag / tau.imag))
    if shift == 0:
        return _q_series(n, u, tau, m) - chi(n, u, tau, m)
    v = u - shift * tau
    total = sum(math.comb(m, i) * (-shift * TWO_PI_I) ** i * _q_series(n - i, v, tau, m - i) for i in range(m + 1))
    # u + p tau for the p strips crossed between v and u
    if shift > 0:
        crossed = [(1, p) for p in range(-shift, 0)]
    else:
        crossed = [(-1, p) for p in range(0, -shift)]
    for sign, p in crossed:
        total += sign * p ** m * _shift_jump(n, u + p * tau, m)
    return total - chi(n, u, tau, m)


def elliptic_li_u_constant(n: int) -> complex:
    """constant in d/du Li_n = 2 pi i Li_{n-1} + pi i^(2n+1) B_{n-1}/(n-1)!"""
    if n < 1:
        return 0j
    return math.pi * (1j ** (2 * n + 1)) * float(bernoulli(n - 1)) / math.factorial(n - 1)


def phi3(w: complex, tau: complex) -> complex:
    return elliptic_li(3, w, tau) - elliptic_li(3, 0, tau)
