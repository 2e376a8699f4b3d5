"""Arbitrary precision zeta and Dirichlet L-values at integer arguments.

Every public function returns a BigReal whose error_bound covers both the
truncation of the series and the rounding of the working precision.
L(s, chi_D) is assembled from Hurwitz sums over the residues mod |D|, which
works the same way for primitive and imprimitive Kronecker characters.
"""
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, wraps
from math import factorial

import mpmath
from mpmath import mp, mpf

from models.arith import bernoulli, kronecker
from models.errors import PrecisionError
from models.forms import class_number, unit_count
from models.genus import Discriminant

logger = logging.getLogger(__name__)

GUARD_DIGITS = 15
MAX_S = 512
MAX_PI_DIGITS = 200
BERNOULLI_ROUTE_MAX_S = 64
EM_MAX_ORDER = 250

# mpmath keeps one working precision per process; everything that changes or
# reads it runs under this lock, and it is taken outside every lru_cache.
PRECISION_LOCK = threading.RLock()


def serialized(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        with PRECISION_LOCK:
            return func(*args, **kwargs)

    return wrapper


@dataclass(frozen=True)
class BigReal:
    value: mpf
    digits: int
    error_bound: mpf

    def __post_init__(self):
        if self.digits < 1:
            raise ValueError("A BigReal needs at least one digit.")
        # rounding to `digits` places must stay inside the published 10^-digits
        with PRECISION_LOCK, mp.workdps(20):
            loose = self.error_bound * 2 * mpf(10) ** self.digits > 1
        if loose:
            raise PrecisionError(
                f"Error bound {mpmath.nstr(self.error_bound, 3)} does not certify {self.digits} digits."
            )

    @serialized
    def to_decimal(self, digits=None):
        """Fixed-point string rounded to `digits` places after the point."""
        digits = self.digits if digits is None else digits
        extra = max(0, int(mpmath.mag(self.value)) // 3) if self.value else 0
        with mp.workdps(digits + GUARD_DIGITS + extra):
            scaled = int(mpmath.nint(self.value * mpf(10) ** digits))
        sign = "-" if scaled < 0 else ""
        whole, frac = divmod(abs(scaled), 10 ** digits)
        return f"{sign}{whole}.{frac:0{digits}d}"

    def certified_bound(self):
        """The bound on the rounded string: 10^-digits in fixed-point form."""
        return "0." + "0" * (self.digits - 1) + "1"

    @serialized
    def rescaled(self, factor, digits=None):
        """self * factor for an exact positive factor; the error scales with it."""
        digits = self.digits if digits is None else digits
        with mp.workdps(digits + GUARD_DIGITS):
            factor = mpf(factor)
            return BigReal(self.value * factor, digits, self.error_bound * factor + rounding_bound(digits))

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return self.to_decimal()


@dataclass(frozen=True)
class DirichletCharacterD:
    discriminant: Discriminant
    values: tuple

    @property
    def modulus(self):
        return self.discriminant.abs_value

    def __call__(self, n):
        return self.values[n % self.modulus]


@lru_cache(maxsize=256)
def character(disc):
    """The Kronecker character a -> (D/a), tabulated on one period."""
    disc = Discriminant.of(disc)
    q = disc.abs_value
    values = tuple(kronecker(disc.D, a) if a else 0 for a in range(q))
    return DirichletCharacterD(discriminant=disc, values=values)


def rounding_bound(digits):
    return mpf(10) ** -(digits + GUARD_DIGITS - 4)


def _tolerance(digits):
    return mpf(10) ** -(digits + 10)


def _check_s(s):
    if not isinstance(s, int) or s < 2 or s > MAX_S:
        raise ValueError(f"Integer argument s must lie in [2, {MAX_S}], got {s}.")


@lru_cache(maxsize=None)
def _bernoulli_over_factorial(j):
    return bernoulli(2 * j) / factorial(2 * j)


def as_mpf(fraction):
    return mpf(fraction.numerator) / fraction.denominator


def _em_shift(s, digits):
    return max(10, math.ceil(0.9 * (digits + 10)) + math.ceil(s / math.pi))


def _progression_sum(s, a, q, tol, shift):
    """Sum of (k q + a)^-s over k >= 0 and a bound on the neglected part.

    Terms are summed directly until the integral tail drops below tol; failing
    that, Euler-Maclaurin is applied at k = shift. For real s > 1 and a > 0 all
    even derivatives of the summand are positive, so the remainder after the
    last correction is bounded by the first omitted one.
    """
    a = mpf(a)
    total = mpf(0)
    for k in range(shift):
        y = k * q + a
        term = y ** -s
        total += term
        tail = term * y / (q * (s - 1))
        if tail < tol:
            return total, tail

    y = shift * q + a
    y_pow = y ** -s
    total += y_pow * y / (q * (s - 1)) + y_pow / 2
    rising = mpf(s)
    factor = y_pow * q / y
    ratio = (q / y) ** 2
    previous = None
    for j in range(1, EM_MAX_ORDER + 1):
        term = as_mpf(_bernoulli_over_factorial(j)) * rising * factor
        size = abs(term)
        if size < tol:
            logger.debug("Euler-Maclaurin s=%s a=%s q=%s: shift %s, order %s", s, a, q, shift, j - 1)
            return total, size
        if previous is not None and size > previous:
            break
        total += term
        previous = size
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        factor *= ratio
    raise PrecisionError(f"Euler-Maclaurin did not reach {mpmath.nstr(tol, 3)} for s={s}, q={q}.")


@serialized
def pi_const(digits):
    if not 1 <= digits <= MAX_PI_DIGITS:
        raise ValueError(f"pi is available to at most {MAX_PI_DIGITS} digits.")
    with mp.workdps(digits + GUARD_DIGITS):
        return BigReal(+mp.pi, digits, rounding_bound(digits))


@serialized
def hurwitz_zeta(s, x, digits):
    """zeta(s, x) = sum over k >= 0 of (k + x)^-s for rational x in (0, 1]."""
    _check_s(s)
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"Hurwitz parameter must lie in (0, 1], got {x}.")
    magnitude = math.ceil(s * math.log10(x.denominator / x.numerator))
    with mp.workdps(digits + GUARD_DIGITS + magnitude):
        value, truncation = _progression_sum(s, as_mpf(x), 1, _tolerance(digits), _em_shift(s, digits))
        return BigReal(+value, digits, truncation + rounding_bound(digits))


@serialized
@lru_cache(maxsize=512)
def zeta_int(s, digits, method="auto"):
    _check_s(s)
    if method == "auto":
        method = "bernoulli" if s % 2 == 0 and s <= BERNOULLI_ROUTE_MAX_S else "euler_maclaurin"
    if method == "euler_maclaurin":
        return hurwitz_zeta(s, 1, digits)
    if method != "bernoulli":
        raise ValueError(f"Unknown zeta method {method!r}.")
    if s % 2:
        raise ValueError("The Bernoulli route only gives zeta at even integers.")
    with mp.workdps(digits + GUARD_DIGITS):
        b = abs(bernoulli(s))
        value = as_mpf(b) * (2 * mp.pi) ** s / (2 * mpmath.factorial(s))
        return BigReal(value, digits, rounding_bound(digits))


@serialized
def dirichlet_L(s, chi, digits):
    """L(s, chi_D) as a combination of Hurwitz values over the residues mod |D|."""
    _check_s(s)
    q = chi.modulus
    with mp.workdps(digits + GUARD_DIGITS):
        tol = _tolerance(digits) / q
        shift = _em_shift(s, digits)
        total = mpf(0)
        error = mpf(0)
        for a in range(1, q):
            sign = chi.values[a]
            if not sign:
                continue
            part, truncation = _progression_sum(s, a, q, tol, shift)
            total += part if sign > 0 else -part
            error += truncation
        return BigReal(+total, digits, error + rounding_bound(digits))


@serialized
def L1(disc, h=None, digits=30):
    """L(1, chi_D) from the class number formula 2 pi h / (w sqrt|D|)."""
    disc = Discriminant.of(disc)
    if h is None:
        h = class_number(disc)
    w = unit_count(disc)
    with mp.workdps(digits + GUARD_DIGITS):
        value = 2 * mp.pi * h / (w * mpmath.sqrt(disc.abs_value))
        return BigReal(value, digits, rounding_bound(digits))
