"""Erdős, Bernays, James and Pall constants of a negative discriminant.

All four come from the same two ingredients: L(1, chi_D), which the class
number formula gives exactly up to pi, and the product over the inert primes
of (1 - p^-2)^-1, which is rebuilt from zeta(2^n)/L(2^n, chi_D) by repeated
squaring of the argument.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import prod

import mpmath
from mpmath import mp, mpf
from sympy import primerange

from models.arith import factorize, kronecker
from models.errors import PrecisionError
from models.forms import class_number, unit_count
from models.genus import Discriminant, v_closed
from models.lfun import (
    GUARD_DIGITS,
    MAX_S,
    BigReal,
    L1,
    as_mpf,
    character,
    dirichlet_L,
    rounding_bound,
    serialized,
    zeta_int,
)

logger = logging.getLogger(__name__)

MIN_RECURSION_DEPTH = 5
ERDOS_METHODS = ("auto", "general", "fundamental")
SHANKS_SCHMID_N = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 16, 20, 24, 27, 64, 96, 256)


class ConstantKind(str, Enum):
    ERDOS = "erdos"
    BERNAYS = "bernays"
    JAMES = "james"
    PALL = "pall"


@dataclass(frozen=True)
class ConstantReport:
    discriminant: Discriminant
    value: BigReal
    kind: ConstantKind
    terms_used: int
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.terms_used < MIN_RECURSION_DEPTH:
            raise ValueError(f"Recursion depth {self.terms_used} is below {MIN_RECURSION_DEPTH}.")

    @property
    def D(self):
        return self.discriminant.D

    @property
    def digits(self):
        return self.value.digits

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "D": self.D,
            "digits": self.digits,
            "value": self.value.to_decimal(),
            "error_bound": self.value.certified_bound(),
            "terms_used": self.terms_used,
            "inputs": dict(self.inputs),
        }


def _fraction_text(q):
    return f"{q.numerator}/{q.denominator}"


def _relative(x):
    return x.error_bound / abs(x.value)


@serialized
@lru_cache(maxsize=1024)
def _minus_product(disc, digits):
    """prod over (D/p) = -1 of (1 - p^-2)^-1 and the recursion depth used.

    With R(s) = zeta(s)/L(s, chi_D) * prod_{q | D} (1 - q^-s) the product is
    prod_{n >= 1} R(2^n)^(1/2^n). Stopping after n factors leaves F(2^(n+1))^(1/2^n)
    whose logarithm is at most 2^(1 - 2^(n+1)) / 2^n.
    """
    chi = character(disc)
    work = digits + 5
    with mp.workdps(digits + GUARD_DIGITS):
        tol = mpf(10) ** -(digits + 10)
        log_total = mpf(0)
        evaluation_error = mpf(0)
        n = 0
        while True:
            n += 1
            s = 2 ** n
            if s > MAX_S:
                raise PrecisionError(f"Euler product for D={disc.D} needs zeta beyond s={MAX_S}.")
            zeta = zeta_int(s, work)
            L = dirichlet_L(s, chi, work)
            ratio = zeta.value / L.value
            for q in disc.prime_divisors:
                ratio *= 1 - mpf(q) ** -s
            log_total += mpmath.log(ratio) / 2 ** n
            evaluation_error += 2 * (_relative(zeta) + _relative(L)) / 2 ** n
            tail = mpf(2) ** (1 - 2 ** (n + 1)) / 2 ** n
            if n >= MIN_RECURSION_DEPTH and tail < tol:
                break
        value = mpmath.exp(log_total)
        error = value * mpmath.expm1(tail + evaluation_error) + rounding_bound(digits)
        logger.debug("Euler product D=%s: depth %s, tail %s", disc.D, n, mpmath.nstr(tail, 3))
        return BigReal(value, digits, error), n


def euler_minus_product(disc, digits=30):
    return _minus_product(Discriminant.of(disc), digits)[0]


@serialized
def direct_euler_product(disc, prime_bound):
    """Prime-by-prime product over p < prime_bound with (D/p) = -1.

    Returns (value, tail_factor) with value <= true product <= value * tail_factor.
    """
    disc = Discriminant.of(disc)
    if prime_bound < 3:
        raise ValueError("direct_euler_product needs prime_bound >= 3.")
    chi = character(disc)
    with mp.workdps(30):
        value = mpf(1)
        for p in primerange(2, prime_bound):
            if chi(p) == -1:
                value /= 1 - mpf(p) ** -2
        return value, mpmath.exp(mpf(1) / (prime_bound - 1))


def _ingredients(disc, digits):
    h = class_number(disc)
    product, depth = _minus_product(disc, digits + 5)
    return h, L1(disc, h, digits + 5), product, depth


def _inputs(disc, h, v=None, **extra):
    inputs = {"h": h, "w": unit_count(disc), "t": disc.t}
    if v is not None:
        inputs["v"] = _fraction_text(v)
    inputs.update(extra)
    return inputs


@serialized
def erdos_number(disc, digits=30, method="auto"):
    """E(D) = v(D)/2^(t+1) * sqrt(L(1, chi_D) phi(|D|)/pi * F) with F the inert product.

    method="fundamental" uses |D|/2^omega * sqrt(L(1, chi_D)/(pi phi(|D|)) * F)
    instead, which only holds when D is fundamental.
    """
    disc = Discriminant.of(disc)
    if method not in ERDOS_METHODS:
        raise ValueError(f"Unknown method {method!r}; choose one of {', '.join(ERDOS_METHODS)}.")
    if method == "fundamental" and not disc.is_fundamental:
        raise ValueError(f"D={disc.D} has conductor {disc.f}; the fundamental formula does not apply.")

    v = v_closed(disc)
    h, l1, product, depth = _ingredients(disc, digits)
    with mp.workdps(digits + GUARD_DIGITS):
        root = mpmath.sqrt(l1.value * product.value / mp.pi)
        if method == "fundamental":
            value = mpf(disc.abs_value) / 2 ** disc.omega * root / mpmath.sqrt(disc.phi_absD)
        else:
            value = as_mpf(v) / 2 ** (disc.t + 1) * root * mpmath.sqrt(disc.phi_absD)
        error = value * (_relative(l1) + _relative(product)) + rounding_bound(digits)
        result = BigReal(value, digits, error)
    return ConstantReport(
        discriminant=disc,
        value=result,
        kind=ConstantKind.ERDOS,
        terms_used=depth,
        inputs=_inputs(disc, h, v, method=method),
    )


@serialized
def bernays_C(disc, digits=30):
    """C(D) = 2 E(D)/sqrt|D|, the constant in B_f(x) ~ C x/sqrt(log x)."""
    disc = Discriminant.of(disc)
    erdos = erdos_number(disc, digits + 2)
    with mp.workdps(digits + GUARD_DIGITS):
        scale = 2 / mpmath.sqrt(disc.abs_value)
        value = BigReal(
            erdos.value.value * scale,
            digits,
            erdos.value.error_bound * scale + rounding_bound(digits),
        )
    return ConstantReport(disc, value, ConstantKind.BERNAYS, erdos.terms_used, dict(erdos.inputs))


@serialized
def james_J(disc, digits=30):
    """J(D) with pi J^2 = phi(|D|)/|D| * L(1, chi_D) * F."""
    disc = Discriminant.of(disc)
    h, l1, product, depth = _ingredients(disc, digits)
    with mp.workdps(digits + GUARD_DIGITS):
        value = mpmath.sqrt(mpf(disc.phi_absD) / disc.abs_value * l1.value * product.value / mp.pi)
        error = value * (_relative(l1) + _relative(product)) + rounding_bound(digits)
        result = BigReal(value, digits, error)
    return ConstantReport(disc, result, ConstantKind.JAMES, depth, _inputs(disc, h))


def _pall_primes(disc):
    D = disc.D
    return tuple(
        p for p in disc.prime_divisors
        if (p > 2 and D % (p * p) == 0) or (p == 2 and D % 16 in (0, 4))
    )


def _conductor_correction(disc):
    # D = p^(2k) D' with k = nu_p(f), so D' stays a discriminant
    correction = Fraction(1)
    conductor = factorize(disc.f)
    for p, k in conductor.factors:
        reduced = disc.D // p ** (2 * k)
        if kronecker(reduced, p) != -1:
            correction *= 1 + Fraction(1, p ** (2 * k + 1))
    return correction


@serialized
def pall_P(disc, digits=30):
    """Pall's constant P(D); equals 2^t(D) C(D) when D is fundamental.

    Values for non-fundamental D are reported with inputs["experimental"] set.
    """
    disc = Discriminant.of(disc)
    h, l1, product, depth = _ingredients(disc, digits)
    special = _pall_primes(disc)
    w = unit_count(disc)

    rational = Fraction(2 * h, w)
    rational *= prod((1 - Fraction(1, p) for p in special), start=Fraction(1))
    rational /= prod((1 - Fraction(1, p) for p in disc.prime_divisors if p not in special), start=Fraction(1))
    outer = prod((1 / (1 - Fraction(1, p * p)) for p in special), start=Fraction(1))
    outer *= _conductor_correction(disc)

    with mp.workdps(digits + GUARD_DIGITS):
        b0 = mpmath.sqrt(as_mpf(rational) * product.value / mpmath.sqrt(disc.abs_value))
        value = b0 * as_mpf(outer)
        error = value * _relative(product) + rounding_bound(digits)
        result = BigReal(value, digits, error)
    inputs = _inputs(disc, h, experimental=not disc.is_fundamental)
    return ConstantReport(disc, result, ConstantKind.PALL, depth, inputs)


CONSTANT_FUNCTIONS = {
    ConstantKind.ERDOS: erdos_number,
    ConstantKind.BERNAYS: bernays_C,
    ConstantKind.JAMES: james_J,
    ConstantKind.PALL: pall_P,
}


def compute_constant(kind, disc, digits=30):
    return CONSTANT_FUNCTIONS[ConstantKind(kind)](disc, digits)


def shanks_schmid_table(digits=28):
    """b_n = C(X^2 + n Y^2) = C(-4n) for the tabulated n."""
    return [(n, bernays_C(-4 * n, digits)) for n in SHANKS_SCHMID_N]


@serialized
def landau_ramanujan(digits=30):
    """(1/sqrt 2) prod_{p = 3 mod 4} (1 - p^-2)^(-1/2), which is b_1."""
    product = euler_minus_product(-4, digits + 5)
    with mp.workdps(digits + GUARD_DIGITS):
        value = mpmath.sqrt(product.value / 2)
        return BigReal(value, digits, value * _relative(product) + rounding_bound(digits))
