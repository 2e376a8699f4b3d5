"""Genus-theoretic counting: t(D), the genus representation count g(n, D) and v(D)."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, prod

from models.arith import FactoredInt, discriminant_decompose, factorize, kronecker


def _t_from(D, omega):
    if D % 32 == 0:
        t = omega
    elif D % 16 == 4:
        t = omega - 2
    else:
        t = omega - 1
    assert t >= 0, f"t({D}) came out negative; {D} cannot be a discriminant"
    return t


@dataclass(frozen=True)
class Discriminant:
    D: int
    f: int
    d0: int
    omega: int
    t: int
    phi_absD: int
    factored: FactoredInt = field(repr=False, compare=False)

    @classmethod
    def of(cls, D):
        if isinstance(D, cls):
            return D
        return _discriminant(D)

    @property
    def abs_value(self):
        return -self.D

    @property
    def is_fundamental(self):
        return self.f == 1

    @property
    def prime_divisors(self):
        return self.factored.primes

    @property
    def odd_part(self):
        return self.factored.odd_part

    def divided_by_square(self, m):
        if self.f % m:
            raise ValueError(f"{m} does not divide the conductor {self.f} of {self.D}.")
        return Discriminant.of(self.D // (m * m))

    def __str__(self):
        return str(self.D)


@lru_cache(maxsize=16384)
def _discriminant(D):
    parts = discriminant_decompose(D)
    factored = factorize(-D)
    return Discriminant(
        D=D,
        f=parts.f,
        d0=parts.d0,
        omega=factored.omega,
        t=_t_from(D, factored.omega),
        phi_absD=factored.phi,
        factored=factored,
    )


@dataclass(frozen=True)
class SeriesBracket:
    lower: Fraction
    tail_bound: Fraction

    @property
    def upper(self):
        return self.lower + self.tail_bound

    def contains(self, value):
        return self.lower <= value <= self.upper


def t_of_D(disc):
    """2^t(D) is the number of genera of discriminant D."""
    disc = Discriminant.of(disc)
    return _t_from(disc.D, disc.omega)


def g_count(n, disc):
    """Number of genera of discriminant D that represent n."""
    disc = Discriminant.of(disc)
    if isinstance(n, int):
        n = factorize(n)

    common = gcd(n.value, disc.f * disc.f)
    m = isqrt(common)
    if m * m != common:
        return 0
    for p, e in n.factors:
        if e % 2 and kronecker(disc.d0, p) == -1:
            return 0
    return 2 ** (disc.t - disc.divided_by_square(m).t)


def v_closed(disc):
    """Exact v(D) from the divisor sum over m | f."""
    disc = Discriminant.of(disc)
    result = Fraction(disc.abs_value, disc.phi_absD)
    for p in disc.prime_divisors:
        if kronecker(disc.d0, p) == -1:
            result /= 1 + Fraction(1, p)

    total = Fraction(0)
    for m in factorize(disc.f).divisors():
        term = Fraction(2 ** (disc.t - disc.divided_by_square(m).t), m * m)
        for p in factorize(disc.f // m).primes:
            term *= 1 - Fraction(1, p)
            if kronecker(disc.d0, p) == -1:
                term *= 1 + Fraction(1, p)
        total += term
    return result * total


def _smooth_numbers(primes, bound, index=0, value=1, factors=()):
    # D-smooth n <= bound by recursion over exponent vectors
    if index == len(primes):
        yield value, factors
        return
    p = primes[index]
    exponent = 0
    while value <= bound:
        step = factors + ((p, exponent),) if exponent else factors
        yield from _smooth_numbers(primes, bound, index + 1, value, step)
        value *= p
        exponent += 1


def v_series(disc, bound):
    """Truncated sum of g(n, D)/n over n | D^infinity, n <= bound, with a proven tail bound."""
    disc = Discriminant.of(disc)
    if bound < disc.abs_value:
        raise ValueError(f"Series bound {bound} must be at least |D| = {disc.abs_value}.")

    lower = Fraction(0)
    harmonic = Fraction(0)
    for value, factors in _smooth_numbers(disc.prime_divisors, bound):
        harmonic += Fraction(1, value)
        g = g_count(FactoredInt(value, factors), disc)
        if g:
            lower += Fraction(g, value)

    full = prod((Fraction(p, p - 1) for p in disc.prime_divisors), start=Fraction(1))
    return SeriesBracket(lower=lower, tail_bound=2 ** disc.t * (full - harmonic))
