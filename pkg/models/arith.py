"""Integer and rational number-theoretic primitives shared by every other module."""
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt, prod

import numpy as np
from sympy import factorint, isprime, jacobi_symbol

from models.errors import NotADiscriminantError

FACTOR_LIMIT = 2 ** 63
BERNOULLI_LIMIT = 512

# v(D), Bernoulli numbers and every other exact quantity are Fractions.
ExactRational = Fraction


@dataclass(frozen=True)
class FactoredInt:
    value: int
    factors: tuple = ()

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("FactoredInt needs a positive value.")
        primes = [p for p, _ in self.factors]
        if any(q <= p for p, q in zip(primes, primes[1:])):
            raise ValueError("Prime factors must be strictly increasing.")
        if any(e < 1 or not isprime(p) for p, e in self.factors):
            raise ValueError("Every factor must be a prime with a positive exponent.")
        if prod(p ** e for p, e in self.factors) != self.value:
            raise ValueError(f"Factors do not multiply back to {self.value}.")

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self):
        return len(self.factors)

    @property
    def phi(self):
        return prod(p ** (e - 1) * (p - 1) for p, e in self.factors)

    @property
    def odd_part(self):
        return self.value >> self.nu(2)

    def nu(self, p):
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def divisors(self):
        divs = [1]
        for p, e in self.factors:
            divs = [d * p ** k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


@dataclass(frozen=True)
class ArithmeticProfile:
    phi: int
    omega: int
    odd_part: int
    nu: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Decomposition:
    f: int
    d0: int


@lru_cache(maxsize=65536)
def factorize(n):
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"Cannot factorize {n!r}: need an integer.")
    if n < 1:
        raise ValueError(f"Cannot factorize {n}: need a positive integer.")
    if n > FACTOR_LIMIT:
        raise ValueError(f"Cannot factorize {n}: inputs are bounded by 2^63.")
    return FactoredInt(n, tuple(sorted(factorint(n).items())))


def arith_functions(n, queried=()):
    """phi, omega and the odd part of n, plus nu_p(n) for every queried prime p."""
    return ArithmeticProfile(
        phi=n.phi,
        omega=n.omega,
        odd_part=n.odd_part,
        nu={p: n.nu(p) for p in queried},
    )


def kronecker(D, n):
    """Kronecker symbol (D/n) for n >= 1; (D/2) is read off D mod 8."""
    if n < 1:
        raise ValueError("The Kronecker symbol is only used with n >= 1.")
    result = 1
    twos = (n & -n).bit_length() - 1
    if twos:
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5) and twos % 2:
            result = -1
        n >>= twos
    if n == 1:
        return result
    return result * int(jacobi_symbol(D % n, n))


def is_discriminant(D):
    return D < 0 and D % 4 in (0, 1)


def discriminant_decompose(D):
    if not is_discriminant(D):
        raise NotADiscriminantError(D)
    f = 1
    for p, e in factorize(-D).factors:
        k = e // 2
        if p == 2:
            # D / 4^k must stay 0 or 1 mod 4
            while k and (D // 4 ** k) % 4 not in (0, 1):
                k -= 1
        f *= p ** k
    return Decomposition(f=f, d0=D // (f * f))


_bernoulli_lock = threading.Lock()
_bernoulli_table = [Fraction(1), Fraction(-1, 2)]


def bernoulli(k):
    """Exact B_k from sum_{j<=m} C(m+1, j) B_j = 0."""
    if k < 2 or k % 2 or k > BERNOULLI_LIMIT:
        raise ValueError(f"bernoulli() takes an even k in [2, {BERNOULLI_LIMIT}], got {k}.")
    with _bernoulli_lock:
        while len(_bernoulli_table) <= k:
            m = len(_bernoulli_table)
            if m % 2:
                _bernoulli_table.append(Fraction(0))
                continue
            total = sum((comb(m + 1, j) * _bernoulli_table[j] for j in range(m)), Fraction(0))
            _bernoulli_table.append(-total / (m + 1))
        return _bernoulli_table[k]


def totient_omega_sieve(limit):
    """phi(n) and omega(n) for 0 <= n < limit as numpy arrays."""
    if limit < 2:
        raise ValueError("Sieve limit must be at least 2.")
    phi = np.arange(limit, dtype=np.int64)
    omega = np.zeros(limit, dtype=np.int8)
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    for p in np.flatnonzero(sieve):
        phi[p::p] -= phi[p::p] // p
        omega[p::p] += 1
    return phi, omega


def totient_omega_segment(lo, hi):
    """phi(n) and omega(n) for lo <= n < hi, sieving only by primes up to sqrt(hi)."""
    if not 1 <= lo < hi:
        raise ValueError("Segment needs 1 <= lo < hi.")
    values = np.arange(lo, hi, dtype=np.int64)
    phi = values.copy()
    omega = np.zeros(hi - lo, dtype=np.int8)
    residual = values.copy()
    small_phi, _ = totient_omega_sieve(isqrt(hi - 1) + 2)
    for p in np.flatnonzero(small_phi == np.arange(small_phi.size) - 1):
        p = int(p)
        idx = np.arange((-lo) % p, hi - lo, p)
        if not idx.size:
            continue
        phi[idx] -= phi[idx] // p
        omega[idx] += 1
        while idx.size:
            residual[idx] //= p
            idx = idx[residual[idx] % p == 0]
    # whatever is left over is a single prime above sqrt(hi)
    big = residual > 1
    phi[big] -= phi[big] // residual[big]
    omega[big] += 1
    return phi, omega
