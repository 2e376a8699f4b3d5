"""Integral positive definite binary quadratic forms.

Reduction, class enumeration, unit counts and brute-force representation.
Everything here is exact integer arithmetic; it is the oracle layer the
analytic modules are checked against.
"""
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from models.arith import kronecker
from models.errors import ResourceLimitError
from models.genus import Discriminant

POPULATION_LIMIT = 10 ** 8


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant >= 0:
            raise ValueError(f"{self} is not positive definite.")

    @classmethod
    def parse(cls, text):
        try:
            a, b, c = (int(part) for part in text.strip().strip("[]").split(","))
        except ValueError:
            raise ValueError(f"Cannot read a form from {text!r}; expected 'a,b,c'.") from None
        return cls(a, b, c)

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self):
        return gcd(gcd(self.a, self.b), self.c) == 1

    @property
    def is_reduced(self):
        a, b, c = self.a, self.b, self.c
        if not abs(b) <= a <= c:
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def evaluate(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


@dataclass(frozen=True)
class ReducedForms:
    forms: tuple
    h: int

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return self.h


def reduce(form):
    a, b, c = form.a, form.b, form.c
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * a * r, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def reduced_forms(disc):
    """One reduced primitive representative per proper class of discriminant D."""
    disc = Discriminant.of(disc)
    D = disc.D
    found = []
    limit = isqrt(disc.abs_value // 3)
    for b in range(D % 2, limit + 1, 2):
        N = (b * b - D) // 4
        for a in range(max(b, 1), isqrt(N) + 1):
            if N % a:
                continue
            c = N // a
            if gcd(gcd(a, b), c) != 1:
                continue
            found.append(QuadForm(a, b, c))
            if 0 < b < a < c:
                found.append(QuadForm(a, -b, c))
    found.sort(key=QuadForm.as_tuple)
    return ReducedForms(forms=tuple(found), h=len(found))


def reduced_counts(disc):
    """Yield, for a = 1, 2, ..., the number of reduced primitive forms with first coefficient a."""
    disc = Discriminant.of(disc)
    D = disc.D
    for a in range(1, isqrt(disc.abs_value // 3) + 1):
        b = np.arange(-a + 1, a + 1, dtype=np.int64)
        b = b[(b * b - D) % (4 * a) == 0]
        if not b.size:
            yield 0
            continue
        c = (b * b - D) // (4 * a)
        keep = (c >= a) & ((c > a) | (b >= 0))
        keep &= np.gcd(np.gcd(b, a), c) == 1
        yield int(np.count_nonzero(keep))


def class_number(disc):
    return sum(reduced_counts(disc))


def unit_count(disc):
    D = Discriminant.of(disc).D
    if D == -3:
        return 6
    if D == -4:
        return 4
    return 2


def represents(form, n):
    if n < 1:
        raise ValueError("Only positive integers are represented by a definite form.")
    D = form.discriminant
    two_a = 2 * form.a
    y_max = isqrt(4 * form.a * n // -D)
    for y in range(-y_max, y_max + 1):
        # a x^2 + (b y) x + (c y^2 - n) = 0 needs D y^2 + 4 a n to be a square
        delta = D * y * y + 4 * form.a * n
        if delta < 0:
            continue
        root = isqrt(delta)
        if root * root != delta:
            continue
        if (-form.b * y + root) % two_a == 0 or (-form.b * y - root) % two_a == 0:
            return True
    return False


def xi_D(disc, n):
    disc = Discriminant.of(disc)
    for p, e in n.factors:
        symbol = kronecker(disc.D, p)
        if symbol == 1 or (symbol == -1 and e % 2 == 0):
            continue
        return 0
    return 1


def represented_values(form, limit):
    """Boolean array whose entry n (0 <= n <= limit) says whether f represents n."""
    if limit > POPULATION_LIMIT:
        raise ResourceLimitError(f"Population sieve is bounded by {POPULATION_LIMIT}, got {limit}.")
    a, b, c = form.as_tuple()
    D = form.discriminant
    marked = np.zeros(limit + 1, dtype=bool)
    y_max = isqrt(4 * a * limit // -D)
    # f(x, y) = f(-x, -y), so y >= 0 covers every value
    for y in range(y_max + 1):
        root = isqrt(D * y * y + 4 * a * limit)
        lo = (-b * y - root) // (2 * a) - 1
        hi = (-b * y + root) // (2 * a) + 1
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        values = a * xs * xs + b * y * xs + c * y * y
        values = values[(values >= 1) & (values <= limit)]
        marked[values] = True
    return marked


def population_count(form, x):
    """B_f(x): the number of distinct integers in [1, x] represented by f."""
    if x < 1:
        raise ValueError("population_count needs x >= 1.")
    if x > POPULATION_LIMIT:
        raise ResourceLimitError(f"Population sieve is bounded by {POPULATION_LIMIT}, got {x}.")
    return int(np.count_nonzero(represented_values(form, x)[1:]))
