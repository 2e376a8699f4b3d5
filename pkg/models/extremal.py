"""Lower bounds on E(D) and the finite search for all D with E(D) < r.

The cutoff beyond which nothing is scanned is derived from proven
inequalities. Below it a numpy screen evaluates the genus bound in float64 and
discards a discriminant only when that float bound exceeds r^2 by a relative
10^-6, a margin about a billion times the rounding error of the float
computation. Discriminants closer to r^2 than that get an exact Surd check, and
every later elimination is exact or a certified evaluation.

Write |D| = 2^e m with m odd. The bound E(D)^2 >= phi(|D|)/(2^(t+2) sqrt|D|)
equals beta(e) g(m) for D = -m, -8m, -16m and e >= 5, and is at least
beta(e) g(m) for D = -4m, where g(m) = phi(m)/(2^omega(m) sqrt m).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import isqrt, prod

import mpmath
import numpy as np
from mpmath import mp, mpf
from sympy import prime, primerange

from models.arith import factorize, kronecker, totient_omega_segment, totient_omega_sieve
from models.constants import erdos_number
from models.errors import PrecisionError
from models.forms import reduced_counts, unit_count
from models.genus import Discriminant, v_closed
from models.lfun import BigReal, as_mpf, rounding_bound, serialized

logger = logging.getLogger(__name__)

SEARCH_MAX_R = Fraction(3, 2)
SCREEN_DIGITS = 12
MAX_ESCALATIONS = 4
PARTIAL_PRODUCT_PRIMES = tuple(primerange(2, 50))
FLOAT_MARGIN = 1e-9
RECHECK_BAND = 1e-6
NICOLAS_START = 17
SEGMENT_SIZE = 1 << 20


@total_ordering
class Surd:
    """Exact nonnegative number coefficient * sqrt(radicand), both rational."""

    __slots__ = ("coefficient", "radicand")

    def __init__(self, coefficient, radicand=1):
        coefficient = Fraction(coefficient)
        radicand = Fraction(radicand)
        if coefficient < 0 or radicand < 0:
            raise ValueError("Surds are nonnegative.")
        self.coefficient = coefficient
        self.radicand = radicand

    def square(self):
        return self.coefficient * self.coefficient * self.radicand

    def __mul__(self, other):
        if isinstance(other, Surd):
            return Surd(self.coefficient * other.coefficient, self.radicand * other.radicand)
        return Surd(self.coefficient * Fraction(other), self.radicand)

    __rmul__ = __mul__

    def __eq__(self, other):
        return self.square() == _as_surd(other).square()

    def __lt__(self, other):
        return self.square() < _as_surd(other).square()

    def __hash__(self):
        return hash(self.square())

    def __float__(self):
        return float(self.coefficient) * math.sqrt(self.radicand)

    @serialized
    def to_mpf(self):
        return as_mpf(self.coefficient) * mpmath.sqrt(as_mpf(self.radicand))

    def __repr__(self):
        return f"Surd({self.coefficient}, {self.radicand})"


def _as_surd(value):
    return value if isinstance(value, Surd) else Surd(value)


G_MIN = Surd(2, Fraction(1, 15))


def as_threshold(r):
    """Rational search threshold; floats are read through their shortest repr."""
    if isinstance(r, float):
        r = repr(r)
    try:
        r = Fraction(r)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Cannot read a threshold from {r!r}.") from None
    if not 0 < r <= SEARCH_MAX_R:
        raise ValueError(f"Search threshold must lie in (0, {SEARCH_MAX_R}], got {r}.")
    return r


def alpha_of_D(disc):
    disc = Discriminant.of(disc)
    if disc.abs_value < 5:
        raise ValueError("alpha(D) is only defined for |D| >= 5.")
    D = disc.D
    if D % 16 == 12:
        return Surd(Fraction(1, 4))
    if D % 16 == 8 or D % 32 == 0:
        return Surd(Fraction(1, 2), Fraction(1, 2))
    return Surd(Fraction(1, 2))


def g_surd(n):
    """g(n) = phi(n) / (2^omega(n) sqrt n) for a FactoredInt n."""
    return Surd(Fraction(n.phi, 2 ** n.omega), Fraction(1, n.value))


def lower_bound_E2(disc):
    """max of phi(|D|)/(2^(t+2) sqrt|D|) and alpha(D) g(D_odd), both below E(D)^2."""
    disc = Discriminant.of(disc)
    if disc.abs_value < 5:
        raise ValueError("lower_bound_E2 excludes D = -3 and D = -4.")
    global_bound = Surd(Fraction(disc.phi_absD, 2 ** (disc.t + 2)), Fraction(1, disc.abs_value))
    odd_bound = alpha_of_D(disc) * g_surd(factorize(disc.odd_part))
    return max(global_bound, odd_bound)


def odd_prime_product_bound(w):
    """prod_{i=2}^{w+1} (sqrt p_i - 1/sqrt p_i)/2, the least g(m) over odd m with omega(m) = w."""
    primes = [prime(i) for i in range(2, w + 2)]
    return Surd(Fraction(prod(p - 1 for p in primes), 2 ** w), Fraction(1, prod(primes)))


@serialized
def nicolas_lower_phi(n):
    """e^-gamma n / log log n, a lower bound for phi(n) valid for odd n >= 17."""
    if n < NICOLAS_START or n % 2 == 0:
        raise ValueError(f"The bound only holds for odd n >= {NICOLAS_START}, got {n}.")
    digits = 20
    with mp.workdps(digits + 15):
        value = mpmath.exp(-mp.euler) * n / mpmath.log(mpmath.log(n))
        return BigReal(value, digits, rounding_bound(digits))


def _partial_inert_product(disc):
    product = Fraction(1)
    for p in PARTIAL_PRODUCT_PRIMES:
        if kronecker(disc.D, p) == -1:
            product *= Fraction(p * p, p * p - 1)
    return product


def _class_formula_coefficient(disc):
    # E^2 = v^2/4^(t+1) * 2 h phi F / (w sqrt|D|), and F exceeds its partial product
    v = v_closed(disc)
    coefficient = v * v * 2 * disc.phi_absD * _partial_inert_product(disc)
    return coefficient / (4 ** (disc.t + 1) * unit_count(disc))


def refined_lower_bound_E2(disc, h=None):
    """Lower bound on E(D)^2 from the exact v(D), h(D), w(D) and the inert primes below 50."""
    disc = Discriminant.of(disc)
    if h is None:
        h = sum(reduced_counts(disc))
    return Surd(_class_formula_coefficient(disc) * h, Fraction(1, disc.abs_value))


def _least_class_number(disc, r2):
    """Smallest h for which the refined bound reaches r^2."""
    coefficient = _class_formula_coefficient(disc)
    target = r2 * r2 * disc.abs_value / (coefficient * coefficient)
    h = isqrt(math.ceil(target))
    while h * h < target:
        h += 1
    return max(h, 1)


def _beta(e):
    if e == 0 or e == 4:
        return Surd(Fraction(1, 2))
    if e == 2:
        return Surd(Fraction(1, 4))
    if e == 3:
        return Surd(Fraction(1, 2), Fraction(1, 2))
    if e >= 5:
        if e % 2:
            return Surd(Fraction(2) ** ((e - 1) // 2 - 4), 2)
        return Surd(Fraction(2) ** (e // 2 - 4))
    raise ValueError("No discriminant has exactly one factor of 2.")


@dataclass(frozen=True)
class CutoffClass:
    exponent: int
    beta: Surd
    max_omega: int
    odd_limit: int

    @property
    def bound(self):
        return 2 ** self.exponent * self.odd_limit


@dataclass(frozen=True)
class Cutoff:
    r: Fraction
    classes: tuple
    free_exponent: int

    @property
    def D0(self):
        return max([5] + [c.bound for c in self.classes])


def _max_omega(beta, r2):
    # the product bound is increasing in w from w = 2 on
    worst = -1
    w = 0
    while True:
        if beta * odd_prime_product_bound(w) < r2:
            worst = w
        elif w >= 2:
            return worst
        w += 1


@serialized
def _nicolas_limit(beta, w, r2, cap):
    """Least m such that every odd m' >= m with omega(m') = w has beta g(m') >= r^2, capped."""
    with mp.workdps(30):
        scale = beta.to_mpf() / 2 ** w
        target = as_mpf(r2) * (1 + mpf(10) ** -20)

        def enough(m):
            # phi(m)/sqrt(m) is bounded below by an increasing function of odd m
            m |= 1
            phi = nicolas_lower_phi(m)
            return scale * (phi.value - phi.error_bound) / mpmath.sqrt(m) >= target

        lo, hi = NICOLAS_START, NICOLAS_START
        while not enough(hi):
            if hi >= cap:
                return cap
            lo, hi = hi, 2 * hi
        if hi == NICOLAS_START:
            return hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if enough(mid):
                hi = mid
            else:
                lo = mid
        return hi


def _odd_limit(beta, w, r2):
    """Odd parts m >= this with omega(m) = w all satisfy beta g(m) >= r^2."""
    primes = [prime(i) for i in range(2, w + 2)]
    c_w = prod((Fraction(p - 1, 2 * p) for p in primes), start=Fraction(1))
    # beta c_w sqrt(m) >= r^2
    product_limit = math.ceil(r2 * r2 / (beta.square() * c_w * c_w))
    return min(product_limit, _nicolas_limit(beta, w, r2, product_limit))


def derive_cutoff(r):
    r = as_threshold(r)
    r2 = r * r
    free = 5
    while _beta(free) * G_MIN < r2:
        free += 1

    classes = []
    for e in [0, 2, 3, 4, *range(5, free)]:
        beta = _beta(e)
        worst = _max_omega(beta, r2)
        limit = 1
        for w in range(worst + 1):
            if beta * odd_prime_product_bound(w) >= r2:
                continue
            limit = max(limit, _odd_limit(beta, w, r2))
        classes.append(CutoffClass(exponent=e, beta=beta, max_omega=worst, odd_limit=limit))
        logger.info("Cutoff r=%s, |D| = 2^%s m: omega(m) <= %s, m < %s", r, e, worst, limit)
    cutoff = Cutoff(r=r, classes=tuple(classes), free_exponent=free)
    logger.info("Cutoff r=%s: D0 = %s, every 2^e with e >= %s is clear", r, cutoff.D0, free)
    return cutoff


def _genus_bound_float(n, phi, omega):
    """phi(|D|)/(2^(t+2) sqrt|D|) for arrays of |D|, phi(|D|), omega(|D|)."""
    t = np.where(n % 32 == 0, omega, np.where(n % 16 == 12, omega - 2, omega - 1))
    return phi / (np.exp2(t + 2) * np.sqrt(n.astype(np.float64)))


def _screen(cutoff):
    """Stage one: |D| below the cutoff whose genus bound does not clear r^2.

    Float bounds within RECHECK_BAND of r^2 are settled by lower_bound_E2.
    """
    r2 = cutoff.r * cutoff.r
    keep_below = float(r2) * (1 + FLOAT_MARGIN)
    band_top = float(r2) * (1 + RECHECK_BAND)
    top = max(c.odd_limit for c in cutoff.classes)
    phi, omega = totient_omega_sieve(max(top, 2))
    found = []
    scanned = 0
    for c in cutoff.classes:
        m = np.arange(1, c.odd_limit, 2, dtype=np.int64)
        if c.exponent == 0:
            m = m[m % 4 == 3]
        n = m << c.exponent
        keep = n >= 5
        m, n = m[keep], n[keep]
        scanned += n.size
        if not n.size:
            continue
        two = 1 if c.exponent else 0
        phi_n = phi[m] << max(c.exponent - 1, 0)
        omega_n = omega[m].astype(np.int64) + two
        bound = _genus_bound_float(n, phi_n, omega_n)
        found.extend(int(x) for x in n[bound < keep_below])
        near = n[(bound >= keep_below) & (bound < band_top)]
        found.extend(int(x) for x in near if lower_bound_E2(-int(x)) < r2)
    return sorted(found), scanned


def verify_cutoff(cutoff, factor=2):
    """Check the genus bound clears r^2 for every D with D0 <= |D| < factor * D0."""
    if factor <= 1:
        raise ValueError("verify_cutoff needs factor > 1.")
    r2 = cutoff.r * cutoff.r
    r2_float = float(r2) * (1 + RECHECK_BAND)
    lo, top = cutoff.D0, int(factor * cutoff.D0)
    checked = 0
    while lo < top:
        hi = min(lo + SEGMENT_SIZE, top)
        phi, omega = totient_omega_segment(lo, hi)
        n = np.arange(lo, hi, dtype=np.int64)
        keep = (n % 4 == 0) | (n % 4 == 3)
        n, phi, omega = n[keep], phi[keep], omega[keep].astype(np.int64)
        checked += n.size
        bound = _genus_bound_float(n, phi, omega)
        for x in n[bound < r2_float]:
            if lower_bound_E2(-int(x)) < r2:
                raise PrecisionError(f"Cutoff {cutoff.D0} for r={cutoff.r} fails at D={-int(x)}.")
        lo = hi
    logger.info("Cutoff %s for r=%s verified on %s discriminants", cutoff.D0, cutoff.r, checked)
    return checked


@dataclass(frozen=True)
class Survivor:
    D: int
    erdos: BigReal


@dataclass(frozen=True)
class SearchResult:
    r: Fraction
    cutoff: Cutoff
    survivors: tuple
    scanned: int
    evaluated: tuple = ()
    eliminated: dict = field(default_factory=dict)

    @property
    def cutoff_D0(self):
        return self.cutoff.D0

    def discriminants(self):
        return [s.D for s in self.survivors]


@serialized
def _certified_side(disc, r, digits):
    """(E(D) < r, report) once the evaluation error no longer straddles r."""
    for _ in range(MAX_ESCALATIONS + 1):
        report = erdos_number(disc, digits)
        with mp.workdps(digits + 15):
            threshold = as_mpf(r)
            value, error = report.value.value, report.value.error_bound
            if value + error < threshold:
                return True, report
            if value - error >= threshold:
                return False, report
        logger.warning("E(%s) is within %s of %s at %s digits; doubling", disc.D, mpmath.nstr(error, 3), r, digits)
        digits *= 2
    raise PrecisionError(f"Could not decide E({disc.D}) against {r} after {MAX_ESCALATIONS} escalations.")


def _survives_bounds(disc, r2, eliminated):
    if lower_bound_E2(disc) >= r2:
        eliminated["lower_bound"] += 1
        return False
    needed = _least_class_number(disc, r2)
    if 2 ** disc.t >= needed:
        eliminated["genus_bound"] += 1
        return False
    counted = 0
    for count in reduced_counts(disc):
        counted += count
        if counted >= needed:
            eliminated["class_number"] += 1
            return False
    return True


def search_below(r, digits=28, verify=False):
    """Every discriminant D with E(D) < r, each with E(D) certified to `digits`."""
    r = as_threshold(r)
    r2 = r * r
    cutoff = derive_cutoff(r)
    if verify:
        verify_cutoff(cutoff)

    candidates, scanned = _screen(cutoff)
    eliminated = {"screen": scanned - len(candidates), "lower_bound": 0, "genus_bound": 0,
                  "class_number": 0, "evaluation": 0}
    logger.info("Search r=%s: %s of %s discriminants pass the screen", r, len(candidates), scanned)

    # the bounds above assume |D| >= 5
    to_evaluate = [Discriminant.of(-3), Discriminant.of(-4)]
    for n in candidates:
        disc = Discriminant.of(-n)
        if _survives_bounds(disc, r2, eliminated):
            to_evaluate.append(disc)
    logger.info("Search r=%s: evaluating %s", r, [d.D for d in to_evaluate])
    logger.info("Search r=%s: eliminated per stage %s", r, eliminated)

    survivors = []
    for disc in to_evaluate:
        below, _ = _certified_side(disc, r, SCREEN_DIGITS)
        if not below:
            eliminated["evaluation"] += 1
            continue
        _, report = _certified_side(disc, r, digits)
        value = report.value
        survivors.append(Survivor(D=disc.D, erdos=BigReal(value.value, digits, value.error_bound)))

    survivors.sort(key=lambda s: s.erdos.value)
    return SearchResult(
        r=r,
        cutoff=cutoff,
        survivors=tuple(survivors),
        scanned=scanned + 2,
        evaluated=tuple(d.D for d in to_evaluate),
        eliminated=eliminated,
    )
