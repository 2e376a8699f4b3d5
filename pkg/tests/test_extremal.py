from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from models import extremal
from models.arith import factorize, is_discriminant
from models.constants import erdos_number
from models.extremal import (
    G_MIN,
    _beta,
    _nicolas_limit,
    _screen,
    Surd,
    alpha_of_D,
    as_threshold,
    derive_cutoff,
    g_surd,
    lower_bound_E2,
    nicolas_lower_phi,
    odd_prime_product_bound,
    refined_lower_bound_E2,
    search_below,
    verify_cutoff,
)


def test_surd_ordering() -> None:
    assert Surd(1, 2) < Surd(Fraction(3, 2))
    assert Surd(2, Fraction(1, 4)) == 1
    assert hash(Surd(2, Fraction(1, 4))) == hash(Surd(1))
    assert Surd(1, 3) * Surd(1, 3) == 3
    assert abs(float(Surd(1, 2)) - 2 ** 0.5) < 1e-15
    assert max(Surd(1, 5), Surd(2)) == Surd(1, 5)
    with pytest.raises(ValueError):
        Surd(-1, 2)


def test_as_threshold() -> None:
    assert as_threshold(0.6) == Fraction(3, 5)
    assert as_threshold("1") == 1
    assert as_threshold(Fraction(14, 25)) == Fraction(14, 25)
    for bad in (0, -1, 2, "one"):
        with pytest.raises(ValueError):
            as_threshold(bad)


def test_alpha_of_D() -> None:
    assert alpha_of_D(-20) == Surd(Fraction(1, 4))
    assert alpha_of_D(-24) == Surd(Fraction(1, 2), Fraction(1, 2))
    assert alpha_of_D(-32) == Surd(Fraction(1, 2), Fraction(1, 2))
    assert alpha_of_D(-7) == Surd(Fraction(1, 2))
    with pytest.raises(ValueError):
        alpha_of_D(-4)


def test_lower_bound_E2() -> None:
    assert lower_bound_E2(-15) == Surd(1, Fraction(1, 15))
    assert lower_bound_E2(-7) == Surd(Fraction(3, 2), Fraction(1, 7))
    with pytest.raises(ValueError):
        lower_bound_E2(-3)


def test_lower_bounds_hold() -> None:
    for D in (-7, -15, -20, -23, -84, -108, -1984):
        erdos = erdos_number(D, 20).value.value
        with mp.workdps(40):
            square = erdos * erdos
            assert lower_bound_E2(D).to_mpf() < square, D
            assert refined_lower_bound_E2(D).to_mpf() < square, D


def test_odd_prime_product_bound() -> None:
    # (sqrt 3 - 1/sqrt 3)(sqrt 5 - 1/sqrt 5)(sqrt 7 - 1/sqrt 7)(sqrt 11 - 1/sqrt 11)/16
    assert abs(float(odd_prime_product_bound(4)) - 0.88275) < 1e-4
    assert odd_prime_product_bound(0) == 1
    for w in range(2, 8):
        assert odd_prime_product_bound(w) < odd_prime_product_bound(w + 1)


def test_g_min_is_attained_at_15() -> None:
    assert g_surd(factorize(15)) == G_MIN
    for m in range(3, 400, 2):
        assert g_surd(factorize(m)) >= G_MIN, m


def test_nicolas_lower_phi() -> None:
    assert abs(float(nicolas_lower_phi(17)) - 9.165) < 0.01
    assert abs(float(nicolas_lower_phi(105)) - 38.34) < 0.05
    for n in range(17, 3000, 2):
        assert float(nicolas_lower_phi(n)) < factorize(n).phi, n
    for bad in (15, 18):
        with pytest.raises(ValueError):
            nicolas_lower_phi(bad)


def test_cutoff_grows_with_r() -> None:
    low, mid = derive_cutoff(Fraction(3, 5)), derive_cutoff(Fraction(4, 5))
    assert low.D0 <= mid.D0
    assert low.free_exponent <= mid.free_exponent
    assert [c.exponent for c in low.classes][:4] == [0, 2, 3, 4]


def test_cutoff_classes_clear_the_threshold() -> None:
    r = Fraction(4, 5)
    cutoff = derive_cutoff(r)
    r2 = r * r
    for c in cutoff.classes:
        for m in range(c.odd_limit | 1, (c.odd_limit | 1) + 1500, 2):
            assert c.beta * g_surd(factorize(m)) >= r2, (c.exponent, m)
    assert _beta(cutoff.free_exponent) * G_MIN >= r2


def test_verify_cutoff() -> None:
    cutoff = derive_cutoff(Fraction(3, 5))
    assert verify_cutoff(cutoff) > 0
    with pytest.raises(ValueError):
        verify_cutoff(cutoff, factor=1)


def test_minus_three_is_isolated_below_six_tenths() -> None:
    # (phi|D| / (2^(omega+1) sqrt|D|))^(1/2) > 0.6 for D = 1 mod 4
    for n in range(7, 216):
        D = -n
        if n == 15 or not is_discriminant(D) or D % 4 != 1:
            continue
        m = factorize(n)
        assert Surd(Fraction(m.phi, 2 ** (m.omega + 1)), Fraction(1, n)) > Surd(Fraction(9, 25)), D
    assert erdos_number(-15, 20).value.value > erdos_number(-3, 20).value.value


def test_search_below_half_is_empty() -> None:
    result = search_below(Fraction(1, 2), digits=20)
    assert result.survivors == ()
    assert result.cutoff_D0 >= 5


@pytest.mark.parametrize("r", [0.56, 0.6])
def test_search_below_finds_minus_three(r) -> None:
    result = search_below(r, digits=28)
    assert result.discriminants() == [-3]
    with mp.workdps(40):
        assert abs(result.survivors[0].erdos.value - mpf("0.5533117758324795595155817776")) < mpf(10) ** -25
    assert sum(result.eliminated.values()) + len(result.survivors) == result.scanned


@pytest.mark.slow
def test_search_below_is_monotone() -> None:
    assert search_below(0.8, digits=15).discriminants() == [-3, -4]


@pytest.mark.parametrize(
    "low, high",
    [(0.5, 0.56), (0.56, 0.6), pytest.param(0.6, 0.8, marks=pytest.mark.slow)],
)
def test_search_below_grows_with_r(low, high) -> None:
    smaller = set(search_below(low, digits=15).discriminants())
    larger = set(search_below(high, digits=15).discriminants())
    assert smaller <= larger


@pytest.mark.slow
def test_search_below_one() -> None:
    result = search_below(1, digits=28, verify=True)
    assert result.discriminants() == [-3, -4, -7, -15]
    assert result.survivors[0].erdos.to_decimal()[:22] == "0.55331177583247955951"


@pytest.mark.slow
def test_lower_bound_E2_below_every_E2_up_to_500() -> None:
    for n in range(5, 501):
        D = -n
        if not is_discriminant(D):
            continue
        report = erdos_number(D, 12)
        with mp.workdps(30):
            low = report.value.value - report.value.error_bound
            assert lower_bound_E2(D).to_mpf() < low * low, D


def _exact_candidates(cutoff, cap):
    r2 = cutoff.r * cutoff.r
    expected = set()
    for c in cutoff.classes:
        for m in range(1, min(c.odd_limit, cap), 2):
            n = m << c.exponent
            if n < 5 or (c.exponent == 0 and m % 4 != 3):
                continue
            if lower_bound_E2(-n) < r2:
                expected.add(n)
    return expected


def test_screen_keeps_every_exact_candidate() -> None:
    cutoff = derive_cutoff(Fraction(3, 5))
    candidates, scanned = _screen(cutoff)
    assert scanned >= len(candidates)
    assert _exact_candidates(cutoff, 5000) <= set(candidates)


def test_screen_settles_near_calls_exactly(monkeypatch) -> None:
    cutoff = derive_cutoff(Fraction(3, 5))
    reference, _ = _screen(cutoff)
    # a float screen that is off by 10^-7 in the wrong direction
    monkeypatch.setattr(extremal, "FLOAT_MARGIN", -1e-7)
    perturbed, _ = _screen(cutoff)
    assert _exact_candidates(cutoff, 5000) <= set(perturbed)
    assert set(perturbed) <= set(reference)


def test_nicolas_limit_is_built_on_nicolas_lower_phi(monkeypatch) -> None:
    calls = []

    def counting(n):
        calls.append(n)
        return nicolas_lower_phi(n)

    monkeypatch.setattr(extremal, "nicolas_lower_phi", counting)
    beta, w = _beta(0), 3
    limit = _nicolas_limit(beta, w, Fraction(1), 10 ** 12)
    assert calls and all(n % 2 for n in calls)

    def clears(m):
        phi = nicolas_lower_phi(m)
        with mp.workdps(30):
            return beta.to_mpf() * (phi.value - phi.error_bound) / (2 ** w * mpmath.sqrt(m)) >= 1

    assert clears(limit | 1)
    assert not clears(limit - 1)
    for m in range(limit | 1, (limit | 1) + 400, 2):
        if factorize(m).omega == w:
            assert beta * g_surd(factorize(m)) >= 1, m
