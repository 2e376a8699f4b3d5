import math
import random
from math import gcd

import pytest

from models.arith import factorize, is_discriminant
from models.errors import NotADiscriminantError, ResourceLimitError
from models.forms import (
    QuadForm,
    class_number,
    population_count,
    reduce,
    reduced_forms,
    represented_values,
    represents,
    unit_count,
    xi_D,
)
from models.constants import landau_ramanujan
from models.genus import Discriminant, g_count, t_of_D


def test_reduced_forms_of_minus_1984() -> None:
    classes = reduced_forms(-1984)
    assert classes.h == 12
    assert [f.as_tuple() for f in classes] == [
        (1, 0, 496), (4, 4, 125), (5, -4, 100), (5, 4, 100), (7, -2, 71), (7, 2, 71),
        (16, 0, 31), (16, 16, 35), (19, -12, 28), (19, 12, 28), (20, -4, 25), (20, 4, 25),
    ]
    assert all(f.is_reduced and f.is_primitive for f in classes)


@pytest.mark.parametrize("D, h", [(-3, 1), (-4, 1), (-7, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-84, 4), (-163, 1)])
def test_class_numbers(D, h) -> None:
    assert class_number(D) == h
    assert len(reduced_forms(D)) == h


def test_class_number_matches_reduced_forms() -> None:
    for D in range(-3, -800, -1):
        if is_discriminant(D):
            assert class_number(D) == reduced_forms(D).h, D


def test_unit_count() -> None:
    assert unit_count(-3) == 6
    assert unit_count(-4) == 4
    assert unit_count(-12) == 2


def test_reduce_lands_on_the_reduced_representative() -> None:
    assert reduce(QuadForm(3, 5, 3)).as_tuple() == (1, 1, 3)
    assert reduce(QuadForm(35, 16, 16)).as_tuple() == (16, 16, 35)
    assert reduce(QuadForm(19, -12, 28)).as_tuple() == (19, -12, 28)
    form = QuadForm(10, 34, 33)
    assert reduce(form).discriminant == form.discriminant
    assert reduce(form).is_reduced


def test_quadform_parse_and_validation() -> None:
    assert QuadForm.parse("1,0,1") == QuadForm(1, 0, 1)
    assert QuadForm.parse("[16,16,35]").discriminant == -1984
    with pytest.raises(ValueError):
        QuadForm.parse("1,2")
    with pytest.raises(ValueError):
        QuadForm(1, 3, 1)


def test_represents() -> None:
    assert represents(QuadForm(16, 16, 35), 124)
    assert not represents(QuadForm(1, 0, 1), 3)
    assert represents(QuadForm(1, 0, 1), 25)
    with pytest.raises(ValueError):
        represents(QuadForm(1, 0, 1), 0)


def test_population_of_sums_of_two_squares() -> None:
    # 1, 2, 4, 5, 8, 9, 10
    assert population_count(QuadForm(1, 0, 1), 10) == 7
    assert population_count(QuadForm(1, 0, 1), 100) == 43


def test_represented_values_agrees_with_represents() -> None:
    for form in (QuadForm(2, 2, 3), QuadForm(1, 1, 6), QuadForm(4, 4, 125)):
        marked = represented_values(form, 600)
        for n in range(1, 601):
            assert marked[n] == represents(form, n), (form, n)


def test_population_limit() -> None:
    with pytest.raises(ResourceLimitError):
        population_count(QuadForm(1, 0, 1), 10 ** 8 + 1)
    with pytest.raises(ValueError):
        population_count(QuadForm(1, 0, 1), 0)


@pytest.mark.slow
def test_genus_count_detects_representability() -> None:
    mismatches = []
    for D in range(-3, -201, -1):
        if not is_discriminant(D):
            continue
        classes = reduced_forms(D)
        marked = None
        for form in classes:
            values = represented_values(form, 2000)
            marked = values if marked is None else marked | values
        disc = Discriminant.of(D)
        for n in range(1, 2001):
            if (g_count(n, disc) > 0) != bool(marked[n]):
                mismatches.append((D, n))
    assert mismatches == []


@pytest.mark.slow
def test_xi_detects_representability_coprime_to_D() -> None:
    mismatches = []
    for D in range(-3, -151, -1):
        if not is_discriminant(D):
            continue
        marked = None
        for form in reduced_forms(D):
            values = represented_values(form, 2000)
            marked = values if marked is None else marked | values
        for n in range(1, 2001):
            if gcd(n, D) != 1:
                continue
            if (xi_D(D, factorize(n)) == 1) != bool(marked[n]):
                mismatches.append((D, n))
    assert mismatches == []


def test_discriminant_validation_reaches_forms() -> None:
    with pytest.raises(NotADiscriminantError):
        reduced_forms(-5)


def test_reduction_preserves_represented_values() -> None:
    rng = random.Random(3)
    checked = 0
    while checked < 50:
        a = rng.randrange(1, 40)
        b = rng.randrange(-80, 81)
        c = (b * b) // (4 * a) + rng.randrange(1, 40)
        form = QuadForm(a, b, c)
        reduced = reduce(form)
        assert reduced.is_reduced and reduced.discriminant == form.discriminant
        assert (represented_values(form, 500) == represented_values(reduced, 500)).all(), form
        checked += 1


def test_genus_count_divides_class_number() -> None:
    for D in range(-3, -2000, -1):
        if not is_discriminant(D):
            continue
        genera = 2 ** t_of_D(D)
        h = class_number(D)
        assert h >= genera and h % genera == 0, (D, h)


@pytest.mark.slow
def test_sums_of_two_squares_follow_landau_ramanujan() -> None:
    x = 10 ** 7
    b1 = float(landau_ramanujan(20))
    ratio = population_count(QuadForm(1, 0, 1), x) * math.sqrt(math.log(x)) / x
    assert abs(ratio - b1) < 0.1 * b1
