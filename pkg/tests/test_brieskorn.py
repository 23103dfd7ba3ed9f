import random

import pytest
from hypothesis import given, settings

from motivzeta.brieskorn import (
    brieskorn_coefficient,
    brieskorn_modified_zeta,
    brieskorn_rational_form,
    milnor_fiber_brieskorn,
    milnor_fiber_from_modified,
    monomial_modified_series,
    monomial_zeta,
    period,
    verify_thom_sebastiani,
)
from motivzeta.motive import BrieskornSpec, MotClass, convolve
from motivzeta.realization import chi_F
from motivzeta.scalars import ScalarValue
from motivzeta.series import ONE_FORM, Factor, RationalTerm, RationalZeta, modified_transform
from strategies import brieskorn_specs

L = ScalarValue.L()
UNIT = MotClass.unit()
CUBES = BrieskornSpec([(1, 3), (-1, 3)])


def lm(a: int) -> ScalarValue:
    return ScalarValue.L(a)


def spec(*terms) -> BrieskornSpec:
    return BrieskornSpec(list(terms))


def test_monomial_zeta_forms():
    z = monomial_zeta(1, 3)
    assert z.terms == (RationalTerm(UNIT, (Factor(1, 3),)),)
    z = monomial_zeta(-1, 2)
    assert z.terms == (RationalTerm(MotClass.mon(-1, 2), (Factor(1, 2),)),)
    assert monomial_zeta(1, 1).expand(3)[1] == UNIT.scale(lm(-1))


def test_cubes_modified_coefficients():
    z = brieskorn_modified_zeta(CUBES, 7)
    assert z[1] == -UNIT
    assert z[2] == -UNIT
    assert z[3].is_zero()
    assert z[4] == UNIT.scale(-lm(-2))
    assert z[5] == UNIT.scale(-lm(-2))


def test_single_monomial_reduces_to_transform():
    for s, k in [(1, 2), (-1, 3), (1, 5)]:
        assert brieskorn_modified_zeta(spec((s, k)), 20) == monomial_modified_series(s, k, 20)


def test_two_squares_second_coefficient():
    m = MotClass.mon(1, 2)
    expected = -(convolve(m, m) - m.scale(2) + UNIT).scale(lm(-2))
    z = brieskorn_modified_zeta(spec((1, 2), (1, 2)), 2)
    assert z[2] == expected
    assert brieskorn_coefficient(spec((1, 2), (1, 2)), 2) == expected


def test_closed_form_examples():
    assert brieskorn_coefficient(CUBES, 5) == UNIT.scale(-lm(-2))
    assert brieskorn_coefficient(spec((1, 2)), 2) == (MotClass.mon(1, 2) - UNIT).scale(lm(-1))
    with pytest.raises(ValueError):
        brieskorn_coefficient(CUBES, 0)


@given(brieskorn_specs(1, 4, 9))
def test_first_coefficient_is_minus_unit(s):
    assert brieskorn_coefficient(s, 1) == -UNIT
    assert brieskorn_modified_zeta(s, 1)[1] == -UNIT


def test_lazy_matches_hadamard_on_random_specs():
    rng = random.Random(7)
    for _ in range(20):
        d = rng.randint(1, 3)
        s = BrieskornSpec([(rng.choice([1, -1]), rng.randint(2, 7)) for _ in range(d)])
        z = brieskorn_modified_zeta(s, 60)
        for n in range(1, 61):
            assert brieskorn_coefficient(s, n) == z[n], (s, n)


@given(brieskorn_specs(1, 4, 9))
def test_coefficient_away_from_exponents(s):
    for n in range(1, 40):
        if all(n % k for k in s.exponents):
            assert brieskorn_coefficient(s, n) == UNIT.scale(-lm(-sum(n // k for k in s.exponents)))


def test_rational_form_of_cubes():
    expected = RationalZeta(
        [RationalTerm(-UNIT, (Factor(2, 3, ONE_FORM),), 1), RationalTerm(-UNIT, (Factor(2, 3, ONE_FORM),), 2)]
    )
    got = brieskorn_rational_form(CUBES)
    assert got.equivalent(expected, 60)
    assert got.render() == "(-unit*T - unit*T^2)/(unit - L^-2*T^3)"


def test_rational_form_of_odd_monomial():
    expected = RationalZeta(
        [RationalTerm(-UNIT, (Factor(1, 3, ONE_FORM),), 1), RationalTerm(-UNIT, (Factor(1, 3, ONE_FORM),), 2)]
    )
    assert brieskorn_rational_form(spec((1, 3))).equivalent(expected, 60)


def test_rational_form_of_square_matches_transform():
    form = brieskorn_rational_form(spec((1, 2)))
    assert form.expand(30) == modified_transform(monomial_zeta(1, 2).expand(30), "toModified")


@settings(max_examples=25)
@given(brieskorn_specs(1, 3, 6))
def test_rational_form_expands_to_coefficients(s):
    m, _ = period(s)
    z = brieskorn_rational_form(s, verify=False).expand(2 * m + 5)
    for n in range(1, 2 * m + 6):
        assert z[n] == brieskorn_coefficient(s, n)


def test_milnor_fiber_examples():
    assert milnor_fiber_brieskorn(CUBES).value == UNIT
    assert milnor_fiber_brieskorn(spec((1, 2))).value == MotClass.mon(1, 2)
    assert milnor_fiber_brieskorn(spec((1, 5))).value == UNIT


@given(brieskorn_specs(1, 3, 6))
def test_milnor_fiber_from_limit(s):
    assert milnor_fiber_from_modified(s) == milnor_fiber_brieskorn(s)


@given(brieskorn_specs(1, 2, 6), brieskorn_specs(1, 2, 6))
def test_thom_sebastiani_milnor_identity(a, b):
    sa, sb = milnor_fiber_brieskorn(a).value, milnor_fiber_brieskorn(b).value
    assert milnor_fiber_brieskorn(a + b).value == -convolve(sa, sb) + sa + sb


@pytest.mark.parametrize("a, b", [(spec((1, 3)), spec((-1, 3))), (spec((1, 2)), spec((1, 2)))])
def test_thom_sebastiani_reports(a, b):
    report = verify_thom_sebastiani(a, b, 30)
    assert report.passed and report.first_divergent is None
    assert report.render().startswith("pass: coefficients checked to order 30")


def test_thom_sebastiani_order_zero():
    report = verify_thom_sebastiani(CUBES, spec((1, 2)), 0)
    assert report.passed and report.order == 0


@given(brieskorn_specs(1, 2, 5), brieskorn_specs(1, 2, 5))
def test_chi_hadamard_with_classical_product(a, b):
    order = 30
    za, zb = brieskorn_modified_zeta(a, order), brieskorn_modified_zeta(b, order)
    joined = brieskorn_modified_zeta(a + b, order)
    for w in ("pos", "neg"):
        ca, cb, cj = za.realize_chi(w), zb.realize_chi(w), joined.realize_chi(w)
        assert cj == [x * y for x, y in zip(ca, cb)]


def test_associativity_of_the_sign():
    a, b, c = spec((1, 2)), spec((-1, 4)), spec((1, 3))
    order = 24
    za, zb, zc = (brieskorn_modified_zeta(s, order) for s in (a, b, c))
    from motivzeta.series import hadamard

    left = -hadamard(-hadamard(za, zb), zc)
    right = -hadamard(za, -hadamard(zb, zc))
    assert left == right == brieskorn_modified_zeta(a + b + c, order)


def test_period():
    assert period(CUBES) == (3, 2)
    assert period(spec((1, 2), (1, 3))) == (6, 5)
    # coefficients are quasi-periodic with that period
    m, c = period(spec((1, 2), (1, 3)))
    s = spec((1, 2), (1, 3))
    for n in range(1, 13):
        assert brieskorn_coefficient(s, n + m) == brieskorn_coefficient(s, n).scale(lm(-c))


def test_chi_of_the_cube_coefficients():
    # pos realization of -unit is 1 at every index away from multiples of 3
    z = brieskorn_modified_zeta(CUBES, 6)
    assert [chi_F(z[n], "pos") for n in range(1, 7)] == [1, 1, 0, 1, 1, 0]
