import itertools
import random

import pytest
from hypothesis import given

from motivzeta.errors import UnknownClassValue
from motivzeta.motive import ASClass, BrieskornSpec, FiberSet, MotClass, Named, NamedEq, ZeroSet, convolve
from motivzeta.realization import beta_class, beta_F, chi_brieskorn_sets, chi_F, chi_class
from motivzeta.scalars import ScalarValue
from motivzeta.semialgebraic import torus_chi
from strategies import brieskorn_specs, mot_classes

U = ScalarValue.L()
UNIT = MotClass.unit()


def test_unit_positive_part():
    assert chi_F(UNIT, "pos") == -1


def test_one_minus_square_fibers():
    assert chi_F(UNIT - MotClass.mon(1, 2), "plus") == -1
    assert chi_F(UNIT - MotClass.mon(-1, 2), "plus") == 1


def test_sum_of_squares_positive_part():
    assert chi_F(convolve(MotClass.mon(1, 2), MotClass.mon(1, 2)), "pos") == -4


def test_brieskorn_set_values():
    assert chi_brieskorn_sets(BrieskornSpec([(1, 3), (-1, 3)]).terms)[0] == -2
    assert chi_brieskorn_sets(BrieskornSpec([(1, 2), (1, 2)]).terms)[0] == 0
    assert chi_class(ASClass.gen(FiberSet([(1, 3), (-1, 3)], 1))) == -3


def test_beta_values():
    assert beta_F(UNIT, "forget") == U - 1
    assert beta_class(ASClass.gen(ZeroSet([(1, 3), (-1, 3)]))) == U - 1
    assert beta_class(ASClass.gen(FiberSet([(1, 3), (-1, 3)], 1))) == U - 2


def test_beta_even_plane_binomials():
    assert beta_class(ASClass.gen(ZeroSet([(1, 2), (-1, 4)]))) == 2 * (U - 1)
    assert beta_class(ASClass.gen(ZeroSet([(1, 2), (1, 4)]))) == ScalarValue.of(0)
    assert beta_class(ASClass.gen(FiberSet([(1, 2), (1, 2)], 1))) == U - 3


def test_beta_outside_catalog():
    with pytest.raises(UnknownClassValue):
        beta_class(ASClass.gen(ZeroSet([(1, 2), (1, 2), (-1, 2)])))
    with pytest.raises(UnknownClassValue):
        beta_F(UNIT, "pos")


def test_named_values():
    x = MotClass.scalar(ASClass.gen(Named("U", 1)))
    with pytest.raises(UnknownClassValue):
        chi_F(x)
    assert chi_F(x, "forget", {"U": 3}) == 3 * -2
    e = MotClass.atom(NamedEq("E"))
    assert chi_F(e, "plus", {"E:plus": 5}) == 5


@pytest.mark.parametrize(
    "poly, region, expected",
    [("x^2 + y^2", "zero", 0), ("x^2 - y^2", "zero", -4), ("x^2 + y^2 - 1", "zero", -4)],
)
def test_plane_curve_oracle(poly, region, expected):
    from motivzeta.parsing import parse_polynomial

    assert torus_chi(parse_polynomial(poly).poly, region) == expected


def test_oracle_matches_recursion_on_a_cubic():
    from motivzeta.parsing import parse_polynomial

    p = parse_polynomial("x^3 - y^3").poly
    z, pos, neg = chi_brieskorn_sets(BrieskornSpec([(1, 3), (-1, 3)]).terms)
    assert (torus_chi(p, "zero"), torus_chi(p, "pos"), torus_chi(-p, "pos")) == (z, pos, neg)


def test_partition_identity_small_specs():
    for d in range(1, 5):
        for terms in itertools.product([(1, 2), (-1, 2), (1, 3), (1, 4), (-1, 5)], repeat=d):
            z, p, n = chi_brieskorn_sets(BrieskornSpec(terms).terms)
            assert z + p + n == (-2) ** d


def test_oracle_equivalence_random_plane_specs():
    rng = random.Random(20)
    for _ in range(6):
        spec = BrieskornSpec([(rng.choice([1, -1]), rng.randint(2, 6)) for _ in range(2)])
        p = spec.polynomial()
        z, pos, neg = chi_brieskorn_sets(spec.terms)
        assert torus_chi(p, "zero") == z
        assert torus_chi(p, "pos") == pos
        assert torus_chi(-p, "pos") == neg


@given(mot_classes(), mot_classes())
def test_fiber_realizations_are_multiplicative(x, y):
    xy = convolve(x, y)
    for w in ("plus", "minus"):
        assert chi_F(xy, w) == chi_F(x, w) * chi_F(y, w)
    for w in ("pos", "neg"):
        assert chi_F(xy, w) == -chi_F(x, w) * chi_F(y, w)


@given(mot_classes())
def test_sign_bridge(x):
    assert chi_F(x, "pos") == -chi_F(x, "plus")
    assert chi_F(x, "neg") == -chi_F(x, "minus")
    assert chi_F(x, "forget") == chi_F(x, "pos") + chi_F(x, "neg")


@given(brieskorn_specs(2, 2, 6))
def test_beta_degree_is_dimension(spec):
    for gen in (ZeroSet(spec.terms), FiberSet(spec.terms, 1), FiberSet(spec.terms, -1)):
        a = ASClass.gen(gen)
        try:
            b = beta_class(a)
        except UnknownClassValue:
            continue
        if chi_class(a) != 0 or not b.is_zero():
            assert b.degree() == 1
