import pytest
from hypothesis import given
from hypothesis import strategies as st

from motivzeta.errors import InvalidGerm, UnsupportedExpansion
from motivzeta.motive import (
    ASClass,
    BrieskornSpec,
    FiberSet,
    MotClass,
    Mon,
    ZeroSet,
    convolve,
    forget,
    geometric_expand,
    make_geom_torus,
    normalize,
)
from motivzeta.realization import REALIZATIONS, chi_F
from motivzeta.scalars import ScalarValue
from strategies import as_classes, mon_monomials, mot_classes

L = ScalarValue.L()
UNIT = MotClass.unit()


def lm(a: int) -> MotClass:
    return MotClass.scalar(ScalarValue.L(a))


def test_odd_monomial_is_the_unit():
    assert MotClass.mon(1, 3) == UNIT
    assert MotClass.mon(-1, 5) == UNIT
    # an odd power is an equivariant bijection of the punctured line: every realization agrees
    for w in REALIZATIONS:
        assert chi_F(MotClass.atom(Mon(1, 3)), w) == chi_F(UNIT, w)


def test_even_monomial_is_kept():
    m = MotClass.mon(1, 2)
    assert normalize(m) == m and m != UNIT
    assert MotClass.mon(1, 2) != MotClass.mon(1, 4)


def test_zero_terms_are_pruned():
    x = MotClass.scalar(L - 1) + MotClass.mon(-1, 2).scale(0)
    assert x == MotClass.scalar(L - 1)
    assert len(x.terms) == 1


def test_unit_is_neutral():
    x = MotClass.mon(1, 2) + lm(-2)
    assert convolve(UNIT, x) == x == convolve(x, UNIT)


def test_odd_pair_convolves_to_unit():
    assert convolve(MotClass.mon(1, 3), MotClass.mon(-1, 3)) == UNIT


def test_odd_pair_geometric_pieces():
    # complement of the diagonal with x^3 - y^3 is (L - 2) unit; the diagonal itself is L - 1
    z1 = MotClass.atom(make_geom_torus([(1, 3), (-1, 3)], [[0, 1]]))
    assert z1 == MotClass.scalar(L - 2)
    assert -z1 + MotClass.scalar(L - 1) == UNIT
    assert ASClass.gen(ZeroSet([(1, 3), (-1, 3)])) == ASClass.scalar(L - 1)


@given(st.integers(0, 6), st.integers(0, 6))
def test_scalar_convolution(a, b):
    assert convolve(lm(-a), lm(-b)) == lm(-a - b)


def test_geometric_expand_of_two_squares():
    expanded = geometric_expand((Mon(1, 2), Mon(1, 2)))
    assert expanded == -MotClass.atom(make_geom_torus([(1, 2), (1, 2)], [[0, 1]]))
    # x^2 + y^2 has no zero on the torus
    assert ASClass.gen(ZeroSet([(1, 2), (1, 2)])).is_zero()


def test_geometric_expand_single_atom():
    assert geometric_expand((Mon(-1, 2),)) == MotClass.mon(-1, 2)


def test_laminar_exclusions_required():
    with pytest.raises(UnsupportedExpansion):
        make_geom_torus([(1, 2), (1, 2), (1, 2)], [[0, 1], [1, 2]])


def test_forget_values():
    assert forget(UNIT) == ASClass.scalar(L - 1)
    assert forget(MotClass.mon(-1, 4)) == ASClass.scalar(L - 1)
    assert forget(lm(-1)) == ASClass.scalar(ScalarValue.L(-1) * (L - 1))


def test_forget_is_not_multiplicative():
    # must fail as a ring morphism: the unit is idempotent, its forgotten class is not
    assert forget(convolve(UNIT, UNIT)) == ASClass.scalar(L - 1)
    assert forget(convolve(UNIT, UNIT)) != forget(UNIT) * forget(UNIT)


def test_ring_product_only_with_scalars():
    with pytest.raises(UnsupportedExpansion):
        _ = MotClass.mon(1, 2) * MotClass.mon(1, 2)
    assert MotClass.mon(1, 2) * MotClass.scalar(L) == MotClass.mon(1, 2).scale(L)


def test_generator_rewrites():
    # odd elimination: {x^3 + y^2 = 0} is a graph over the y-torus minus {y^2 = 0}
    assert ASClass.gen(ZeroSet([(1, 3), (1, 2)])) == ASClass.scalar(L - 1)
    assert ASClass.gen(FiberSet([(1, 2), (1, 2)], -1)).is_zero()
    assert ASClass.gen(FiberSet([(1, 2)], 1)) == ASClass.scalar(2)
    assert ASClass.gen(FiberSet([(-1, 2), (1, 4)], -1)) == ASClass.gen(FiberSet([(1, 2), (-1, 4)], 1))


def test_brieskorn_spec_validation():
    with pytest.raises(InvalidGerm):
        BrieskornSpec([])
    with pytest.raises(InvalidGerm):
        BrieskornSpec([(1, 1)])
    assert BrieskornSpec([(-1, 3), (1, 2)]).terms == ((1, 2), (-1, 3))


@given(mot_classes(), mot_classes(), mot_classes())
def test_convolution_algebra(x, y, z):
    assert convolve(x, y) == convolve(y, x)
    assert convolve(convolve(x, y), z) == convolve(x, convolve(y, z))
    assert convolve(x, UNIT) == x
    assert convolve(x, y + z) == convolve(x, y) + convolve(x, z)


@given(mot_classes())
def test_normalize_idempotent(x):
    assert normalize(normalize(x)) == normalize(x) == x


@given(mon_monomials(max_atoms=3, even_only=True))
def test_geometric_expand_preserves_realizations(x):
    g = geometric_expand(x)
    for w in REALIZATIONS:
        assert chi_F(g, w) == chi_F(x, w)


@given(mot_classes(), mot_classes(), as_classes())
def test_forget_is_linear(x, y, a):
    assert forget(x + y) == forget(x) + forget(y)
    assert forget(x.scale(a)) == forget(x) * a
