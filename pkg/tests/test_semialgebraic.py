from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from motivzeta.errors import UnsupportedDimension
from motivzeta.parsing import parse_polynomial
from motivzeta.semialgebraic import q_count_roots, q_sturm, torus_chi, torus_chi_level


def chi3(src: str) -> tuple[int, int, int]:
    p = parse_polynomial(src).poly
    return torus_chi(p, "zero"), torus_chi(p, "pos"), torus_chi(-p, "pos")


# each triple by hand: points count 1, open arcs -1, open cells +1; one variable means the torus is R*
@pytest.mark.parametrize(
    "src, expected",
    [
        ("x^2 - y^3", (-2, 4, 2)),
        ("x*y - 1", (-2, 2, 4)),
        ("x^2 + y^2 - 1", (-4, 4, 4)),
        ("(x - y)^2", (-2, 6, 0)),
        ("x - 1", (1, -1, -2)),
        ("x^2 + 1", (0, -2, 0)),
    ],
)
def test_hand_computed_plane_sets(src, expected):
    assert chi3(src) == expected


def test_level_sets():
    p = parse_polynomial("x^2 + y^2").poly
    assert torus_chi_level(p, 1) == -4
    assert torus_chi_level(p, -1) == 0


def test_three_active_variables_unsupported():
    with pytest.raises(UnsupportedDimension):
        torus_chi(parse_polynomial("x*y*z - 1").poly, "zero")


def test_sturm_counts():
    seq = q_sturm([Fraction(-2), Fraction(0), Fraction(1)])
    assert q_count_roots(seq, "-inf", None) == 2
    assert q_count_roots(seq, Fraction(0), None) == 1


@given(st.integers(1, 6), st.integers(1, 6), st.sampled_from([1, -1]), st.integers(-3, 3))
def test_pieces_add_up_to_the_torus(a, b, s, c):
    src = f"x^{a} {'+' if s > 0 else '-'} y^{b} + {c}" if c >= 0 else f"x^{a} {'+' if s > 0 else '-'} y^{b} - {-c}"
    assert sum(chi3(src)) == 4
