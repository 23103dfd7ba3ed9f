import itertools
import random

import pytest
from hypothesis import given, settings

from motivzeta.brieskorn import brieskorn_zeta, milnor_fiber_brieskorn, monomial_zeta
from motivzeta.errors import DegenerateInput, InvalidGerm, UnknownClassValue, UnsupportedDimension
from motivzeta.motive import BrieskornSpec, MotClass, convolve
from motivzeta.newton import (
    build_newton,
    check_nondegenerate,
    cone_generating_function,
    cones_are_interior,
    guibert_zeta,
    milnor_fiber_face_signs,
    milnor_fiber_newton,
)
from motivzeta.parsing import parse_polynomial
from motivzeta.realization import chi_F
from motivzeta.scalars import ScalarValue
from motivzeta.series import Factor, RationalTerm, RationalZeta
from strategies import brieskorn_specs

L = ScalarValue.L()
UNIT = MotClass.unit()
LEF = MotClass.lef()


def poly(s: str):
    return parse_polynomial(s).poly


def face_points(newton):
    return sorted(f.points for f in newton.compact_faces)


def test_faces_of_cubes():
    nd = build_newton(poly("x^3 - y^3"))
    assert face_points(nd) == [((0, 3),), ((0, 3), (3, 0)), ((3, 0),)]
    segment = next(f for f in nd.compact_faces if f.dim == 1)
    assert segment.cone_generators == ((1, 1),)


def test_single_variable_face():
    nd = build_newton(poly("x^5"))
    assert face_points(nd) == [((5,),)]


def test_faces_of_cusp():
    nd = build_newton(poly("x^2 + y^3"))
    assert face_points(nd) == [((0, 3),), ((0, 3), (2, 0)), ((2, 0),)]
    segment = next(f for f in nd.compact_faces if f.dim == 1)
    assert segment.cone_generators == ((3, 2),)


def test_constant_term_rejected():
    with pytest.raises(InvalidGerm):
        build_newton(poly("x^2 + 1"))


def _argmin_trace(support, k):
    vals = [sum(a * b for a, b in zip(k, v)) for v in support]
    m = min(vals)
    return frozenset(v for v, x in zip(support, vals) if x == m), m


@pytest.mark.parametrize("src", ["x^3 - y^3", "x^2 + y^3", "x^2*y + x*y^3 + y^5 + x^4", "x^3 + x*y^2 + y^4"])
def test_partition_by_brute_force(src):
    nd = build_newton(poly(src))
    faces = {frozenset(f.points) for f in nd.compact_faces}
    for total in range(2, 31):
        for k1 in range(1, total):
            trace, _ = _argmin_trace(nd.support, (k1, total - k1))
            assert trace in faces


def _scalar(c: MotClass) -> ScalarValue:
    return c.scalar_class().scalar_value() if not c.is_zero() else ScalarValue.of(0)


def _enumerate_face(nd, face, order, depth):
    """{n: {exponent: count}} over lattice points of the open cone with m(k) <= order and |k| <= depth."""
    out: dict[int, dict[int, int]] = {}
    target = frozenset(face.points)
    for k in itertools.product(range(1, depth + 1), repeat=nd.d):
        if sum(k) > depth:
            continue
        trace, m = _argmin_trace(nd.support, k)
        if trace != target or m > order:
            continue
        row = out.setdefault(m, {})
        row[-sum(k)] = row.get(-sum(k), 0) + 1
    return out


@pytest.mark.parametrize("src", ["x^3 - y^3", "x^2 + y^3", "x^2*y + x*y^3 + y^5 + x^4", "x^2 + y^2 + z^3"])
def test_generating_function_matches_enumeration(src):
    order = depth = 25 if "z" not in src else 14
    nd = build_newton(poly(src))
    for face in nd.compact_faces:
        z = cone_generating_function(face).expand(order)
        brute = _enumerate_face(nd, face, order, depth)
        for n in range(1, order + 1):
            got = {e: c for e, c in _scalar(z[n]).expand_at_infinity(depth).terms.items() if c}
            assert got == brute.get(n, {}), (face.points, n)


def test_segment_cone_of_cubes():
    nd = build_newton(poly("x^3 - y^3"))
    segment = next(f for f in nd.compact_faces if f.dim == 1)
    assert cone_generating_function(segment).equivalent(RationalZeta.single(UNIT, [Factor(2, 3)]), 40)


def test_vertex_cone_of_cubes():
    nd = build_newton(poly("x^3 - y^3"))
    vertex = next(f for f in nd.compact_faces if f.points == ((0, 3),))
    assert set(vertex.cone_generators) == {(1, 0), (1, 1)}
    expected = RationalZeta.single(UNIT.scale(1 / (L - 1)), [Factor(2, 3)])
    assert cone_generating_function(vertex).equivalent(expected, 40)


def test_one_variable_cone():
    face = build_newton(poly("x^4")).compact_faces[0]
    assert cone_generating_function(face).equivalent(RationalZeta.single(UNIT, [Factor(1, 4)]), 40)


def test_supporting_function_is_linear_on_cones():
    rng = random.Random(3)
    nd = build_newton(poly("x^2*y + x*y^3 + y^5 + x^4"))
    for face in nd.compact_faces:
        for _ in range(20):
            coeffs = [rng.randint(1, 6) for _ in face.cone_generators]
            k = tuple(sum(c * g[i] for c, g in zip(coeffs, face.cone_generators)) for i in range(2))
            _, m = _argmin_trace(nd.support, k)
            assert m == face.supporting_value(k)
            for v in face.points:
                assert m == sum(a * b for a, b in zip(k, v))


def test_nondegeneracy():
    assert check_nondegenerate(poly("x^3 - y^3"))
    assert check_nondegenerate(poly("x^2 + y^2 + z^4 - w^6"))
    assert not check_nondegenerate(poly("(x - y)^2"))
    assert check_nondegenerate(poly("x^2 + x*y + y^2"))
    with pytest.raises(DegenerateInput):
        guibert_zeta(poly("(x - y)^2"))
    with pytest.raises(UnsupportedDimension):
        check_nondegenerate(poly("x*y + y*z + x*z"))


def test_guibert_zeta_of_cubes():
    expected = RationalZeta(
        [RationalTerm(LEF, (Factor(2, 3),)), RationalTerm(LEF - UNIT, (Factor(2, 3), Factor(1, 1)))]
    )
    assert guibert_zeta(poly("x^3 - y^3")).equivalent(expected, 60)


@pytest.mark.parametrize("sign, k", [(1, 2), (-1, 2), (1, 3), (-1, 6)])
def test_guibert_zeta_of_monomials(sign, k):
    src = f"{'-' if sign < 0 else ''}x^{k}"
    assert guibert_zeta(poly(src)).equivalent(monomial_zeta(sign, k), 40)


def _spec_polynomial(spec: BrieskornSpec) -> str:
    names = ["x", "y", "z"]
    out = ""
    for i, (s, k) in enumerate(spec.terms):
        out += ("-" if s < 0 else ("+" if i else "")) + f"{names[i]}^{k}"
    return out


@settings(max_examples=15)
@given(brieskorn_specs(1, 3, 5))
def test_newton_route_matches_convolution_route(spec):
    order = 40
    z_newton = guibert_zeta(poly(_spec_polynomial(spec))).expand(order)
    z_conv = brieskorn_zeta(spec, order)
    for w in ("pos", "plus", "forget"):
        assert z_newton.realize_chi(w) == z_conv.realize_chi(w)
    try:
        b_conv = z_conv.realize_beta("forget")
    except UnknownClassValue:
        return
    assert z_newton.realize_beta("forget") == b_conv


def test_milnor_fibers():
    assert milnor_fiber_newton(poly("x^3 - y^3")).value == UNIT
    assert milnor_fiber_newton(poly("-x^4")).value == MotClass.mon(-1, 4)
    s = milnor_fiber_newton(poly("x^2 + y^2")).value
    m = MotClass.mon(1, 2)
    ts = UNIT - convolve(UNIT - m, UNIT - m)
    for w in ("plus", "minus", "pos", "neg", "forget"):
        assert chi_F(s, w) == chi_F(ts, w)


def test_face_sign_assembly_needs_interior_cones():
    f = poly("x^3 - y^3")
    assert not cones_are_interior(build_newton(f))
    assert milnor_fiber_face_signs(f).value == UNIT.scale(-(2 * L - 1))
    assert milnor_fiber_face_signs(f) != milnor_fiber_newton(f)


@settings(max_examples=15)
@given(brieskorn_specs(1, 3, 6))
def test_milnor_fiber_routes_agree(spec):
    s_newton = milnor_fiber_newton(poly(_spec_polynomial(spec))).value
    s_conv = milnor_fiber_brieskorn(spec).value
    for w in ("plus", "minus", "pos", "neg", "forget"):
        assert chi_F(s_newton, w) == chi_F(s_conv, w)


def test_non_simplicial_cone_in_three_variables():
    # the cross term x*y*z cuts the polyhedron so that some vertex lies on more than three facets
    nd = build_newton(poly("x^4 + y^4 + z^4 + x*y*z"))
    assert any(len(f.cone_generators) > nd.d for f in nd.compact_faces)
    for face in nd.compact_faces:
        z = cone_generating_function(face).expand(10)
        brute = _enumerate_face(nd, face, 10, 12)
        for n in range(1, 11):
            got = {e: c for e, c in _scalar(z[n]).expand_at_infinity(12).terms.items() if c}
            assert got == brute.get(n, {}), (face.points, n)
