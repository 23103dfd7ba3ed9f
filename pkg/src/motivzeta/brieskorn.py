"""Zeta functions of monomials and Brieskorn polynomials through the convolution theorem.

Two independent pipelines compute the modified zeta function of a Brieskorn
polynomial: the closed-form coefficient (one convolution per coefficient, so
any single index is cheap) and the Hadamard product of per-monomial series
obtained by transforming the monomial zeta functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .motive import BrieskornSpec, MotClass, convolve, convolve_all
from .scalars import ScalarValue
from .series import (
    ONE_FORM,
    Factor,
    MilnorFiber,
    RationalTerm,
    RationalZeta,
    ZetaSeries,
    hadamard,
    limit_at_infinity,
    modified_transform,
)

_VERIFY_CAP = 600


def monomial_zeta(sign: int, k: int) -> RationalZeta:
    """Zeta function of sign * x^k: Mon(sign, k) * L^-1 T^k / (1 - L^-1 T^k)."""
    if k < 1:
        raise ValueError("monomial exponent must be positive")
    return RationalZeta.single(MotClass.mon(sign, k), [Factor(1, k)])


def monomial_modified_coefficient(sign: int, k: int, n: int) -> MotClass:
    q, r = divmod(n, k)
    scale = ScalarValue.L(-q)
    if r:
        return MotClass.scalar(-scale)
    return (MotClass.mon(sign, k) - MotClass.unit()).scale(scale)


def brieskorn_coefficient(spec: BrieskornSpec, n: int) -> MotClass:
    """n-th modified zeta coefficient without expanding the series."""
    if n < 1:
        raise ValueError("coefficient index starts at 1")
    out = convolve_all(monomial_modified_coefficient(s, k, n) for s, k in spec.terms)
    return out if spec.d % 2 else -out


def monomial_modified_series(sign: int, k: int, order: int) -> ZetaSeries:
    return modified_transform(monomial_zeta(sign, k).expand(order), "toModified")


def brieskorn_modified_zeta(spec: BrieskornSpec, order: int) -> ZetaSeries:
    """Hadamard-product pipeline: (-1)^(d-1) times the product of the monomial modified series."""
    acc = None
    for s, k in spec.terms:
        z = monomial_modified_series(s, k, order)
        acc = z if acc is None else -hadamard(acc, z)
    return acc


def brieskorn_modified_series_lazy(spec: BrieskornSpec, order: int) -> ZetaSeries:
    return ZetaSeries.from_function(lambda n: brieskorn_coefficient(spec, n), order)


def brieskorn_zeta(spec: BrieskornSpec, order: int) -> ZetaSeries:
    """The (unmodified) zeta function, through the inverse transform."""
    return modified_transform(brieskorn_modified_series_lazy(spec, order), "toPlain")


def period(spec: BrieskornSpec) -> tuple[int, int]:
    """(m, c): a_{n+m} = L^-c a_n with m = lcm(k_i), c = sum m / k_i."""
    m = lcm(*spec.exponents)
    return m, sum(m // k for k in spec.exponents)


def brieskorn_rational_form(spec: BrieskornSpec, verify: bool = True) -> RationalZeta:
    """sum_{r=1}^{m} a_r T^r / (1 - L^-c T^m), checked against the lazy coefficients."""
    m, c = period(spec)
    terms = []
    for r in range(1, m + 1):
        a = brieskorn_coefficient(spec, r)
        if not a.is_zero():
            terms.append(RationalTerm(a, (Factor(c, m, ONE_FORM),), r))
    form = RationalZeta(terms)
    if verify:
        order = min(3 * m, _VERIFY_CAP)
        expanded = form.expand(order)
        for n in range(1, order + 1):
            if expanded[n] != brieskorn_coefficient(spec, n):
                raise AssertionError(f"rational form disagrees with the closed form at n={n}")
    return form


def milnor_fiber_brieskorn(spec: BrieskornSpec) -> MilnorFiber:
    """unit - conv_i (unit - Mon_i), the iterated Thom-Sebastiani formula."""
    unit = MotClass.unit()
    return MilnorFiber(unit - convolve_all(unit - MotClass.mon(s, k) for s, k in spec.terms))


def milnor_fiber_from_modified(spec: BrieskornSpec) -> MilnorFiber:
    """S = unit - lim Z~, using the rational form of the modified zeta function."""
    return MilnorFiber(MotClass.unit() - limit_at_infinity(brieskorn_rational_form(spec, verify=False)))


@dataclass(frozen=True)
class ThomSebastianiReport:
    passed: bool
    order: int
    first_divergent: int | None
    milnor_identity: bool

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        where = "" if self.first_divergent is None else f", first divergent coefficient T^{self.first_divergent}"
        milnor = "holds" if self.milnor_identity else "fails"
        return f"{status}: coefficients checked to order {self.order}{where}; Milnor fiber identity {milnor}"


def verify_thom_sebastiani(spec1: BrieskornSpec, spec2: BrieskornSpec, order: int) -> ThomSebastianiReport:
    """Compare the closed form for spec1 + spec2 with -(Z~_1 hadamard Z~_2), and the Milnor fiber identity."""
    first = None
    if order > 0:
        joined = spec1 + spec2
        lhs = brieskorn_modified_series_lazy(joined, order)
        rhs = -hadamard(brieskorn_modified_zeta(spec1, order), brieskorn_modified_zeta(spec2, order))
        first = lhs.first_difference(rhs)
    s1 = milnor_fiber_brieskorn(spec1).value
    s2 = milnor_fiber_brieskorn(spec2).value
    s12 = milnor_fiber_brieskorn(spec1 + spec2).value
    milnor_ok = s12 == -convolve(s1, s2) + s1 + s2
    return ThomSebastianiReport(first is None and milnor_ok, order, first, milnor_ok)
