"""Realizations of classes: Euler characteristics with compact supports and virtual Poincare polynomials.

Five equivariant realizations of the equivariant ring: the fibers over +1 and -1
("plus", "minus"), the positive and negative parts ("pos", "neg") and the
underlying set ("forget"). Under chi_c all five are computed atom by atom; the
fiber realizations are multiplicative on convolution monomials and the
positive/negative ones pick up a sign (-1)^(t-1) for t factors (so the unit
maps to -1 under "pos"). Under the virtual Poincare polynomial only "plus",
"minus" and "forget" are available, and monomials are first rewritten as single
torus atoms.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .errors import DivisionByZero, UnknownClassValue, UnsupportedDimension
from .motive import (
    ASClass,
    FiberSet,
    GeomTorus,
    Mon,
    MotClass,
    Named,
    NamedEq,
    PolyTorus,
    PolyZeroSet,
    Spec,
    ZeroSet,
    forget,
    geometric_expand,
    negate_spec,
    torus_pieces,
)
from .scalars import ScalarValue
from .semialgebraic import torus_chi

REALIZATIONS = ("plus", "minus", "pos", "neg", "forget")
BETA_REALIZATIONS = ("plus", "minus", "forget")

_ALIASES = {
    "+": "plus", "fplus": "plus", "plus": "plus",
    "-": "minus", "fminus": "minus", "minus": "minus",
    ">": "pos", "gt": "pos", "pos": "pos", "fpos": "pos",
    "<": "neg", "lt": "neg", "neg": "neg", "fneg": "neg",
    "forget": "forget", "c": "forget", "chic": "forget",
}


def realization_name(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown realization {name!r}") from None


# ---------------------------------------------------------------------------
# chi_c of the power-sum catalog


@lru_cache(maxsize=None)
def chi_brieskorn_sets(spec: Spec) -> tuple[int, int, int]:
    """(zero, positive, negative) chi_c of the level sets of sum sign_i x_i^k_i on the torus.

    Recursion on the last variable: an odd power is a bijection of the
    punctured line, an even power folds it two-to-one onto a half-line.
    """
    if not spec:
        return 1, 0, 0
    rest = spec[:-1]
    sign, k = spec[-1]
    d = len(spec)
    z, p, n = chi_brieskorn_sets(rest)
    torus = (-2) ** (d - 1)
    if k % 2:
        zero = torus - z
        pos = -p - torus
        neg = -n - torus
    elif sign > 0:
        zero = 2 * n
        pos = (-2) ** d
        neg = -2 * n
    else:
        zero = 2 * p
        pos = -2 * p
        neg = (-2) ** d
    return zero, pos, neg


def chi_zero_set(spec: Spec) -> int:
    return chi_brieskorn_sets(spec)[0]


def chi_fiber_set(spec: Spec, value: int) -> int:
    """Quasi-homogeneity: {f > 0} is {f = 1} times an open ray."""
    _, p, n = chi_brieskorn_sets(spec)
    return -p if value > 0 else -n


def chi_generator(g, named: Mapping[str, int] | None = None) -> int:
    if isinstance(g, ZeroSet):
        return chi_zero_set(g.spec)
    if isinstance(g, FiberSet):
        return chi_fiber_set(g.spec, g.value)
    if isinstance(g, PolyZeroSet):
        try:
            return torus_chi(g.poly, "zero")
        except UnsupportedDimension as exc:
            raise UnknownClassValue(str(exc)) from None
    if isinstance(g, Named):
        if named and g.label in named:
            return int(named[g.label])
        raise UnknownClassValue(f"no chi_c value for {g.render()}")
    raise TypeError(g)


def _chi_scalar(c: ScalarValue) -> int:
    if not c.den.evaluate(-1):
        raise DivisionByZero(f"{c.render()} has a pole at L = -1")
    v = c.evaluate(-1)
    if v.denominator != 1:
        raise UnknownClassValue(f"{c.render()} evaluates to the non-integer {v} at L = -1")
    return int(v)


def chi_class(a: ASClass, named: Mapping[str, int] | None = None) -> int:
    """chi_c of a non-equivariant class (L -> -1)."""
    total = 0
    for gens, c in a.terms.items():
        v = _chi_scalar(c)
        for g in gens:
            if not v:
                break
            v *= chi_generator(g, named)
        total += v
    return total


# ---------------------------------------------------------------------------
# atoms


def _mon_plus(sign: int, k: int) -> int:
    if k % 2:
        return 1
    return 2 if sign > 0 else 0


def _region_chi(spec: Spec, which: str) -> int:
    z, p, n = chi_brieskorn_sets(spec)
    return {"plus": -p, "minus": -n, "pos": p, "neg": n}[which]


def chi_atom(atom, which: str, named: Mapping[str, int] | None = None) -> int:
    if isinstance(atom, Mon):
        if which == "forget":
            return -2
        if which in ("plus", "pos"):
            v = _mon_plus(atom.sign, atom.k)
        else:
            v = _mon_plus(-atom.sign, atom.k)
        return v if which in ("plus", "minus") else -v
    if isinstance(atom, GeomTorus):
        if which == "forget":
            return chi_class(forget(MotClass.atom(atom)), named)
        total = 0
        for sign, zeros, top in torus_pieces(atom):
            if not top:
                continue
            v = sign
            for b in zeros:
                v *= chi_zero_set(b)
                if not v:
                    break
            if v:
                total += v * _region_chi(top, which)
        return total
    if isinstance(atom, PolyTorus):
        p = atom.poly
        try:
            if which == "plus":
                return torus_chi(p - 1, "zero")
            if which == "minus":
                return torus_chi(p + 1, "zero")
            if which == "pos":
                return torus_chi(p, "pos")
            if which == "neg":
                return torus_chi(-p, "pos")
            return torus_chi(p, "pos") + torus_chi(-p, "pos")
        except UnsupportedDimension as exc:
            raise UnknownClassValue(str(exc)) from None
    if isinstance(atom, NamedEq):
        key = f"{atom.label}:{which}"
        if named and key in named:
            return int(named[key])
        raise UnknownClassValue(f"no {which} value for {atom.render()}")
    raise TypeError(atom)


def chi_monomial(m: tuple, which: str, named: Mapping[str, int] | None = None) -> int:
    if which == "forget":
        return chi_monomial(m, "pos", named) + chi_monomial(m, "neg", named)
    v = 1
    for a in m:
        v *= chi_atom(a, which, named)
    if which in ("pos", "neg"):
        v *= (-1) ** (len(m) - 1) if m else -1
    return v


def chi_F(x: MotClass | ASClass, which: str = "forget", named: Mapping[str, int] | None = None) -> int:
    """chi_c realization of a class; an ASClass is read through the plain chi_c."""
    if isinstance(x, ASClass):
        return chi_class(x, named)
    which = realization_name(which)
    total = 0
    for m, c in x.terms.items():
        cv = chi_class(c, named)
        if cv:
            total += cv * chi_monomial(m, which, named)
    return total


def chi_all(x: MotClass, named: Mapping[str, int] | None = None) -> dict[str, int]:
    return {w: chi_F(x, w, named) for w in REALIZATIONS}


# ---------------------------------------------------------------------------
# virtual Poincare polynomial

U = ScalarValue.L()  # the polynomial variable, rendered as u


def _beta_zero_set(spec: Spec) -> ScalarValue:
    if len(spec) == 2:
        (s1, _), (s2, _) = spec
        return ScalarValue.of(0) if s1 == s2 else 2 * (U - 1)
    raise UnknownClassValue(f"no virtual Poincare value for ZeroSet[{len(spec)} even terms]")


def _beta_fiber_set(spec: Spec, value: int) -> ScalarValue:
    if value < 0:
        spec = negate_spec(spec)
    signs = sorted(s for s, _ in spec)
    if len(spec) == 2:
        if signs == [-1, -1]:
            return ScalarValue.of(0)
        if signs == [1, 1]:
            return U - 3  # oval minus its four axis points
        return 2 * (U - 1)  # two hyperbola branches, each a line
    raise UnknownClassValue(f"no virtual Poincare value for FiberSet[{len(spec)} even terms]")


def _beta_generator(g, named: Mapping[str, ScalarValue] | None) -> ScalarValue:
    if isinstance(g, ZeroSet):
        return _beta_zero_set(g.spec)
    if isinstance(g, FiberSet):
        return _beta_fiber_set(g.spec, g.value)
    if isinstance(g, Named):
        if named and g.label in named:
            return ScalarValue.of(named[g.label])
        raise UnknownClassValue(f"no virtual Poincare value for {g.render()}")
    raise UnknownClassValue(f"no virtual Poincare value for {g.render()}")


def beta_class(a: ASClass, named: Mapping[str, ScalarValue] | None = None) -> ScalarValue:
    """Virtual Poincare polynomial of a non-equivariant class (L -> u)."""
    total = ScalarValue.of(0)
    for gens, c in a.terms.items():
        v = c
        for g in gens:
            v = v * _beta_generator(g, named)
        total = total + v
    return total


def _beta_region(spec: Spec, which: str) -> ScalarValue:
    value = 1 if which == "plus" else -1
    return beta_class(ASClass.gen(FiberSet(spec, value)))


def _beta_atom(atom, which: str, named) -> ScalarValue:
    if isinstance(atom, Mon):
        return ScalarValue.of(_mon_plus(atom.sign if which == "plus" else -atom.sign, atom.k))
    if isinstance(atom, GeomTorus):
        total = ScalarValue.of(0)
        for sign, zeros, top in torus_pieces(atom):
            if not top:
                continue
            part = ASClass.scalar(sign)
            for b in zeros:
                part = part * ASClass.gen(ZeroSet(b))
            if part.is_zero():
                continue
            total = total + beta_class(part, named) * _beta_region(top, which)
        return total
    raise UnknownClassValue(f"no virtual Poincare value for {atom.render()} under {which}")


def beta_F(x: MotClass | ASClass, which: str = "forget", named=None) -> ScalarValue:
    """Virtual Poincare realization; the result is a rational function of u."""
    if isinstance(x, ASClass):
        return beta_class(x, named)
    which = realization_name(which)
    if which not in BETA_REALIZATIONS:
        raise UnknownClassValue(f"virtual Poincare realization {which!r} is not available")
    if which == "forget":
        return beta_class(forget(x), named)
    total = ScalarValue.of(0)
    for m, c in geometric_expand(x).terms.items():
        cv = beta_class(c, named)
        if cv.is_zero():
            continue
        if not m:
            total = total + cv
        else:
            (atom,) = m
            total = total + cv * _beta_atom(atom, which, named)
    return total
