"""Zeta series: truncated coefficient arrays and rational closed forms.

A rational form is a sum of terms

    coeff * T^shift * prod_x L^-nu T^N / (1 - L^-nu T^N) * prod_1 1 / (1 - L^-nu T^N) * prod_c 1 / (1 - L^-c)

where the last product (pure-L factors, produced by cone sums) is folded into
the coefficient as the exact scalar L^c / (L^c - 1) whenever the term is
expanded, realized or sent to infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import NotInSrForm, TruncationMismatch
from .motive import ASClass, MotClass, convolve, forget
from .realization import beta_F, chi_F, realization_name
from .scalars import LaurentPoly, ScalarValue

X_FORM = "x"  # L^-nu T^N / (1 - L^-nu T^N)
ONE_FORM = "1"  # 1 / (1 - L^-nu T^N)


@dataclass(frozen=True)
class Factor:
    nu: int
    N: int
    form: str = X_FORM

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("factor T-exponent must be positive")
        if self.form not in (X_FORM, ONE_FORM):
            raise ValueError(f"unknown factor form {self.form!r}")

    def sort_key(self):
        return (self.form != X_FORM, -self.N, self.nu)


def pure_l_scalar(c: int) -> ScalarValue:
    """1 / (1 - L^-c) = L^c / (L^c - 1), kept exact."""
    lc = ScalarValue.L(c)
    return lc / (lc - 1)


@dataclass(frozen=True)
class RationalTerm:
    coeff: MotClass
    factors: tuple[Factor, ...] = ()
    shift: int = 0
    pure_l: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=Factor.sort_key)))
        object.__setattr__(self, "pure_l", tuple(sorted(self.pure_l)))
        if self.shift < 0:
            raise ValueError("negative T-shift")

    def folded_coeff(self) -> MotClass:
        c = self.coeff
        for p in self.pure_l:
            c = c.scale(pure_l_scalar(p))
        return c

    def shape(self) -> tuple:
        return (self.factors, self.shift)

    def min_order(self) -> int:
        return self.shift + sum(f.N for f in self.factors if f.form == X_FORM)


def scalar_series(factors: Sequence[Factor], shift: int, order: int) -> list[LaurentPoly]:
    """Coefficients 0..order of T^shift * prod factors, as Laurent polynomials in L."""
    start = shift
    base = LaurentPoly.const(1)
    for f in factors:
        if f.form == X_FORM:
            start += f.N
            base = base * LaurentPoly.monomial(-f.nu)
    out = [LaurentPoly()] * (order + 1)
    if start > order:
        return out
    cur = [LaurentPoly()] * (order + 1 - start)
    cur[0] = base
    for f in factors:
        step = LaurentPoly.monomial(-f.nu)
        for n in range(f.N, len(cur)):
            if not cur[n - f.N].is_zero():
                cur[n] = cur[n] + cur[n - f.N] * step
    for i, v in enumerate(cur):
        out[start + i] = v
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZetaSeries:
    """Coefficients of T^1..T^N; index 0 is absent."""

    coeffs: tuple[MotClass, ...]

    def __init__(self, coeffs: Iterable[MotClass]):
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def zero(cls, order: int) -> "ZetaSeries":
        return cls([MotClass.zero()] * order)

    @classmethod
    def from_function(cls, fn: Callable[[int], MotClass], order: int) -> "ZetaSeries":
        return cls(fn(n) for n in range(1, order + 1))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> MotClass:
        if not 1 <= n <= self.order:
            raise IndexError(f"coefficient index {n} outside 1..{self.order}")
        return self.coeffs[n - 1]

    def truncate(self, order: int) -> "ZetaSeries":
        if order > self.order:
            raise TruncationMismatch(f"cannot extend order {self.order} to {order}")
        return ZetaSeries(self.coeffs[:order])

    def _check(self, other: "ZetaSeries"):
        if self.order != other.order:
            raise TruncationMismatch(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "ZetaSeries") -> "ZetaSeries":
        self._check(other)
        return ZetaSeries(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "ZetaSeries") -> "ZetaSeries":
        self._check(other)
        return ZetaSeries(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "ZetaSeries":
        return ZetaSeries(-a for a in self.coeffs)

    def scale(self, s) -> "ZetaSeries":
        return ZetaSeries(a.scale(s) for a in self.coeffs)

    def map(self, fn: Callable[[MotClass], MotClass]) -> "ZetaSeries":
        return ZetaSeries(fn(a) for a in self.coeffs)

    def first_difference(self, other: "ZetaSeries") -> int | None:
        self._check(other)
        for n, (a, b) in enumerate(zip(self.coeffs, other.coeffs), start=1):
            if a != b:
                return n
        return None

    def realize_chi(self, which: str = "forget", named=None) -> list[int]:
        return [chi_F(a, which, named) for a in self.coeffs]

    def realize_beta(self, which: str = "forget", named=None) -> list[ScalarValue]:
        return [beta_F(a, which, named) for a in self.coeffs]

    def render(self) -> str:
        pieces = []
        for n, a in enumerate(self.coeffs, start=1):
            if a.is_zero():
                continue
            t = "T" if n == 1 else f"T^{n}"
            body = _wrap_sum(a.render())
            pieces.append(f"{body}*{t}")
        pieces.append(f"O(T^{self.order + 1})")
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.render()


def hadamard(a: ZetaSeries, b: ZetaSeries) -> ZetaSeries:
    """Coefficientwise convolution."""
    a._check(b)
    return ZetaSeries(convolve(x, y) for x, y in zip(a.coeffs, b.coeffs))


def naive_of(z: ZetaSeries) -> ZetaSeries:
    """Forget every coefficient and re-embed it as a scalar multiple of the unit."""
    return ZetaSeries(MotClass.scalar(forget(a)) for a in z.coeffs)


def _to_modified(z: ZetaSeries) -> ZetaSeries:
    # coefficient n: Z_n - 1 + sum_{j<=n} naive_j
    out = []
    running = ASClass()
    unit = MotClass.unit()
    for a in z.coeffs:
        running = running + forget(a)
        out.append(a - unit + MotClass.scalar(running))
    return ZetaSeries(out)


def _to_plain(zt: ZetaSeries) -> ZetaSeries:
    # coefficient n: Zt_n + L^-n * 1 - sum_{j<=n} L^(j-n-1) * naive(Zt)_j
    out = []
    acc = ASClass()  # sum_j L^(j-n-1) naive_j, updated as n grows
    linv = ScalarValue.L(-1)
    for n, a in enumerate(zt.coeffs, start=1):
        acc = acc * linv + forget(a) * linv
        out.append(a + MotClass.scalar(ScalarValue.L(-n)) - MotClass.scalar(acc))
    return ZetaSeries(out)


def modified_transform(z: ZetaSeries, direction: str = "toModified") -> ZetaSeries:
    if direction in ("toModified", "modified"):
        return _to_modified(z)
    if direction in ("toPlain", "plain"):
        return _to_plain(z)
    raise ValueError(f"unknown transform direction {direction!r}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MilnorFiber:
    value: MotClass

    def render(self) -> str:
        return self.value.render()

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class RationalZeta:
    terms: tuple[RationalTerm, ...] = field(default_factory=tuple)

    def __init__(self, terms: Iterable[RationalTerm] = ()):
        object.__setattr__(self, "terms", tuple(t for t in terms if not t.coeff.is_zero()))

    @classmethod
    def single(cls, coeff: MotClass, factors: Sequence[Factor] = (), shift: int = 0, pure_l=()) -> "RationalZeta":
        return cls([RationalTerm(coeff, tuple(factors), shift, tuple(pure_l))])

    def __add__(self, other: "RationalZeta") -> "RationalZeta":
        return RationalZeta(self.terms + other.terms)

    def __neg__(self) -> "RationalZeta":
        return RationalZeta(RationalTerm(-t.coeff, t.factors, t.shift, t.pure_l) for t in self.terms)

    def __sub__(self, other: "RationalZeta") -> "RationalZeta":
        return self + (-other)

    def scale(self, s) -> "RationalZeta":
        """Multiply every coefficient by a scalar, a set class or a class (ring product)."""
        if isinstance(s, MotClass):
            return RationalZeta(RationalTerm(t.coeff * s, t.factors, t.shift, t.pure_l) for t in self.terms)
        return RationalZeta(RationalTerm(t.coeff.scale(s), t.factors, t.shift, t.pure_l) for t in self.terms)

    def mul_factors(self, factors: Sequence[Factor], shift: int = 0, pure_l=()) -> "RationalZeta":
        return RationalZeta(
            RationalTerm(t.coeff, t.factors + tuple(factors), t.shift + shift, t.pure_l + tuple(pure_l))
            for t in self.terms
        )

    def simplify(self) -> "RationalZeta":
        """Fold pure-L factors and merge terms of identical shape (order of first appearance)."""
        merged: dict[tuple, MotClass] = {}
        for t in self.terms:
            key = t.shape()
            c = t.folded_coeff()
            merged[key] = merged[key] + c if key in merged else c
        return RationalZeta(RationalTerm(c, f, s) for (f, s), c in merged.items())

    def expand(self, order: int) -> ZetaSeries:
        out = [MotClass.zero()] * (order + 1)
        for t in self.terms:
            coeff = t.folded_coeff()
            for n, lp in enumerate(scalar_series(t.factors, t.shift, order)):
                if n and not lp.is_zero():
                    out[n] = out[n] + coeff.scale(ScalarValue(lp))
        return ZetaSeries(out[1:])

    def equivalent(self, other: "RationalZeta", order: int | None = None) -> bool:
        if order is None:
            nmax = max((f.N for t in self.terms + other.terms for f in t.factors), default=1)
            nf = max((len(t.factors) for t in self.terms + other.terms), default=1)
            shift = max((t.shift for t in self.terms + other.terms), default=0)
            order = 2 * nmax * max(nf, 1) + 1 + shift
        return self.expand(order) == other.expand(order)

    def realize(self, kind: str, which: str = "forget", named=None) -> "RealizedZeta":
        """Realize coefficient by coefficient; factors are scalars, mapped by L -> -1 or L -> u."""
        which = realization_name(which)
        terms = []
        for t in self.simplify().terms:
            c = t.coeff
            v = ScalarValue.of(chi_F(c, which, named)) if kind == "chi" else beta_F(c, which, named)
            terms.append((v, t.factors, t.shift))
        return RealizedZeta(kind, which, tuple(terms))

    def render(self) -> str:
        """Terms sharing their factors are grouped over a common numerator in T."""
        if not self.terms:
            return "0"
        groups: dict[tuple, list[RationalTerm]] = {}
        for t in self.terms:
            groups.setdefault((t.factors, t.pure_l), []).append(t)
        pieces = []
        for (factors, pure_l), members in groups.items():
            nums = []
            for t in members:
                body = t.coeff.render()
                if t.shift:
                    body = _wrap_sum(body) + "*" + _mono("T", t.shift)
                nums.append(body)
            num = nums[0]
            for b in nums[1:]:
                num += " - " + b[1:] if b.startswith("-") else " + " + b
            if factors + pure_l:
                num = _wrap_sum(num)
            text = num
            for f in factors:
                x = _mono("T", f.N) if not f.nu else f"L^{-f.nu}*{_mono('T', f.N)}"
                text += f"*{x}/(unit - {x})" if f.form == X_FORM else f"/(unit - {x})"
            for c in pure_l:
                text += f"/(1 - L^-{c})"
            pieces.append(text)
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") and not p.startswith("-(") else " + " + p
        return out

    def __str__(self):
        return self.render()


def limit_at_infinity(r: RationalZeta) -> MotClass:
    """The limit T -> infinity of a rational form."""
    total = MotClass.zero()
    for t in r.terms:
        excess = t.shift - sum(f.N for f in t.factors if f.form == ONE_FORM)
        if excess < 0:
            continue
        if excess > 0:
            raise NotInSrForm(f"term grows like T^{excess} at infinity")
        c = t.folded_coeff()
        for f in t.factors:
            if f.form == X_FORM:
                c = -c
            else:
                c = c.scale(-ScalarValue.L(f.nu))
        total = total + c
    return total


def milnor_fiber(r: RationalZeta) -> MilnorFiber:
    return MilnorFiber(-limit_at_infinity(r))


# ---------------------------------------------------------------------------
# rendering helpers and realized forms


def _is_sum(text: str) -> bool:
    """True when a top-level binary + or - occurs outside parentheses."""
    depth = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and text[i - 1] == " ":
            return True
    return False


def _wrap_sum(text: str) -> str:
    return f"({text})" if _is_sum(text) else text


def _mono(var: str, e: int) -> str:
    return "" if e == 0 else (var if e == 1 else f"{var}^{e}")


def _factor_strings(factors, shift, lvar: str, one: str, sign_base: int | None = None) -> list[str]:
    """Render factors; `sign_base=-1` renders (-1)^nu bases as signs for the chi realization."""
    out = []
    if shift:
        out.append(_mono("T", shift))
    for f in factors:
        tn = _mono("T", f.N)
        if sign_base is None:
            lnu = f"{lvar}^{-f.nu}" if f.nu else ""
            x = f"{lnu}*{tn}" if lnu else tn
            den = f"({one} - {x})"
            out.append(f"{x}/{den}" if f.form == X_FORM else f"{one}/{den}")
        else:
            op = "+" if f.nu % 2 else "-"
            den = f"(1 {op} {tn})"
            out.append(f"{tn}/{den}" if f.form == X_FORM else f"1/{den}")
    return out


@dataclass(frozen=True)
class RealizedZeta:
    """A realized rational form: sum of value * T^shift * prod factors with L -> -1 or u."""

    kind: str  # "chi" or "beta"
    which: str
    terms: tuple  # (value: ScalarValue, factors, shift)

    def _base(self, nu: int) -> ScalarValue:
        return ScalarValue.of((-1) ** nu) if self.kind == "chi" else ScalarValue.L(-nu)

    def series(self, order: int) -> list:
        out = [ScalarValue.of(0)] * (order + 1)
        for v, factors, shift in self.terms:
            for n, lp in enumerate(scalar_series(factors, shift, order)):
                if n and not lp.is_zero():
                    s = ScalarValue.of(int(lp.evaluate(-1))) if self.kind == "chi" else ScalarValue(lp)
                    out[n] = out[n] + v * s
        vals = out[1:]
        if self.kind == "chi":
            return [_as_int(x) for x in vals]
        return vals

    def as_function(self) -> ScalarValue:
        """The chi realization as an exact rational function of T."""
        if self.kind != "chi":
            raise ValueError("only the chi realization is a univariate rational function of T")
        tvar = ScalarValue.L()
        total = ScalarValue.of(0)
        for v, factors, shift in self.terms:
            term = v * tvar**shift
            for f in factors:
                x = self._base(f.nu) * tvar**f.N
                term = term * (x / (1 - x) if f.form == X_FORM else 1 / (1 - x))
            total = total + term
        return total

    def render(self) -> str:
        var = "u"
        pieces = []
        for v, factors, shift in self.terms:
            if self.kind == "chi":
                flips = sum(1 for f in factors if f.form == X_FORM and f.nu % 2)
                value = v * (-1) ** flips
                if value.is_zero():
                    continue
                fs = _factor_strings(factors, shift, var, "1", sign_base=-1)
            else:
                value = v
                if value.is_zero():
                    continue
                fs = _factor_strings(factors, shift, var, "1")
            neg = value.num.leading_coefficient() < 0
            mag = -value if neg else value
            if mag.is_one() and fs:
                body = "*".join(fs)
            else:
                coeff = mag.render(var)
                if not (mag.is_laurent() and mag.num.is_monomial()):
                    coeff = f"({coeff})"
                body = "*".join([coeff] + fs)
            pieces.append(("-" if neg else "+", body))
        if not pieces:
            return "0"
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()


def _as_int(x: ScalarValue) -> int:
    if x.is_zero():
        return 0
    if x.is_laurent() and x.num.degree() == 0 and x.num.low_degree() == 0:
        return x.num.coefficient(0)
    raise ValueError(f"non-integer chi coefficient {x.render()}")
