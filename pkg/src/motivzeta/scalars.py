"""Exact scalars: integer Laurent polynomials, their fraction field, truncated L-series.

The same machinery serves the Lefschetz variable `L` and the realization
variable `u`; only the rendering name differs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

from .errors import DivisionByZero, ParseError


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (index = degree, no trailing zeros)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _primitive(a: list[int]) -> list[int]:
    g = _content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    lb, db = b[-1], len(b) - 1
    while len(a) - 1 >= db and a:
        la, shift = a[-1], len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        _trim(a)
    return a


def poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Gcd in Z[x] with positive leading coefficient (content included)."""
    a, b = _trim(list(a)), _trim(list(b))
    if not a or not b:
        rest = a or b
        return [-c for c in rest] if rest and rest[-1] < 0 else rest
    cont = gcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return [cont * c for c in _primitive(a)]


def poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact quotient a / b in Z[x]; raises ValueError if the division is inexact."""
    a = _trim(list(a))
    if not a:
        return []
    db, lb = len(b) - 1, b[-1]
    q = [0] * (len(a) - db)
    while a and len(a) - 1 >= db:
        la, shift = a[-1], len(a) - 1 - db
        if la % lb:
            raise ValueError("inexact polynomial division")
        t = la // lb
        q[shift] = t
        for i, c in enumerate(b):
            a[i + shift] -= t * c
        _trim(a)
    if a:
        raise ValueError("inexact polynomial division")
    return q


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Integer Laurent polynomial in one variable; immutable, canonical (no zero coefficients)."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c: dict[int, int] = {e: c for e, c in (coeffs or {}).items() if c}
        self._hash: int | None = None

    # construction
    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], shift: int = 0) -> "LaurentPoly":
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    def to_dense(self) -> tuple[list[int], int]:
        """Return (coefficients from low degree, low degree)."""
        if not self._c:
            return [], 0
        lo, hi = self.low_degree(), self.degree()
        return [self._c.get(e, 0) for e in range(lo, hi + 1)], lo

    # inspection
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero polynomial")
        return max(self._c)

    def low_degree(self) -> int:
        if not self._c:
            raise ValueError("low degree of the zero polynomial")
        return min(self._c)

    def leading_coefficient(self) -> int:
        return self._c[self.degree()]

    def coefficient(self, e: int) -> int:
        return self._c.get(e, 0)

    def evaluate(self, value):
        if value == 0 and self._c and self.low_degree() < 0:
            raise DivisionByZero("negative power evaluated at zero")
        total = 0
        for e, c in self._c.items():
            total += c * (Fraction(value) ** e if e < 0 else value**e)
        return total

    # arithmetic
    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._c) == 1:
            (e2, c2), = other._c.items()
            return LaurentPoly({e + e2: c * c2 for e, c in self._c.items()})
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial() or abs(self.leading_coefficient()) != 1:
                raise ValueError("only unit monomials have Laurent inverses")
            (e, c), = self._c.items()
            return LaurentPoly({e * n: c**n if n % 2 == 0 else c})
        result, base = LaurentPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self._c.items()})

    def substitute_sign(self) -> "LaurentPoly":
        """p(-x)."""
        return LaurentPoly({e: -c if e % 2 else c for e, c in self._c.items()})

    # equality / hashing
    def __eq__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self.render()!r})"

    def render(self, var: str = "L") -> str:
        if not self._c:
            return "0"
        parts: list[str] = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                power = var if e == 1 else f"{var}^{e}"
                body = power if a == 1 else f"{a}*{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()


def _as_laurent(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    return NotImplemented


ZERO_POLY = LaurentPoly()
ONE_POLY = LaurentPoly.const(1)


# ---------------------------------------------------------------------------


class ScalarValue:
    """Ratio of integer Laurent polynomials in canonical form.

    The denominator has low degree 0 and a positive leading coefficient, and
    shares no non-unit factor with the numerator. Equality is then structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int = 0, den: LaurentPoly | int = 1, *, _canonical: bool = False):
        num = _as_laurent(num)
        den = _as_laurent(den)
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num: LaurentPoly = num
        self.den: LaurentPoly = den
        self._hash: int | None = None

    @classmethod
    def L(cls, k: int = 1) -> "ScalarValue":
        return cls(LaurentPoly.monomial(k), ONE_POLY, _canonical=True)

    @classmethod
    def of(cls, x) -> "ScalarValue":
        if isinstance(x, ScalarValue):
            return x
        if isinstance(x, (int, LaurentPoly)):
            return cls(_as_laurent(x), ONE_POLY, _canonical=True)
        raise TypeError(f"cannot make a scalar from {x!r}")

    # inspection
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == ONE_POLY

    def is_one(self) -> bool:
        return self.is_laurent() and self.num == ONE_POLY

    def degree(self) -> int:
        """Degree as a rational function (deg num - deg den)."""
        return self.num.degree() - self.den.degree()

    def evaluate(self, value):
        d = self.den.evaluate(value)
        if d == 0:
            raise DivisionByZero(f"denominator vanishes at {value}")
        return Fraction(self.num.evaluate(value)) / d

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    # arithmetic
    def __add__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den == ONE_POLY:
                return ScalarValue(self.num + other.num, ONE_POLY, _canonical=True)
            return ScalarValue(self.num + other.num, self.den)
        return ScalarValue(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarValue(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == ONE_POLY and other.den == ONE_POLY:
            return ScalarValue(self.num * other.num, ONE_POLY, _canonical=True)
        return ScalarValue(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by the zero scalar")
        return ScalarValue(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_scalar(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return ScalarValue.of(1) / (self ** (-n))
        return ScalarValue(self.num**n, self.den**n, _canonical=self.is_laurent())

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"ScalarValue({self.render()!r})"

    def render(self, var: str = "L") -> str:
        n = self.num.render(var)
        if self.is_laurent():
            return n
        d = self.den.render(var)
        if len(self.num.coeffs) > 1:
            n = f"({n})"
        if len(self.den.coeffs) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.render()

    def expand_at_infinity(self, depth: int) -> "TruncatedLSeries":
        """Laurent expansion in L^-1 keeping exponents >= -depth."""
        if self.is_laurent():
            terms = {e: c for e, c in self.num.coeffs.items() if e >= -depth}
            return TruncatedLSeries(terms, depth, complete=len(terms) == len(self.num.coeffs))
        dense, lo = self.den.to_dense()
        m = len(dense) - 1
        lead = dense[-1]
        if abs(lead) != 1:
            raise ValueError("expansion at infinity needs a unit leading coefficient")
        # den = L^m * D(t), t = L^-1, D(t) = sum_i dense[m-i] t^i
        top = self.num.degree() - m
        need = top + depth
        if need < 0:
            return TruncatedLSeries({}, depth, complete=False)
        inv = [0] * (need + 1)
        dcoef = [dense[m - i] for i in range(m + 1)]
        for j in range(need + 1):
            s = 1 if j == 0 else 0
            for i in range(1, min(j, m) + 1):
                s -= dcoef[i] * inv[j - i]
            inv[j] = s * lead  # divide by lead = +-1
        terms: dict[int, int] = {}
        for e, c in self.num.coeffs.items():
            for j, v in enumerate(inv):
                x = e - m - j
                if x < -depth:
                    break
                if v:
                    terms[x] = terms.get(x, 0) + c * v
        return TruncatedLSeries(terms, depth, complete=False)


def _as_scalar(x):
    if isinstance(x, ScalarValue):
        return x
    if isinstance(x, (int, LaurentPoly)):
        return ScalarValue(_as_laurent(x), ONE_POLY, _canonical=True)
    return NotImplemented


def _canonicalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return ZERO_POLY, ONE_POLY
    # unit monomial factor of the denominator moves to the numerator
    dlo = den.low_degree()
    nd, _ = den.to_dense()
    if len(nd) == 1:
        c = nd[0]
        nn, nlo = num.to_dense()
        g = _content(nn)
        g = gcd(g, c)
        if c < 0:
            g = -g
        return LaurentPoly.from_dense([x // g for x in nn], nlo - dlo), LaurentPoly.const(c // g)
    nn, nlo = num.to_dense()
    g = poly_gcd(nn, nd)
    if len(g) > 1 or (g and g[0] != 1):
        nn = poly_divexact(nn, g)
        nd = poly_divexact(nd, g)
    if nd[-1] < 0:
        nn = [-x for x in nn]
        nd = [-x for x in nd]
    return LaurentPoly.from_dense(nn, nlo - dlo), LaurentPoly.from_dense(nd)


def scalar_arith(a: ScalarValue, b: ScalarValue, op: str) -> ScalarValue:
    """Dispatch `op` in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")


ZERO = ScalarValue.of(0)
ONE = ScalarValue.of(1)
LEF = ScalarValue.L(1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedLSeries:
    """Integer series in L^-1 cut below exponent -depth.

    `complete` is False whenever terms below the cut may have been dropped.
    """

    terms: dict[int, int] = field(default_factory=dict)
    depth: int = 0
    complete: bool = True

    def __post_init__(self):
        clean = {e: c for e, c in self.terms.items() if c and e >= -self.depth}
        object.__setattr__(self, "terms", clean)

    def __add__(self, other: "TruncatedLSeries") -> "TruncatedLSeries":
        depth = min(self.depth, other.depth)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedLSeries(out, depth, self.complete and other.complete)

    def __mul__(self, other: "TruncatedLSeries") -> "TruncatedLSeries":
        depth = min(self.depth, other.depth)
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                if e1 + e2 >= -depth:
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return TruncatedLSeries(out, depth, self.complete and other.complete)

    def agrees_with(self, other: "TruncatedLSeries") -> bool:
        depth = min(self.depth, other.depth)
        a = {e: c for e, c in self.terms.items() if e >= -depth}
        b = {e: c for e, c in other.terms.items() if e >= -depth}
        return a == b

    def render(self, var: str = "L") -> str:
        body = LaurentPoly(self.terms).render(var)
        return body if self.complete else f"{body} + O({var}^{-self.depth - 1})"


def expand_geometric(c: int, depth: int) -> TruncatedLSeries:
    """sum_{j>=0} L^(-c*j) truncated at exponent -depth."""
    if c < 1:
        raise ValueError("expand_geometric needs c >= 1")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return TruncatedLSeries({-c * j: 1 for j in range(depth // c + 1)}, depth, complete=False)


# ---------------------------------------------------------------------------
# text form: integers, the variable, ^ with signed integer exponents, * / + - and parentheses

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(.))")


def parse_scalar(text: str, var: str = "L") -> ScalarValue:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            tokens.append(("int", m.group(1), col))
        elif m.group(2):
            tokens.append(("name", m.group(2), col))
        elif m.group(3):
            tokens.append(("op", "^", col))
        elif m.group(4).strip():
            tokens.append(("op", m.group(4), col))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    p = _ScalarParser(tokens, var)
    value = p.expr()
    kind, tok, col = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r}", 1, col)
    return value


class _ScalarParser:
    def __init__(self, tokens, var):
        self.tokens, self.i, self.var = tokens, 0, var

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expr(self) -> ScalarValue:
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> ScalarValue:
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self) -> ScalarValue:
        if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self) -> ScalarValue:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, tok, col = self.take()
            if kind != "int":
                raise ParseError("expected an integer exponent", 1, col)
            return base ** (sign * int(tok))
        return base

    def atom(self) -> ScalarValue:
        kind, tok, col = self.take()
        if kind == "int":
            return ScalarValue.of(int(tok))
        if kind == "name":
            if tok != self.var:
                raise ParseError(f"unknown symbol {tok!r}", 1, col)
            return ScalarValue.L(1)
        if tok == "(":
            v = self.expr()
            kind, tok, col = self.take()
            if tok != ")":
                raise ParseError("expected ')'", 1, col)
            return v
        raise ParseError(f"unexpected {tok or 'end of input'!r}", 1, col)
