"""Parsers for polynomials and class expressions.

Polynomial grammar: integers, variables [a-z][a-z0-9]*, + - * ^ and parentheses.
Class grammar adds the scalar L, the unit class `unit`, catalog atoms
(Mon(+,k), ZeroSet[...], FiberSet[...;+1], Torus[...;{..}], PolyTorus("..."),
PolyZeroSet("..."), Named("..",dim), NamedEq("..")), division by scalars and
conv(a, b, ...). Whatever `render` prints for a class parses back to it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError, UnsupportedExpansion
from .motive import (
    ASClass,
    BrieskornSpec,
    FiberSet,
    MotClass,
    Mon,
    Named,
    NamedEq,
    PolyTorus,
    PolyZeroSet,
    ZeroSet,
    canonical_spec,
    convolve_all,
    make_geom_torus,
)
from .polynomial import Polynomial
from .scalars import ScalarValue

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r'|(?P<str>"[^"\n]*")|(?P<op>[-+*/^(),\[\];{}])'
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(src: str) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind != "ws":
                out.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Cursor:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("op",) and t.text == text

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind in ("str", "eof"):
            self.fail(f"expected {text!r}", t)
        return self.take()

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.column)

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "num":
            self.fail("expected an integer")
        return int(self.take().text)

    def signed_integer(self) -> int:
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
        return sign * self.integer()

    def finish(self):
        if self.peek().kind != "eof":
            self.fail("unexpected trailing input")


# ---------------------------------------------------------------------------
# polynomials

_VAR = re.compile(r"[a-z][a-z0-9]*\Z")
_MAX_POWER = 64


def natural_key(name: str):
    m = re.match(r"([a-z]+)(\d*)\Z", name)
    if m:
        return (m.group(1), int(m.group(2)) if m.group(2) else -1, name)
    return (name, -1, name)


SparsePoly = dict  # {tuple of (var, exp) sorted: int}


def _pmul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    out: SparsePoly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            merged = dict(ma)
            for v, e in mb:
                merged[v] = merged.get(v, 0) + e
            key = tuple(sorted(merged.items()))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _padd(a: SparsePoly, b: SparsePoly, sign: int = 1) -> SparsePoly:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + sign * c
    return {k: v for k, v in out.items() if v}


class _PolyParser:
    def __init__(self, src: str):
        self.c = _Cursor(src)

    def parse(self) -> SparsePoly:
        if self.c.peek().kind == "eof":
            self.c.fail("empty polynomial")
        p = self.expr()
        self.c.finish()
        return p

    def expr(self) -> SparsePoly:
        p = self.term()
        while self.c.at("+") or self.c.at("-"):
            sign = 1 if self.c.take().text == "+" else -1
            p = _padd(p, self.term(), sign)
        return p

    def term(self) -> SparsePoly:
        p = self.unary()
        while self.c.at("*"):
            self.c.take()
            p = _pmul(p, self.unary())
        return p

    def unary(self) -> SparsePoly:
        if self.c.at("-"):
            self.c.take()
            return {m: -c for m, c in self.unary().items()}
        if self.c.at("+"):
            self.c.take()
            return self.unary()
        return self.power()

    def power(self) -> SparsePoly:
        base = self.atom()
        if self.c.at("^"):
            self.c.take()
            tok = self.c.peek()
            n = self.c.integer()
            if n > _MAX_POWER:
                raise ParseError(f"exponent {n} exceeds {_MAX_POWER}", tok.line, tok.column)
            out: SparsePoly = {(): 1}
            for _ in range(n):
                out = _pmul(out, base)
            return out
        return base

    def atom(self) -> SparsePoly:
        t = self.c.peek()
        if t.kind == "num":
            v = int(self.c.take().text)
            return {(): v} if v else {}
        if t.kind == "ident":
            if not _VAR.match(t.text):
                self.c.fail("variables must match [a-z][a-z0-9]*")
            self.c.take()
            return {((t.text, 1),): 1}
        if self.c.at("("):
            self.c.take()
            p = self.expr()
            self.c.expect(")")
            return p
        self.c.fail("expected a number, variable or '('")


def sparse_to_polynomial(p: SparsePoly, variables: list[str] | None = None) -> Polynomial:
    names = sorted({v for m in p for v, _ in m}, key=natural_key)
    if variables is not None:
        missing = [v for v in names if v not in variables]
        if missing:
            raise ValueError(f"unknown variables {missing}")
        names = list(variables)
    idx = {v: i for i, v in enumerate(names)}
    terms = {}
    for m, c in p.items():
        e = [0] * len(names)
        for v, a in m:
            e[idx[v]] = a
        terms[tuple(e)] = c
    return Polynomial(names, terms)


@dataclass(frozen=True)
class PolyExpr:
    poly: Polynomial
    brieskorn: BrieskornSpec | None
    source: str

    def render(self) -> str:
        return self.poly.render()


def brieskorn_shape(p: Polynomial) -> BrieskornSpec | None:
    """Distinct single-variable powers (exponent >= 2) with unit coefficients, every variable used."""
    bt = p.brieskorn_terms()
    if bt is None or len(bt) != p.nvars or not bt:
        return None
    if any(abs(c) != 1 or k < 2 for _, c, k in bt):
        return None
    return BrieskornSpec([(c, k) for _, c, k in bt])


def parse_polynomial(src: str, variables: list[str] | None = None) -> PolyExpr:
    p = sparse_to_polynomial(_PolyParser(src).parse(), variables)
    return PolyExpr(p, brieskorn_shape(p), src)


def print_polynomial(p: Polynomial | PolyExpr) -> str:
    return p.render()


# ---------------------------------------------------------------------------
# class expressions

Value = Union[ScalarValue, ASClass, MotClass]


def _rank(v) -> int:
    return 0 if isinstance(v, ScalarValue) else 1 if isinstance(v, ASClass) else 2


def _lift(v, r: int):
    if _rank(v) >= r:
        return v
    if r == 1:
        return ASClass.scalar(v)
    return MotClass.scalar(v if isinstance(v, ASClass) else ASClass.scalar(v))


def _add(a, b, sign: int = 1):
    r = max(_rank(a), _rank(b))
    a, b = _lift(a, r), _lift(b, r)
    return a + b if sign > 0 else a - b


def _mul(a, b):
    if isinstance(a, MotClass) and isinstance(b, MotClass):
        return a * b
    if isinstance(a, MotClass):
        return a.scale(b)
    if isinstance(b, MotClass):
        return b.scale(a)
    r = max(_rank(a), _rank(b))
    return _lift(a, r) * _lift(b, r)


def _as_scalar(v) -> ScalarValue | None:
    if isinstance(v, ScalarValue):
        return v
    if isinstance(v, ASClass) and v.is_scalar():
        return v.scalar_value()
    if isinstance(v, MotClass) and v.is_pure():
        return v.scalar_class().scalar_value()
    return None


class _ClassParser:
    def __init__(self, src: str):
        self.c = _Cursor(src)

    def parse(self) -> Value:
        if self.c.peek().kind == "eof":
            self.c.fail("empty class expression")
        v = self.expr()
        self.c.finish()
        return v

    def expr(self):
        v = self.term()
        while self.c.at("+") or self.c.at("-"):
            sign = 1 if self.c.take().text == "+" else -1
            v = _add(v, self.term(), sign)
        return v

    def term(self):
        v = self.unary()
        while self.c.at("*") or self.c.at("/"):
            op = self.c.take()
            rhs = self.unary()
            if op.text == "*":
                try:
                    v = _mul(v, rhs)
                except UnsupportedExpansion as exc:
                    raise ParseError(str(exc), op.line, op.column) from None
            else:
                s = _as_scalar(rhs)
                if s is None or s.is_zero():
                    raise ParseError("can only divide by a nonzero scalar", op.line, op.column)
                v = _mul(v, ScalarValue.of(1) / s)
        return v

    def unary(self):
        if self.c.at("-"):
            self.c.take()
            return _mul(ScalarValue.of(-1), self.unary())
        if self.c.at("+"):
            self.c.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.c.at("^"):
            tok = self.c.take()
            n = self.c.signed_integer()
            if isinstance(base, ScalarValue):
                return base**n if n >= 0 else ScalarValue.of(1) / base ** (-n)
            if n < 0:
                raise ParseError("negative powers apply to scalars only", tok.line, tok.column)
            out = _lift(ScalarValue.of(1), _rank(base))
            for _ in range(n):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        c = self.c
        t = c.peek()
        if t.kind == "num":
            return ScalarValue.of(int(c.take().text))
        if c.at("("):
            c.take()
            v = self.expr()
            c.expect(")")
            return v
        if t.kind != "ident":
            c.fail("expected a class expression")
        c.take()
        name = t.text
        if name == "L":
            return ScalarValue.L()
        if name == "unit":
            return MotClass.unit()
        if name == "Mon":
            c.expect("(")
            sign = self._sign()
            c.expect(",")
            k = c.integer()
            c.expect(")")
            if k < 1:
                c.fail("exponent must be positive")
            return MotClass.atom(Mon(sign, k))
        if name == "ZeroSet":
            spec = self._spec_list(stop="]")
            c.expect("]")
            return ASClass.gen(ZeroSet(spec))
        if name == "FiberSet":
            spec = self._spec_list(stop=";")
            c.expect(";")
            value = c.signed_integer()
            c.expect("]")
            if value not in (1, -1):
                c.fail("fiber value must be +1 or -1")
            return ASClass.gen(FiberSet(spec, value))
        if name == "Torus":
            spec = self._spec_list(stop=";", raw=True)
            c.expect(";")
            blocks = []
            while c.at("{"):
                c.take()
                blk = [c.integer()]
                while c.at(","):
                    c.take()
                    blk.append(c.integer())
                c.expect("}")
                blocks.append(blk)
            c.expect("]")
            if any(i >= len(spec) for b in blocks for i in b):
                c.fail("exclusion index out of range")
            try:
                return MotClass.atom(make_geom_torus(spec, blocks))
            except UnsupportedExpansion as exc:
                raise ParseError(str(exc), t.line, t.column) from None
        if name in ("PolyTorus", "PolyZeroSet"):
            c.expect("(")
            s = c.peek()
            if s.kind != "str":
                c.fail("expected a quoted polynomial")
            c.take()
            try:
                poly = parse_polynomial(s.text[1:-1]).poly
            except ParseError as exc:
                raise ParseError(f"in quoted polynomial: {exc.message}", s.line, s.column + exc.column) from None
            c.expect(")")
            if name == "PolyTorus":
                return MotClass.atom(PolyTorus(poly))
            return ASClass.gen(PolyZeroSet(poly))
        if name == "Named":
            c.expect("(")
            label = self._string()
            c.expect(",")
            dim = c.integer()
            c.expect(")")
            return ASClass.gen(Named(label, dim))
        if name == "NamedEq":
            c.expect("(")
            label = self._string()
            c.expect(")")
            return MotClass.atom(NamedEq(label))
        if name == "conv":
            c.expect("(")
            args = [self.expr()]
            while c.at(","):
                c.take()
                args.append(self.expr())
            c.expect(")")
            return convolve_all(_lift(a, 2) for a in args)
        c.fail(f"unknown name {name!r}", t)

    def _sign(self) -> int:
        if self.c.at("+") or self.c.at("-"):
            return 1 if self.c.take().text == "+" else -1
        self.c.fail("expected '+' or '-'")

    def _string(self) -> str:
        s = self.c.peek()
        if s.kind != "str":
            self.c.fail("expected a quoted label")
        self.c.take()
        return s.text[1:-1]

    def _spec_list(self, stop: str, raw: bool = False):
        c = self.c
        c.expect("[")
        items = []
        if not c.at(stop):
            while True:
                sign = self._sign()
                k = c.integer()
                if k < 1:
                    c.fail("exponent must be positive")
                items.append((sign, k))
                if not c.at(","):
                    break
                c.take()
        return tuple(items) if raw else canonical_spec(items)


def parse_class(src: str) -> Value:
    """Parse a class expression; the result is a scalar, a set class or an equivariant class."""
    return _ClassParser(src).parse()


def parse_motclass(src: str) -> MotClass:
    """Parse into the equivariant ring; scalars and set classes are read as multiples of the unit."""
    return _lift(parse_class(src), 2)


def parse_asclass(src: str) -> ASClass:
    v = parse_class(src)
    if isinstance(v, MotClass):
        raise ParseError("expected a non-equivariant class", 1, 1)
    return _lift(v, 1)


def print_class(v: Value) -> str:
    return v.render()
