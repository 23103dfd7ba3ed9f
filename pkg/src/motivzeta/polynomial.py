"""Sparse multivariate integer polynomials (used for germs, face truncations and oracles)."""

from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class Polynomial:
    """Integer polynomial in named variables; immutable."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, int] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        n = len(self.variables)
        clean: dict[Exponent, int] = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError("exponent length does not match the variable count")
            if c:
                clean[tuple(e)] = clean.get(tuple(e), 0) + c
        self.terms: dict[Exponent, int] = {e: c for e, c in clean.items() if c}
        self._hash: int | None = None

    @classmethod
    def constant(cls, variables: Sequence[str], c: int) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        i = list(variables).index(name)
        return cls(variables, {tuple(1 if j == i else 0 for j in range(len(variables))): 1})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable lists")
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.variables, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def key(self) -> tuple:
        return (self.variables, tuple(sorted(self.terms.items())))

    def restrict(self, exponents: Iterable[Exponent]) -> "Polynomial":
        keep = set(exponents)
        return Polynomial(self.variables, {e: c for e, c in self.terms.items() if e in keep})

    def active_variables(self) -> list[int]:
        return [i for i in range(self.nvars) if any(e[i] for e in self.terms)]

    def drop_to(self, indices: Sequence[int]) -> "Polynomial":
        """Reindex onto the given subset of variables (others must be absent)."""
        idx = list(indices)
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in idx):
                raise ValueError("dropped variable occurs in the polynomial")
            out[tuple(e[i] for i in idx)] = c
        return Polynomial([self.variables[i] for i in idx], out)

    def brieskorn_terms(self) -> list[tuple[int, int, int]] | None:
        """[(variable index, coefficient, exponent)] when every term is a power of its own variable."""
        seen: set[int] = set()
        out = []
        for e, c in self.terms.items():
            nz = [i for i, a in enumerate(e) if a]
            if len(nz) != 1 or nz[0] in seen:
                return None
            seen.add(nz[0])
            out.append((nz[0], c, e[nz[0]]))
        return sorted(out)

    def monomial_gcd_exponent(self) -> int:
        (e, _), = self.terms.items()
        g = 0
        for a in e:
            g = gcd(g, a)
        return g

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial(self.variables, out)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t = t * x**a
            total += t
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0]))):
            factors = []
            for name, a in zip(self.variables, e):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            mono = "*".join(factors)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.render()!r}, variables={self.variables})"

    def __str__(self):
        return self.render()
