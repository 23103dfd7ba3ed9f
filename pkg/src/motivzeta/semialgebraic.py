"""Exact Euler characteristics with compact supports of plane semialgebraic sets.

Independent of the class algebra: used to realize general face classes in at
most two variables and as an oracle for the catalog formulas. Works by a
cylindrical decomposition over the x-axis; fibers over critical x-values are
handled with real algebraic numbers (squarefree defining polynomial plus an
isolating interval), splitting the defining polynomial whenever an inversion
hits a zero divisor.

Univariate polynomials over Q are dense coefficient lists, lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import UnsupportedDimension
from .polynomial import Polynomial

QPoly = list  # list[Fraction], low -> high, no trailing zeros


def q_trim(a) -> QPoly:
    a = [Fraction(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def q_add(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    return q_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def q_neg(a: QPoly) -> QPoly:
    return [-c for c in a]


def q_sub(a: QPoly, b: QPoly) -> QPoly:
    return q_add(a, q_neg(b))


def q_mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return q_trim(out)


def q_scale(a: QPoly, c) -> QPoly:
    return q_trim([x * c for x in a])


def q_divmod(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lc = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lc
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = q_trim(r)
    return q_trim(q), r


def q_monic(a: QPoly) -> QPoly:
    return [c / a[-1] for c in a] if a else []


def q_gcd(a: QPoly, b: QPoly) -> QPoly:
    while b:
        a, b = b, q_divmod(a, b)[1]
    return q_monic(a)


def q_deriv(a: QPoly) -> QPoly:
    return q_trim([i * c for i, c in enumerate(a)][1:])


def q_eval(a: QPoly, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def q_squarefree(a: QPoly) -> QPoly:
    g = q_gcd(a, q_deriv(a))
    return q_monic(q_divmod(a, g)[0]) if len(g) > 1 else q_monic(a)


def q_sturm(a: QPoly) -> list[QPoly]:
    seq = [a, q_deriv(a)]
    while seq[-1]:
        r = q_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(q_neg(r))
    return [s for s in seq if s]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def q_count_roots(seq: list[QPoly], a, b) -> int:
    """Distinct real roots in (a, b] for non-root endpoints; None means infinity."""

    def v(x):
        if x is None:
            return _variations(_sign(s[-1]) for s in seq)
        if x == "-inf":
            return _variations(_sign(s[-1]) * (-1) ** (len(s) - 1) for s in seq)
        return _variations(_sign(q_eval(s, x)) for s in seq)

    return v(a) - v(b)


def isolate(count: Callable, is_root: Callable, a: Fraction, b: Fraction, k: int) -> list[tuple[Fraction, Fraction]]:
    """Split (a, b] into isolating intervals for its k roots; endpoints are never roots."""
    if k == 0:
        return []
    if k == 1:
        return [(a, b)]
    mid = (a + b) / 2
    step = (b - a) / 4
    while is_root(mid):
        step /= 2
        mid = (a + b) / 2 + step
    left = count(a, mid)
    return isolate(count, is_root, a, mid, left) + isolate(count, is_root, mid, b, k - left)


def _root_bound(count_all: Callable, total: int, is_root: Callable) -> Fraction:
    bound = Fraction(1)
    while True:
        if not is_root(bound) and not is_root(-bound) and count_all(-bound, bound) == total:
            return bound
        bound *= 2


# ---------------------------------------------------------------------------
# real algebraic numbers


class RealAlgebraic:
    """A real root of a squarefree rational polynomial with an isolating interval.

    Elements of Q(xi) are rational polynomials read modulo the defining polynomial.
    """

    def __init__(self, poly: QPoly, lo: Fraction, hi: Fraction):
        self.m = q_monic(poly)
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self.exact: Fraction | None = None
        if len(self.m) == 2:
            self.exact = -self.m[0]

    @classmethod
    def rational(cls, v) -> "RealAlgebraic":
        v = Fraction(v)
        return cls([-v, Fraction(1)], v - 1, v + 1)

    def _set_exact(self, v: Fraction):
        self.exact = v
        self.m = [-v, Fraction(1)]
        self.lo, self.hi = v - 1, v + 1

    def reduce(self, r: QPoly) -> QPoly:
        r = q_trim(r)
        if self.exact is not None:
            return q_trim([q_eval(r, self.exact)])
        return q_divmod(r, self.m)[1] if len(r) >= len(self.m) else r

    def _refine(self):
        mid = (self.lo + self.hi) / 2
        if q_eval(self.m, mid) == 0:
            self._set_exact(mid)
            return
        if q_count_roots(q_sturm(self.m), self.lo, mid) >= 1:
            self.hi = mid
        else:
            self.lo = mid

    def sign(self, r: QPoly) -> int:
        r = self.reduce(r)
        if not r:
            return 0
        if self.exact is not None:
            return _sign(r[0])
        g = q_gcd(self.m, r)
        if len(g) > 1:
            if q_count_roots(q_sturm(g), self.lo, self.hi) > 0:
                self.m = g
                if len(g) == 2:
                    self._set_exact(-g[0])
                return 0
            self.m = q_monic(q_divmod(self.m, g)[0])
            if len(self.m) == 2:
                self._set_exact(-self.m[0])
                return _sign(q_eval(r, self.exact))
        seq = q_sturm(r)
        while True:
            if self.exact is not None:
                return _sign(q_eval(r, self.exact))
            vlo, vhi = q_eval(r, self.lo), q_eval(r, self.hi)
            if vlo and vhi and q_count_roots(seq, self.lo, self.hi) == 0:
                return _sign(vhi)
            self._refine()

    def inverse(self, r: QPoly) -> QPoly:
        """Inverse of a nonzero element; shrinks the defining polynomial on a zero divisor."""
        if self.sign(r) == 0:
            raise ZeroDivisionError("inverse of zero in an algebraic extension")
        if self.exact is not None:
            return [1 / q_eval(r, self.exact)]
        r = self.reduce(r)
        g = q_gcd(self.m, r)
        if len(g) > 1:
            self.m = q_monic(q_divmod(self.m, g)[0])
            if len(self.m) == 2:
                self._set_exact(-self.m[0])
                return [1 / q_eval(r, self.exact)]
            r = self.reduce(r)
        # extended Euclid: s*r == 1 mod m
        r0, r1 = self.m, r
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, rem = q_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, q_sub(s0, q_mul(q, s1))
        return self.reduce(q_scale(s1, 1 / r1[0]))

    def mul(self, a: QPoly, b: QPoly) -> QPoly:
        return self.reduce(q_mul(a, b))

    def approx(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2


# polynomials in y over Q(xi): list of QPoly coefficients, low -> high


def _ky_trim(ctx: RealAlgebraic, a: list) -> list:
    a = [ctx.reduce(c) for c in a]
    while a and ctx.sign(a[-1]) == 0:
        a.pop()
    return a


def _ky_rem(ctx: RealAlgebraic, a: list, b: list) -> list:
    r = list(a)
    inv = ctx.inverse(b[-1])
    while len(r) >= len(b):
        c = ctx.mul(r[-1], inv)
        shift = len(r) - len(b)
        for i, y in enumerate(b):
            r[shift + i] = q_sub(r[shift + i], ctx.mul(c, y))
        r = _ky_trim(ctx, r[:-1])
    return r


def _ky_deriv(ctx: RealAlgebraic, a: list) -> list:
    return _ky_trim(ctx, [q_scale(c, i) for i, c in enumerate(a)][1:])


def _ky_eval(ctx: RealAlgebraic, a: list, y: Fraction) -> QPoly:
    acc: QPoly = []
    for c in reversed(a):
        acc = q_add(q_scale(acc, y), c)
    return ctx.reduce(acc)


def fiber_chi(ctx: RealAlgebraic, coeffs: list, mode: str) -> int:
    """chi_c of {y != 0 : h(y) = 0} (mode 'zero') or {y != 0 : h(y) > 0} (mode 'pos').

    `coeffs` are the coefficients of h in y, each a rational polynomial in xi.
    """
    h = _ky_trim(ctx, coeffs)
    if not h:
        return -2 if mode == "zero" else 0
    r = 0
    while ctx.sign(h[r]) == 0:
        r += 1
    h1 = h[r:]
    if len(h1) == 1:
        if mode == "zero":
            return 0
        s0 = ctx.sign(h1[0])
        return -sum(1 for side in (-1, 1) if s0 * side ** r > 0)
    seq = [h1, _ky_deriv(ctx, h1)]
    while True:
        rem = _ky_rem(ctx, seq[-2], seq[-1])
        if not rem:
            break
        seq.append([q_neg(c) for c in rem])

    def var_at(y) -> int:
        if y == "-inf":
            return _variations(ctx.sign(s[-1]) * (-1) ** (len(s) - 1) for s in seq)
        if y == "inf":
            return _variations(ctx.sign(s[-1]) for s in seq)
        return _variations(ctx.sign(_ky_eval(ctx, s, y)) for s in seq)

    total = var_at("-inf") - var_at("inf")
    if mode == "zero":
        return total

    def is_root(y) -> bool:
        return ctx.sign(_ky_eval(ctx, h1, y)) == 0

    def count(a, b) -> int:
        return var_at(a) - var_at(b)

    bound = _root_bound(count, total, is_root)
    zero = Fraction(0)
    kneg = count(-bound, zero)
    neg = isolate(count, is_root, -bound, zero, kneg)
    pos = isolate(count, is_root, zero, bound, total - kneg)

    def sign_h(y: Fraction) -> int:
        return ctx.sign(_ky_eval(ctx, h1, y)) * (1 if y > 0 or r % 2 == 0 else -1)

    near0 = ctx.sign(h1[0])
    signs = []
    if neg:
        signs.append(sign_h(-bound))
        signs += [sign_h(hi) for _, hi in neg[:-1]]
    signs.append(near0 * (-1) ** r)
    signs.append(near0)
    if pos:
        signs += [sign_h(hi) for _, hi in pos[:-1]]
        signs.append(sign_h(bound))
    return -sum(1 for s in signs if s > 0)


# ---------------------------------------------------------------------------
# bivariate decomposition


def _to_qpoly_in_x(terms: dict[int, int]) -> QPoly:
    n = max(terms, default=-1) + 1
    return q_trim([terms.get(i, 0) for i in range(n)])


def _coeffs_in_y(p: Polynomial) -> list[QPoly]:
    by_y: dict[int, dict[int, int]] = {}
    for (a, b), c in p.terms.items():
        by_y.setdefault(b, {})[a] = c
    n = max(by_y, default=-1) + 1
    return [_to_qpoly_in_x(by_y.get(j, {})) for j in range(n)]


def _det(mat: list[list[QPoly]]) -> QPoly:
    """Determinant over Q[x] by fraction-free elimination (exact divisions)."""
    a = [row[:] for row in mat]
    n = len(a)
    sign = 1
    prev: QPoly = [Fraction(1)]
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return []
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = q_sub(q_mul(a[k][k], a[i][j]), q_mul(a[i][k], a[k][j]))
                a[i][j] = q_divmod(num, prev)[0]
            a[i][k] = []
        prev = a[k][k]
    return q_scale(a[n - 1][n - 1], sign) if n else [Fraction(1)]


def principal_subresultants(f: list[QPoly], g: list[QPoly]) -> list[QPoly]:
    """Principal subresultant coefficients psc_0..psc_{deg g - 1} of f, g in Q[x][y]."""
    p, q = len(f) - 1, len(g) - 1
    out = []
    for j in range(q):
        rows = []
        width = p + q - j
        for i in range(q - j):
            row = [[] for _ in range(width)]
            for t, c in enumerate(reversed(f)):
                row[i + t] = c
            rows.append(row)
        for i in range(p - j):
            row = [[] for _ in range(width)]
            for t, c in enumerate(reversed(g)):
                row[i + t] = c
            rows.append(row)
        size = p + q - 2 * j
        out.append(_det([r[:size] for r in rows]))
    return out


def _critical_polynomial(ycoeffs: list[QPoly]) -> QPoly:
    crit = list(ycoeffs[-1])
    if len(ycoeffs) > 1:
        deriv = [q_scale(c, i) for i, c in enumerate(ycoeffs)][1:]
        for s in principal_subresultants(ycoeffs, deriv):
            if s:
                crit = q_mul(crit, s)
    if ycoeffs[0]:
        crit = q_mul(crit, ycoeffs[0])
    return q_squarefree(q_mul(crit, [Fraction(0), Fraction(1)]))


def _fiber_at(ycoeffs: list[QPoly], ctx: RealAlgebraic, mode: str) -> int:
    return fiber_chi(ctx, [list(c) for c in ycoeffs], mode)


def _chi_plane(p: Polynomial, mode: str) -> int:
    ycoeffs = _coeffs_in_y(p)
    crit = _critical_polynomial(ycoeffs)
    seq = q_sturm(crit)
    total = q_count_roots(seq, "-inf", None)

    def is_root(x):
        return q_eval(crit, x) == 0

    def count(a, b):
        return q_count_roots(seq, a, b)

    bound = _root_bound(count, total, is_root)
    cells = isolate(count, is_root, -bound, bound, total)
    chi = 0
    samples = [cells[0][0]] + [hi for _, hi in cells]
    for s in samples:
        chi -= _fiber_at(ycoeffs, RealAlgebraic.rational(s), mode)
    for lo, hi in cells:
        if lo < 0 < hi:
            continue
        chi += _fiber_at(ycoeffs, RealAlgebraic(crit, lo, hi), mode)
    return chi


def _chi_line(p: Polynomial, mode: str) -> int:
    coeffs = [[Fraction(c)] if c else [] for c in _to_qpoly_in_x({e[0]: c for e, c in p.terms.items()})]
    return fiber_chi(RealAlgebraic.rational(0), coeffs, mode)


@lru_cache(maxsize=4096)
def torus_chi(p: Polynomial, mode: str) -> int:
    """chi_c of {p = 0} (mode 'zero') or {p > 0} (mode 'pos') inside the torus of p's variables.

    Supports polynomials with at most two active variables.
    """
    active = p.active_variables()
    spare = p.nvars - len(active)
    factor = (-2) ** spare
    if not active:
        c = p.constant_term()
        if mode == "zero":
            return factor * (1 if c == 0 else 0)
        return factor * (1 if c > 0 else 0)
    q = p.drop_to(active)
    if len(active) == 1:
        return factor * _chi_line(q, mode)
    if len(active) == 2:
        return factor * _chi_plane(q, mode)
    raise UnsupportedDimension(f"semialgebraic oracle supports at most two active variables, got {len(active)}")


def torus_chi_zero(p: Polynomial) -> int:
    return torus_chi(p, "zero")


def torus_chi_positive(p: Polynomial) -> int:
    return torus_chi(p, "pos")


def torus_chi_level(p: Polynomial, value: int) -> int:
    return torus_chi(p - value, "zero")
