"""Newton polyhedra, dual cones, lattice generating functions and the non-degenerate zeta formula."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import gcd
from typing import Sequence

from .errors import DegenerateInput, InvalidGerm, UnsupportedDimension
from .motive import ASClass, MotClass, Mon, PolyTorus, PolyZeroSet, ZeroSet, make_geom_torus
from .polynomial import Polynomial
from .scalars import ScalarValue
from .semialgebraic import q_count_roots, q_deriv, q_gcd, q_sturm, q_trim
from .series import ONE_FORM, X_FORM, Factor, MilnorFiber, RationalTerm, RationalZeta, limit_at_infinity

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# exact linear algebra over Z and Q


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence[int]) -> Vec:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


def rational_kernel(rows: Sequence[Sequence[int]], d: int) -> list[Vec]:
    """Integer vectors spanning the rational kernel (not necessarily a lattice basis)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(d) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * d
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append(primitive([int(x * den) for x in v]))
    return out


def lattice_kernel(rows: Sequence[Sequence[int]], d: int) -> list[Vec]:
    """A Z-basis of {x in Z^d : rows . x = 0}, by unimodular column operations."""
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(d)] for i in range(d)]  # columns of u track the transform
    col = 0
    for row in a:
        if col >= d:
            break
        # reduce entries row[col:] to a single nonzero at position col
        while True:
            nz = [j for j in range(col, d) if row[j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(row[j]))
            _swap_cols(a, u, col, jmin)
            done = True
            for j in range(col + 1, d):
                if row[j]:
                    q = row[j] // row[col]
                    _add_col(a, u, j, col, -q)
                    if row[j]:
                        done = False
            if done:
                break
        if any(row[j] for j in range(col, d)):
            col += 1
    return [tuple(u[i][j] for i in range(d)) for j in range(col, d)]


def _swap_cols(a, u, i, j):
    if i == j:
        return
    for m in (a, u):
        for r in m:
            r[i], r[j] = r[j], r[i]


def _add_col(a, u, target, source, k):
    for m in (a, u):
        for r in m:
            r[target] += k * r[source]


def rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    d = len(vectors[0])
    return d - len(rational_kernel(vectors, d))


def solve_coordinates(gens: Sequence[Vec], p: Sequence[int]) -> tuple[Fraction, ...]:
    """lambda with sum lambda_i g_i = p, for independent generators and p in their span."""
    k = len(gens)
    d = len(p)
    for rows in combinations(range(d), k):
        mat = [[Fraction(gens[j][i]) for j in range(k)] + [Fraction(p[i])] for i in rows]
        sol = _gauss_solve(mat, k)
        if sol is not None:
            if any(sum(sol[j] * gens[j][i] for j in range(k)) != p[i] for i in range(d)):
                raise ValueError("point outside the span of the generators")
            return tuple(sol)
    raise ValueError("generators are dependent")


def _gauss_solve(mat, k):
    m = [r[:] for r in mat]
    for c in range(k):
        piv = next((i for i in range(c, k) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for i in range(k):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][k] / m[i][i] for i in range(k)]


# ---------------------------------------------------------------------------
# Newton polyhedron


@dataclass(frozen=True)
class Facet:
    normal: Vec
    level: int
    tight: frozenset  # support points on the facet


@dataclass(frozen=True)
class Face:
    points: tuple[Vec, ...]  # support points in the face (its vertices among them)
    dim: int
    poly: Polynomial
    cone_generators: tuple[Vec, ...]

    def supporting_value(self, k: Sequence[int]) -> int:
        """m(k) for k in the cone of this face."""
        return _dot(k, self.points[0])


@dataclass(frozen=True)
class NewtonData:
    poly: Polynomial
    support: tuple[Vec, ...]
    facets: tuple[Facet, ...]
    compact_faces: tuple[Face, ...]

    @property
    def d(self) -> int:
        return self.poly.nvars

    def trace(self, k: Sequence[int]) -> frozenset:
        """Support points minimizing k . x."""
        m = min(_dot(k, v) for v in self.support)
        return frozenset(v for v in self.support if _dot(k, v) == m)

    def face_of(self, k: Sequence[int]) -> Face:
        pts = self.trace(k)
        for f in self.compact_faces:
            if frozenset(f.points) == pts:
                return f
        raise KeyError(f"{tuple(k)} does not select a compact face")


def _facets(support: Sequence[Vec], d: int) -> list[Facet]:
    units = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    found: dict[Vec, Facet] = {}
    for npts in range(1, d + 1):
        ndirs = d - npts
        for pts in combinations(support, npts):
            diffs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
            for dirs in combinations(range(d), ndirs):
                rows = diffs + [units[i] for i in dirs]
                ker = rational_kernel(rows, d)
                if len(ker) != 1:
                    continue
                a = ker[0]
                if all(x <= 0 for x in a):
                    a = tuple(-x for x in a)
                if any(x < 0 for x in a):
                    continue
                if a in found:
                    continue
                level = min(_dot(a, v) for v in support)
                tight = frozenset(v for v in support if _dot(a, v) == level)
                if any(_dot(a, p) != level for p in pts):
                    continue
                zero_dirs = [units[i] for i in range(d) if a[i] == 0]
                t0 = next(iter(tight))
                span = [tuple(x - y for x, y in zip(v, t0)) for v in tight if v != t0] + zero_dirs
                if rank(span) != d - 1:
                    continue
                found[a] = Facet(a, level, tight)
    return sorted(found.values(), key=lambda f: f.normal)


def _affine_dim(points: Sequence[Vec]) -> int:
    p0 = points[0]
    return rank([tuple(x - y for x, y in zip(p, p0)) for p in points[1:]]) if len(points) > 1 else 0


def build_newton(f: Polynomial) -> NewtonData:
    if f.is_zero():
        raise InvalidGerm("the zero polynomial has no Newton polyhedron")
    if f.constant_term() != 0:
        raise InvalidGerm("germ does not vanish at the origin")
    d = f.nvars
    support = tuple(sorted(f.terms))
    facets = _facets(support, d)
    faces: dict[frozenset, Face] = {}
    for r in range(1, len(facets) + 1):
        for sub in combinations(facets, r):
            k = tuple(sum(fc.normal[i] for fc in sub) for i in range(d))
            if any(x <= 0 for x in k):
                continue
            m = min(_dot(k, v) for v in support)
            pts = frozenset(v for v in support if _dot(k, v) == m)
            if pts in faces:
                continue
            gens = tuple(fc.normal for fc in facets if pts <= fc.tight)
            ordered = tuple(sorted(pts))
            faces[pts] = Face(ordered, _affine_dim(ordered), f.restrict(ordered), gens)
    compact = sorted(faces.values(), key=lambda fc: (-fc.dim, fc.points))
    return NewtonData(f, support, tuple(facets), tuple(compact))


# ---------------------------------------------------------------------------
# generating functions of open cones


def _parallelepiped_points(gens: Sequence[Vec]) -> list[tuple[Vec, tuple[Fraction, ...]]]:
    """Lattice points sum lambda_i g_i with lambda in (0, 1]^k, with their coordinates."""
    k, d = len(gens), len(gens[0])
    if k == d:
        basis = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    else:
        complement = rational_kernel(gens, d)
        basis = lattice_kernel(complement, d)
    steps = [solve_coordinates(gens, b) for b in basis]

    def wrap(lam):
        out = []
        for x in lam:
            c = -((-x.numerator) // x.denominator)  # ceil
            out.append(x - c + 1)
        return tuple(out)

    start = tuple(Fraction(1) for _ in range(k))
    seen = {start}
    queue = deque([start])
    while queue:
        lam = queue.popleft()
        for st in steps:
            nxt = wrap(tuple(a + b for a, b in zip(lam, st)))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    out = []
    for lam in sorted(seen):
        p = tuple(sum(lam[j] * gens[j][i] for j in range(k)) for i in range(d))
        out.append((tuple(int(x) for x in p), lam))
    return out


def _cyclic_order(gens: Sequence[Vec]) -> list[Vec]:
    """Extreme rays of a pointed 3-dimensional cone in cyclic order around its axis."""
    c = tuple(sum(g[i] for g in gens) for i in range(3))

    def det(a, b, e):
        return (
            a[0] * (b[1] * e[2] - b[2] * e[1])
            - a[1] * (b[0] * e[2] - b[2] * e[0])
            + a[2] * (b[0] * e[1] - b[1] * e[0])
        )

    ref = gens[0]

    def half(w):
        s = det(c, ref, w)
        return 0 if s > 0 or (s == 0 and w == ref) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        s = det(c, a, b)
        return -1 if s > 0 else (1 if s < 0 else 0)

    return sorted(gens, key=cmp_to_key(cmp))


def open_simplicial_pieces(gens: Sequence[Vec]) -> list[tuple[Vec, ...]]:
    """Decompose the relative interior of a cone into relative interiors of simplicial cones."""
    gens = list(gens)
    dim = rank(gens)
    if dim == len(gens):
        return [tuple(gens)]
    if dim == 3 and len(gens[0]) == 3:
        ring = _cyclic_order(gens)
        first = ring[0]
        pieces = [(first, ring[i], ring[i + 1]) for i in range(1, len(ring) - 1)]
        pieces += [(first, ring[i]) for i in range(2, len(ring) - 1)]
        return pieces
    raise UnsupportedDimension(f"cannot triangulate a {dim}-dimensional cone with {len(gens)} rays")


def _simplicial_terms(gens: Sequence[Vec], face: Face) -> list[RationalTerm]:
    unit = MotClass.unit()
    ms = [face.supporting_value(g) for g in gens]
    sizes = [sum(g) for g in gens]
    terms = []
    for p, lam in _parallelepiped_points(gens):
        pure = tuple(s for s, m in zip(sizes, ms) if m == 0)
        if all(x == 1 for x in lam):
            factors = tuple(Factor(s, m, X_FORM) for s, m in zip(sizes, ms) if m > 0)
            coeff = unit.scale(ScalarValue.L(-sum(pure)))
            terms.append(RationalTerm(coeff, factors, 0, pure))
        else:
            factors = tuple(Factor(s, m, ONE_FORM) for s, m in zip(sizes, ms) if m > 0)
            coeff = unit.scale(ScalarValue.L(-sum(p)))
            terms.append(RationalTerm(coeff, factors, face.supporting_value(p), pure))
    return terms


def cone_generating_function(face: Face) -> RationalZeta:
    """sum over lattice points k of the open dual cone of L^-|k| T^m(k)."""
    terms = []
    for piece in open_simplicial_pieces(face.cone_generators):
        terms += _simplicial_terms(piece, face)
    return RationalZeta(terms)


# ---------------------------------------------------------------------------
# non-degeneracy and face classes


def _univariate(p: Polynomial, var: int, other_value: int) -> list:
    out: dict[int, int] = {}
    for e, c in p.terms.items():
        val = c
        for i, a in enumerate(e):
            if i != var:
                val *= other_value**a
        out[e[var]] = out.get(e[var], 0) + val
    n = max(out, default=-1) + 1
    return q_trim([out.get(i, 0) for i in range(n)])


def _has_multiple_nonzero_real_root(g: list) -> bool:
    g = q_trim(g)
    if len(g) <= 1:
        return False
    while g and g[0] == 0:
        g = g[1:]
    h = q_gcd(g, q_deriv(g))
    if len(h) <= 1:
        return False
    return q_count_roots(q_sturm(h), "-inf", None) > 0


def check_nondegenerate(f: Polynomial, newton: NewtonData | None = None) -> bool:
    if f.brieskorn_terms() is not None:
        return True
    newton = newton or build_newton(f)
    d = f.nvars
    for face in newton.compact_faces:
        p = face.poly
        if len(p.terms) == 1:
            continue
        active = p.active_variables()
        if len(active) == 1:
            # one-variable truncation: a sum of powers of one variable is a monomial on a compact face
            continue
        if d > 2:
            raise UnsupportedDimension("non-degeneracy check is implemented for at most two variables")
        for s in (1, -1):
            if _has_multiple_nonzero_real_root(_univariate(p, 0, s)):
                return False
    return True


def face_classes(face: Face, d: int) -> tuple[MotClass, ASClass]:
    """([torus minus zero set, mapped by f_face], [zero set in the torus])."""
    p = face.poly
    active = p.active_variables()
    spare = ASClass.torus(d - len(active))
    if len(p.terms) == 1:
        (e, c), = p.terms.items()
        g = 0
        for a in e:
            g = gcd(g, a)
        return MotClass.atom(Mon(1 if c > 0 else -1, g)).scale(ASClass.torus(d - 1)), ASClass()
    bt = p.brieskorn_terms()
    if bt is not None:
        spec = [(1 if c > 0 else -1, k) for _, c, k in bt]
        atom = make_geom_torus(spec, [range(len(spec))])
        zero = ASClass.gen(ZeroSet(tuple(sorted(spec, key=lambda t: (t[1], t[0])))))
        return MotClass.atom(atom).scale(spare), zero * spare
    local = p.drop_to(active)
    return MotClass.atom(PolyTorus(local)).scale(spare), ASClass.gen(PolyZeroSet(local)) * spare


def _resolve(f: Polynomial, assume_nondegenerate: bool) -> NewtonData:
    newton = build_newton(f)
    if not assume_nondegenerate and not check_nondegenerate(f, newton):
        raise DegenerateInput(f"{f.render()} is degenerate with respect to its Newton polyhedron")
    return newton


def guibert_zeta(f: Polynomial, assume_nondegenerate: bool = False) -> RationalZeta:
    """Zeta function of a non-degenerate polynomial from its compact faces."""
    newton = _resolve(f, assume_nondegenerate)
    total = RationalZeta()
    for face in newton.compact_faces:
        nonzero, zero = face_classes(face, f.nvars)
        gf = cone_generating_function(face)
        total = total + gf.scale(nonzero)
        if not zero.is_zero():
            total = total + gf.mul_factors([Factor(1, 1)]).scale(zero)
    return total.simplify()


def milnor_fiber_newton(f: Polynomial, assume_nondegenerate: bool = False) -> MilnorFiber:
    """-sum over faces of (nonzero class - zero class * unit) times the limit of the face's cone sum."""
    newton = _resolve(f, assume_nondegenerate)
    total = MotClass.zero()
    for face in newton.compact_faces:
        nonzero, zero = face_classes(face, f.nvars)
        lam = limit_at_infinity(cone_generating_function(face))
        total = total - (nonzero - MotClass.scalar(zero)) * lam
    return MilnorFiber(total)


def milnor_fiber_face_signs(f: Polynomial, assume_nondegenerate: bool = False) -> MilnorFiber:
    """The sign-only assembly -sum (-1)^(d - dim face) (nonzero - zero * unit).

    Agrees with `milnor_fiber_newton` when the supporting function is positive on
    every cone generator; otherwise the cone sums carry extra 1/(L^c - 1) factors.
    """
    newton = _resolve(f, assume_nondegenerate)
    d = f.nvars
    total = MotClass.zero()
    for face in newton.compact_faces:
        nonzero, zero = face_classes(face, d)
        total = total - (nonzero - MotClass.scalar(zero)).scale((-1) ** (d - face.dim))
    return MilnorFiber(total)


def cones_are_interior(newton: NewtonData) -> bool:
    return all(face.supporting_value(g) > 0 for face in newton.compact_faces for g in face.cone_generators)
