"""The class algebra.

`ASClass` holds scalar combinations of products of catalog sets (zero sets and
fibers of sign-weighted power sums on the torus); it plays the role of the
non-equivariant Grothendieck ring. `MotClass` is the free scalar module on
formal convolution monomials of equivariant atoms, with the empty monomial as
the unit class. Two sound rewrites run at normalization:

* a power map x -> e*x^k with k odd is an equivariant bijection of the punctured
  line, so `Mon(e, k)` with k odd becomes the unit;
* the torus-complement atom of a power sum whose exponents are all odd is a
  trivial fibration over the punctured line, so it becomes (fiber class) * unit.

Equality is normal-form equality. This never identifies distinct classes but
may fail to identify equal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import InvalidGerm, UnsupportedExpansion
from .polynomial import Polynomial
from .scalars import ONE, ZERO, ScalarValue

Term = tuple[int, int]  # (sign, exponent)
Spec = tuple[Term, ...]


def canonical_spec(terms: Iterable[Sequence[int]]) -> Spec:
    out = []
    for s, k in terms:
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s}")
        if k < 1:
            raise ValueError(f"exponent must be positive, got {k}")
        out.append((int(s), int(k)))
    return tuple(sorted(out, key=lambda t: (t[1], t[0])))


def negate_spec(spec: Spec) -> Spec:
    return canonical_spec((-s, k) for s, k in spec)


def render_spec_list(spec: Spec) -> str:
    return ",".join(("+" if s > 0 else "-") + str(k) for s, k in spec)


@dataclass(frozen=True, order=True)
class BrieskornSpec:
    """sum_i sign_i * x_i^k_i, stored sorted by (exponent, sign)."""

    terms: Spec

    def __init__(self, terms: Iterable[Sequence[int]]):
        spec = canonical_spec(terms)
        if not spec:
            raise InvalidGerm("a Brieskorn polynomial needs at least one term")
        if any(k < 2 for _, k in spec):
            raise InvalidGerm("Brieskorn exponents must be at least 2")
        object.__setattr__(self, "terms", spec)

    @property
    def d(self) -> int:
        return len(self.terms)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.terms)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.terms)

    def __add__(self, other: "BrieskornSpec") -> "BrieskornSpec":
        """Thom-Sebastiani sum in separate variables."""
        return BrieskornSpec(self.terms + other.terms)

    def polynomial(self, names: Sequence[str] | None = None) -> Polynomial:
        names = list(names) if names else default_variable_names(self.d)
        terms = {}
        for i, (s, k) in enumerate(self.terms):
            e = [0] * self.d
            e[i] = k
            terms[tuple(e)] = s
        return Polynomial(names, terms)

    def render(self) -> str:
        return self.polynomial().render()

    def __str__(self):
        return self.render()


def default_variable_names(d: int) -> list[str]:
    if d <= 3:
        return ["x", "y", "z"][:d]
    return [f"x{i + 1}" for i in range(d)]


# ---------------------------------------------------------------------------
# non-equivariant generators


@dataclass(frozen=True)
class ZeroSet:
    """{f = 0} on the torus, f the signed power sum `spec` in separate variables."""

    spec: Spec

    def __post_init__(self):
        object.__setattr__(self, "spec", canonical_spec(self.spec))

    def key(self):
        return (0, self.spec)

    def render(self) -> str:
        return f"ZeroSet[{render_spec_list(self.spec)}]"


@dataclass(frozen=True)
class FiberSet:
    """{f = value} on the torus, value = +-1."""

    spec: Spec
    value: int = 1

    def __post_init__(self):
        object.__setattr__(self, "spec", canonical_spec(self.spec))
        if self.value not in (1, -1):
            raise ValueError("fiber value must be +1 or -1")

    def key(self):
        return (1, self.spec, self.value)

    def render(self) -> str:
        return f"FiberSet[{render_spec_list(self.spec)};{'+1' if self.value > 0 else '-1'}]"


@dataclass(frozen=True)
class PolyZeroSet:
    """{f = 0} on the torus for a general polynomial f."""

    poly: Polynomial

    def key(self):
        return (2, self.poly.key())

    def render(self) -> str:
        return f'PolyZeroSet("{self.poly.render()}")'


@dataclass(frozen=True)
class Named:
    """User-declared class of known dimension."""

    label: str
    dim: int

    def key(self):
        return (3, self.label, self.dim)

    def render(self) -> str:
        return f'Named("{self.label}",{self.dim})'


ASGen = Union[ZeroSet, FiberSet, PolyZeroSet, Named]
GenMonomial = tuple  # sorted tuple of ASGen


def _gen_sort(gens: Iterable) -> tuple:
    return tuple(sorted(gens, key=lambda g: g.key()))


class ASClass:
    """Scalar combination of products of generators, always in reduced form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[GenMonomial, ScalarValue] | None = None, *, _reduced: bool = True):
        clean: dict[GenMonomial, ScalarValue] = {}
        if terms:
            for m, c in terms.items():
                c = ScalarValue.of(c)
                if not c.is_zero():
                    clean[m] = clean[m] + c if m in clean else c
            clean = {m: c for m, c in clean.items() if not c.is_zero()}
        self.terms = clean
        self._hash = None

    @classmethod
    def scalar(cls, s) -> "ASClass":
        return cls({(): ScalarValue.of(s)})

    @classmethod
    def gen(cls, g) -> "ASClass":
        return reduce_generator(g)

    @classmethod
    def torus(cls, d: int) -> "ASClass":
        """[(R*)^d] = (L-1)^d; the torus never survives as a generator."""
        return cls.scalar((ScalarValue.L() - 1) ** d)

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(m == () for m in self.terms)

    def scalar_value(self) -> ScalarValue:
        if not self.is_scalar():
            raise ValueError(f"{self.render()} is not a pure scalar")
        return self.terms.get((), ZERO)

    def __add__(self, other):
        other = _as_asclass(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return ASClass(out)

    __radd__ = __add__

    def __neg__(self):
        return ASClass({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_asclass(other))

    def __rsub__(self, other):
        return _as_asclass(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, MotClass):
            return NotImplemented
        other = _as_asclass(other)
        if len(other.terms) == 1 and () in other.terms:
            c = other.terms[()]
            return ASClass({m: v * c for m, v in self.terms.items()})
        out: dict[GenMonomial, ScalarValue] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _gen_sort(m1 + m2) if m1 and m2 else (m1 or m2)
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return ASClass(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = ScalarValue.of(other) if not isinstance(other, ASClass) else other.scalar_value()
        inv = ONE / s
        return ASClass({m: c * inv for m, c in self.terms.items()})

    def __pow__(self, n: int):
        out = ASClass.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, ScalarValue)):
            other = ASClass.scalar(other)
        if not isinstance(other, ASClass):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[GenMonomial, ScalarValue]]:
        return sorted(self.terms.items(), key=lambda t: tuple(g.key() for g in t[0]))

    def generators(self) -> set:
        return {g for m in self.terms for g in m}

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            gens = "*".join(g.render() for g in m)
            pieces.append(_render_scaled(c, gens))
        return _join_signed(pieces)

    def __repr__(self):
        return f"ASClass({self.render()!r})"


def _as_asclass(x) -> ASClass:
    if isinstance(x, ASClass):
        return x
    if isinstance(x, (int, ScalarValue)):
        return ASClass.scalar(x)
    raise TypeError(f"cannot use {x!r} as a scalar class")


def _render_scaled(c: ScalarValue, body: str) -> tuple[str, str]:
    """Return (sign, text) for c*body with body possibly empty."""
    neg = c.num.leading_coefficient() < 0
    if neg:
        c = -c
    if c.is_one():
        text = body or "1"
    elif c.is_laurent() and c.num.is_monomial():
        text = c.render() + ("*" + body if body else "")
    elif body:
        text = "(" + c.render() + ")*" + body
    else:
        text = "(" + c.render() + ")"
    return ("-" if neg else "+", text)


def _join_signed(pieces: list[tuple[str, str]]) -> str:
    sign, text = pieces[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# ---------------------------------------------------------------------------
# generator reduction


def _lm1_pow(d: int) -> ASClass:
    return ASClass.scalar((ScalarValue.L() - 1) ** d)


def _drop_odd(spec: Spec) -> tuple[Spec, bool]:
    """Remove the last odd-exponent term; flag whether one was found."""
    for i in range(len(spec) - 1, -1, -1):
        if spec[i][1] % 2:
            return spec[:i] + spec[i + 1:], True
    return spec, False


@lru_cache(maxsize=None)
def reduce_generator(g) -> ASClass:
    """Rewrite a generator into reduced form.

    An odd-exponent variable is solved for uniquely, so
    {f = c} = torus^(d-1) minus {rest = c}; all-even sets are canonicalized
    and the evidently empty ones dropped.
    """
    if isinstance(g, ZeroSet):
        spec = g.spec
        if not spec:
            return ASClass.scalar(1)
        rest, found = _drop_odd(spec)
        if found:
            return _lm1_pow(len(spec) - 1) - reduce_generator(ZeroSet(rest))
        if len({s for s, _ in spec}) == 1:
            return ASClass()
        return ASClass({(ZeroSet(min(spec, negate_spec(spec))),): ONE})
    if isinstance(g, FiberSet):
        spec, value = g.spec, g.value
        if not spec:
            return ASClass()
        rest, found = _drop_odd(spec)
        if found:
            return _lm1_pow(len(spec) - 1) - reduce_generator(FiberSet(rest, value))
        if value < 0:
            spec = negate_spec(spec)
        if all(s < 0 for s, _ in spec):
            return ASClass()
        if len(spec) == 1:
            return ASClass.scalar(2)
        return ASClass({(FiberSet(spec, 1),): ONE})
    if isinstance(g, PolyZeroSet):
        if len(g.poly.terms) <= 1:
            return ASClass()
        return ASClass({(g,): ONE})
    if isinstance(g, Named):
        return ASClass({(g,): ONE})
    raise TypeError(f"not a class generator: {g!r}")


# ---------------------------------------------------------------------------
# equivariant atoms


@dataclass(frozen=True)
class Mon:
    """[x -> sign*x^k on the punctured line]."""

    sign: int
    k: int

    def key(self):
        return (0, self.k, self.sign)

    def render(self) -> str:
        return f"Mon({'+' if self.sign > 0 else '-'},{self.k})"


@dataclass(frozen=True)
class GeomTorus:
    """Torus points where f_E != 0 for every excluded block E, mapped by f_support.

    `exclusions` holds index sets into `support`; they always form a laminar family.
    """

    support: Spec
    exclusions: frozenset

    def key(self):
        return (1, self.support, _encode_exclusions(self.exclusions))

    def render(self) -> str:
        blocks = "".join("{" + ",".join(str(i) for i in blk) + "}" for blk in _encode_exclusions(self.exclusions))
        return f"Torus[{render_spec_list(self.support)};{blocks}]"


@dataclass(frozen=True)
class PolyTorus:
    """Torus minus {f = 0}, mapped by a general polynomial f."""

    poly: Polynomial

    def key(self):
        return (2, self.poly.key())

    def render(self) -> str:
        return f'PolyTorus("{self.poly.render()}")'


@dataclass(frozen=True)
class NamedEq:
    label: str

    def key(self):
        return (3, self.label)

    def render(self) -> str:
        return f'NamedEq("{self.label}")'


MotAtom = Union[Mon, GeomTorus, PolyTorus, NamedEq]


def _encode_exclusions(excl) -> tuple:
    return tuple(sorted(tuple(sorted(e)) for e in excl))


def _is_laminar(family: Iterable[frozenset]) -> bool:
    fam = list(family)
    for a, b in combinations(fam, 2):
        if not (a <= b or b <= a or not (a & b)):
            return False
    return True


def make_geom_torus(support: Sequence[Term], exclusions: Iterable[Iterable[int]]) -> GeomTorus:
    """Build a torus atom in canonical form (sorted support, canonical exclusion labels)."""
    order = sorted(range(len(support)), key=lambda i: (support[i][1], support[i][0]))
    pos = {old: new for new, old in enumerate(order)}
    supp = tuple(tuple(support[i]) for i in order)
    excl = {frozenset(pos[i] for i in e) for e in exclusions}
    excl.discard(frozenset())
    if not _is_laminar(excl):
        raise UnsupportedExpansion("exclusion family is not laminar")
    groups: list[list[int]] = []
    for i, t in enumerate(supp):
        if groups and supp[groups[-1][0]] == t:
            groups[-1].append(i)
        else:
            groups.append([i])
    best = _encode_exclusions(excl)
    count = 1
    for g in groups:
        count *= factorial(len(g))
    if count > 1 and count <= 5040:
        for perms in product(*(permutations(g) for g in groups)):
            relabel = {}
            for g, p in zip(groups, perms):
                relabel.update(zip(g, p))
            enc = _encode_exclusions({frozenset(relabel[i] for i in e) for e in excl})
            if enc < best:
                best = enc
    return GeomTorus(supp, frozenset(frozenset(e) for e in best))


def laminar_remainders(family: Iterable[frozenset]) -> dict[frozenset, frozenset]:
    """For each block E, E minus the union of the blocks strictly inside it."""
    fam = list(family)
    out = {}
    for e in fam:
        inner = frozenset().union(*[c for c in fam if c < e]) if fam else frozenset()
        out[e] = e - inner
    return out


def _sub_spec(support: Spec, idx: Iterable[int]) -> Spec:
    return canonical_spec(support[i] for i in sorted(idx))


def torus_pieces(atom: GeomTorus) -> list[tuple[int, list[Spec], Spec]]:
    """Inclusion-exclusion pieces of the torus atom restricted to a level/sign set of f.

    Each piece (sign, zero_blocks, top) stands for sign * prod ZeroSet(block) x
    {f_top in the requested region}; on that region f != 0, so the full block is
    never needed as an exclusion.
    """
    n = len(atom.support)
    full = frozenset(range(n))
    excl = [e for e in atom.exclusions if e != full]
    pieces = []
    for r in range(len(excl) + 1):
        for ys in combinations(excl, r):
            rem = laminar_remainders(list(ys) + [full])
            zero_blocks = [_sub_spec(atom.support, rem[e]) for e in ys]
            pieces.append(((-1) ** r, zero_blocks, _sub_spec(atom.support, rem[full])))
    return pieces


def _zero_product(blocks: Iterable[Spec]) -> ASClass:
    out = ASClass.scalar(1)
    for b in blocks:
        out = out * reduce_generator(ZeroSet(b))
        if out.is_zero():
            break
    return out


@lru_cache(maxsize=None)
def reduce_atom(atom) -> tuple[ASClass, object]:
    """Return (scalar, atom or None) with atom == scalar * atom (None meaning the unit)."""
    if isinstance(atom, Mon):
        if atom.k % 2:
            return ASClass.scalar(1), None
        return ASClass.scalar(1), atom
    if isinstance(atom, GeomTorus):
        if len(atom.support) == 1:
            s, k = atom.support[0]
            return reduce_atom(Mon(s, k))
        if all(k % 2 for _, k in atom.support):
            total = ASClass()
            for sign, zeros, top in torus_pieces(atom):
                total = total + sign * _zero_product(zeros) * reduce_generator(FiberSet(top, 1))
            return total, None
        return ASClass.scalar(1), atom
    if isinstance(atom, PolyTorus):
        p = atom.poly
        if len(p.terms) == 1:
            (_, c), = p.terms.items()
            g = p.monomial_gcd_exponent()
            n = len(p.active_variables())
            scale = _lm1_pow(p.nvars - n) * _lm1_pow(n - 1)
            s, a = reduce_atom(Mon(1 if c > 0 else -1, g))
            return scale * s, a
        return ASClass.scalar(1), atom
    if isinstance(atom, NamedEq):
        return ASClass.scalar(1), atom
    raise TypeError(f"not an equivariant atom: {atom!r}")


def _atom_sort(atoms: Iterable) -> tuple:
    return tuple(sorted(atoms, key=lambda a: a.key()))


# ---------------------------------------------------------------------------


class MotClass:
    """Element of the equivariant ring: {convolution monomial: ASClass coefficient}."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, ASClass] | None = None, *, _normal: bool = False):
        if _normal:
            self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}
        else:
            self.terms = _normalize_terms(terms or {})
        self._hash = None

    # constructors
    @classmethod
    def zero(cls) -> "MotClass":
        return cls({}, _normal=True)

    @classmethod
    def unit(cls) -> "MotClass":
        return cls({(): ASClass.scalar(1)}, _normal=True)

    @classmethod
    def scalar(cls, s) -> "MotClass":
        """s * unit for an integer, scalar or ASClass s."""
        return cls({(): _as_asclass(s)}, _normal=True)

    @classmethod
    def lef(cls) -> "MotClass":
        return cls.scalar(ScalarValue.L())

    @classmethod
    def atom(cls, a) -> "MotClass":
        return cls({(a,): ASClass.scalar(1)})

    @classmethod
    def mon(cls, sign: int, k: int) -> "MotClass":
        return cls.atom(Mon(sign, k))

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        """True for A * unit with A an ASClass."""
        return all(m == () for m in self.terms)

    def is_pure(self) -> bool:
        """True for s * unit with s a plain scalar (no set generators)."""
        return self.is_scalar() and all(c.is_scalar() for c in self.terms.values())

    def scalar_class(self) -> ASClass:
        if not self.is_scalar():
            raise ValueError(f"{self.render()} is not a scalar multiple of the unit")
        return self.terms.get((), ASClass())

    def monomials(self) -> list[tuple]:
        return sorted(self.terms, key=lambda m: tuple(a.key() for a in m))

    def coefficient(self, monomial: tuple) -> ASClass:
        return self.terms.get(monomial, ASClass())

    def split_scalar(self) -> tuple[ScalarValue, "MotClass"]:
        """Write self = s * part with s a plain scalar and part's first coefficient equal to 1.

        Raises ValueError when the coefficients are not all plain scalars.
        """
        if self.is_zero():
            raise ValueError("zero class has no scalar split")
        if not all(c.is_scalar() for c in self.terms.values()):
            raise ValueError("coefficients involve set generators")
        first = self.terms[self.monomials()[0]].scalar_value()
        return first, self.scale(ONE / first)

    # arithmetic
    def __add__(self, other):
        other = _as_motclass(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MotClass(out, _normal=True)

    __radd__ = __add__

    def __neg__(self):
        return MotClass({m: -c for m, c in self.terms.items()}, _normal=True)

    def __sub__(self, other):
        other = _as_motclass(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_motclass(other) - self

    def scale(self, s) -> "MotClass":
        """Action of an integer, scalar or ASClass."""
        a = _as_asclass(s)
        if a.is_zero():
            return MotClass.zero()
        return MotClass({m: c * a for m, c in self.terms.items()}, _normal=True)

    def __mul__(self, other):
        """Ring product; only defined when one factor is a scalar multiple of the unit."""
        if isinstance(other, (int, ScalarValue, ASClass)):
            return self.scale(other)
        if isinstance(other, MotClass):
            if other.is_scalar():
                return self.scale(other.scalar_class())
            if self.is_scalar():
                return other.scale(self.scalar_class())
            raise UnsupportedExpansion("ring product of two non-scalar classes is outside the model")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = ScalarValue.of(other) if not isinstance(other, ASClass) else other.scalar_value()
        return self.scale(ONE / s)

    def __eq__(self, other):
        other = _as_motclass(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m in self.monomials():
            mono = _render_monomial(m)
            for gens, c in self.terms[m].sorted_terms():
                body = "*".join([g.render() for g in gens] + [mono])
                pieces.append(_render_scaled(c, body))
        return _join_signed(pieces)

    def __repr__(self):
        return f"MotClass({self.render()!r})"

    def __str__(self):
        return self.render()


def _render_monomial(m: tuple) -> str:
    if not m:
        return "unit"
    if len(m) == 1:
        return m[0].render()
    return "conv(" + ",".join(a.render() for a in m) + ")"


def _as_motclass(x):
    if isinstance(x, MotClass):
        return x
    if isinstance(x, int) and x == 0:
        return MotClass.zero()
    return NotImplemented


def _normalize_terms(terms: Mapping[tuple, ASClass]) -> dict[tuple, ASClass]:
    out: dict[tuple, ASClass] = {}
    for m, c in terms.items():
        c = _as_asclass(c)
        if c.is_zero():
            continue
        scale = c
        kept = []
        for a in m:
            s, a2 = reduce_atom(a)
            scale = scale * s
            if scale.is_zero():
                break
            if a2 is not None:
                kept.append(a2)
        if scale.is_zero():
            continue
        key = _atom_sort(kept)
        out[key] = out[key] + scale if key in out else scale
    return {m: c for m, c in out.items() if not c.is_zero()}


def normalize(x: MotClass) -> MotClass:
    """Reapply the rewrites; a no-op on values built through the public constructors."""
    return MotClass(dict(x.terms))


def convolve(x: MotClass, y: MotClass) -> MotClass:
    """Bilinear convolution: free commutative product of monomials, unit = empty monomial."""
    out: dict[tuple, ASClass] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            m = _atom_sort(m1 + m2) if m1 and m2 else (m1 or m2)
            c = c1 * c2
            out[m] = out[m] + c if m in out else c
    return MotClass(out, _normal=True)


def convolve_all(items: Iterable[MotClass]) -> MotClass:
    acc = MotClass.unit()
    for x in items:
        acc = convolve(acc, x)
    return acc


# ---------------------------------------------------------------------------
# geometric expansion and the forgetful map


def _geom_parts(atom) -> tuple[Spec, frozenset]:
    if isinstance(atom, Mon):
        return ((atom.sign, atom.k),), frozenset()
    if isinstance(atom, GeomTorus):
        return atom.support, atom.exclusions
    raise UnsupportedExpansion(f"no geometric expansion for {atom.render()}")


def zero_locus_class(support: Spec, exclusions: Iterable[frozenset]) -> ASClass:
    """[{f_support = 0 and f_E != 0 for E in exclusions}] on the torus."""
    full = frozenset(range(len(support)))
    excl = [e for e in exclusions if e != full]
    total = ASClass()
    for r in range(len(excl) + 1):
        for ys in combinations(excl, r):
            rem = laminar_remainders(list(ys) + [full])
            blocks = [_sub_spec(support, rem[e]) for e in list(ys) + [full]]
            total = total + (-1) ** r * _zero_product(blocks)
    return total


@lru_cache(maxsize=None)
def _expand_monomial(m: tuple) -> MotClass:
    if not m:
        return MotClass.unit()
    state: list[tuple[ASClass, tuple[Spec, frozenset] | None]] = [(ASClass.scalar(1), _geom_parts(m[0]))]
    for atom in m[1:]:
        b_supp, b_excl = _geom_parts(atom)
        new = []
        for coeff, a in state:
            if a is None:
                new.append((coeff, (b_supp, b_excl)))
                continue
            a_supp, a_excl = a
            off = len(a_supp)
            supp = a_supp + b_supp
            excl = set(a_excl) | {frozenset(i + off for i in e) for e in b_excl}
            full = frozenset(range(len(supp)))
            new.append((-coeff, (supp, frozenset(excl | {full}))))
            zs = zero_locus_class(supp, excl)
            if not zs.is_zero():
                new.append((coeff * zs, None))
        state = new
    out = MotClass.zero()
    for coeff, g in state:
        if g is None:
            out = out + MotClass.scalar(coeff)
        else:
            out = out + MotClass({(make_geom_torus(*g),): coeff})
    return out


def geometric_expand(x) -> MotClass:
    """Rewrite convolution monomials of Mon/torus atoms as signed single torus atoms plus scalar units."""
    if isinstance(x, tuple):
        return _expand_monomial(_atom_sort(x))
    out = MotClass.zero()
    for m, c in x.terms.items():
        if len(m) <= 1:
            out = out + MotClass({m: c}, _normal=True)
        else:
            out = out + _expand_monomial(m).scale(c)
    return out


def forget_atom(atom) -> ASClass:
    """Underlying set of an equivariant atom."""
    if isinstance(atom, Mon):
        return ASClass.torus(1)
    if isinstance(atom, GeomTorus):
        n = len(atom.support)
        total = ASClass()
        excl = list(atom.exclusions)
        for r in range(len(excl) + 1):
            for ys in combinations(excl, r):
                rem = laminar_remainders(list(ys))
                covered = frozenset().union(*ys) if ys else frozenset()
                part = _zero_product(_sub_spec(atom.support, rem[e]) for e in ys)
                total = total + (-1) ** r * part * ASClass.torus(n - len(covered))
        return total
    if isinstance(atom, PolyTorus):
        return ASClass.torus(atom.poly.nvars) - reduce_generator(PolyZeroSet(atom.poly))
    raise UnsupportedExpansion(f"forgetful image of {atom.render()} is unknown")


@lru_cache(maxsize=None)
def _forget_monomial(m: tuple) -> ASClass:
    if not m:
        return ASClass.torus(1)
    if len(m) == 1:
        return forget_atom(m[0])
    total = ASClass()
    for m2, c in _expand_monomial(m).terms.items():
        total = total + c * _forget_monomial(m2)
    return total


def forget(x: MotClass) -> ASClass:
    """Forgetful module morphism to the non-equivariant ring (not multiplicative)."""
    total = ASClass()
    for m, c in x.terms.items():
        total = total + c * _forget_monomial(m)
    return total


def iter_atoms(x: MotClass) -> Iterator:
    for m in x.terms:
        yield from m
