"""Recover the exponents of a Brieskorn polynomial from its zeta function.

The modified coefficient a_n is +-L^(-s(n)) times a class that only depends
on which exponents divide n, where s(n) = sum_i floor(n / k_i). The oracle
exposes three observables of the a_n: the degree of the forgotten virtual
Poincare polynomial of a pure coefficient (degF), the degree difference of the
F+ virtual Poincare polynomials of two coefficients sharing their non-scalar
part (degDiffPlus), and chi_c of the F+ fiber (chiPlus).

Exponents are recovered as multiplicities mult(q) over the set Q of products
of bounded prime powers. For every q in Q an index n is built by the Chinese
remainder theorem whose divisors inside Q are exactly the divisors of q; the
observables around n give linear equations in mult, which are solved exactly.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Protocol

from .brieskorn import brieskorn_coefficient
from .errors import InconsistentOracle, OracleUndefined, ValidationFailure
from .motive import BrieskornSpec, MotClass
from .parsing import parse_motclass
from .realization import chi_F
from .scalars import ScalarValue, parse_scalar


@dataclass(frozen=True)
class RecoveryConfig:
    max_exponent: int = 64
    max_dim: int = 6
    min_index: int = 5
    extra_rounds: int = 4  # further CRT solutions per q when the system is underdetermined


class ZetaOracle(Protocol):
    def degF(self, n: int) -> int: ...

    def degDiffPlus(self, n1: int, n2: int) -> int: ...

    def chiPlus(self, n: int) -> int: ...


def scalar_content(x: MotClass) -> tuple[ScalarValue, MotClass]:
    """x = c * part, c the scalar of the first term of x, so equal parts mean equal classes up to scalars."""
    m = x.monomials()[0]
    _, c = x.terms[m].sorted_terms()[0]
    return c, x.scale(ScalarValue.of(1) / c)


class CoefficientOracle:
    """Answers the three queries from a function n -> a_n."""

    def __init__(self, coefficient):
        self._coefficient = coefficient
        self._cache: dict[int, MotClass] = {}
        self.queries: dict[int, dict] = {}

    def coefficient(self, n: int) -> MotClass:
        if n < 1:
            raise OracleUndefined(f"no coefficient at n={n}")
        if n not in self._cache:
            self._cache[n] = self._coefficient(n)
        return self._cache[n]

    def _split(self, n: int) -> tuple[ScalarValue, MotClass]:
        a = self.coefficient(n)
        if a.is_zero():
            raise OracleUndefined(f"a_{n} vanishes")
        return scalar_content(a)

    def _record(self, n: int):
        if n in self.queries:
            return
        a = self.coefficient(n)
        if a.is_zero():
            self.queries[n] = {"n": n, "scalar": "0", "part": "0", "chi_plus": 0}
            return
        c, part = self._split(n)
        self.queries[n] = {"n": n, "scalar": c.render(), "part": part.render(), "chi_plus": chi_F(a, "plus")}

    def degF(self, n: int) -> int:
        a = self.coefficient(n)
        if a.is_zero() or not a.is_pure():
            raise OracleUndefined(f"a_{n} is not a pure scalar multiple of the unit")
        self._record(n)
        return a.scalar_class().scalar_value().degree() + 1

    def degDiffPlus(self, n1: int, n2: int) -> int:
        c1, p1 = self._split(n1)
        c2, p2 = self._split(n2)
        if p1 != p2:
            raise OracleUndefined(f"a_{n1} and a_{n2} have different non-scalar parts")
        if chi_F(p1, "plus") == 0:
            raise OracleUndefined(f"chi_c of the F+ fiber of the shared part of a_{n1} vanishes")
        self._record(n1)
        self._record(n2)
        return c2.degree() - c1.degree()

    def chiPlus(self, n: int) -> int:
        self._record(n)
        return chi_F(self.coefficient(n), "plus")

    def dump(self) -> str:
        return json.dumps([self.queries[n] for n in sorted(self.queries)], indent=2) + "\n"


class BrieskornOracle(CoefficientOracle):
    """Forward oracle computed from a known spec, for self tests."""

    def __init__(self, spec: BrieskornSpec):
        super().__init__(lambda n: brieskorn_coefficient(spec, n))
        self.spec = spec


class DumpOracle:
    """Oracle backed by a JSON array of coefficient records {n, scalar, part, chi_plus}."""

    def __init__(self, records: Iterable[dict]):
        self.records = {}
        for r in records:
            part = parse_motclass(r["part"])
            c = parse_scalar(r["scalar"])
            self.records[int(r["n"])] = (c, part, int(r["chi_plus"]))

    @classmethod
    def from_json(cls, text: str) -> "DumpOracle":
        return cls(json.loads(text))

    def _get(self, n: int):
        if n not in self.records:
            raise OracleUndefined(f"coefficient a_{n} is not in the dump")
        return self.records[n]

    def degF(self, n: int) -> int:
        c, part, _ = self._get(n)
        if part.is_zero() or part != MotClass.unit():
            raise OracleUndefined(f"a_{n} is not a pure scalar multiple of the unit")
        return c.degree() + 1

    def degDiffPlus(self, n1: int, n2: int) -> int:
        c1, p1, _ = self._get(n1)
        c2, p2, _ = self._get(n2)
        if p1.is_zero() or p1 != p2 or chi_F(p1, "plus") == 0:
            raise OracleUndefined(f"a_{n1} and a_{n2} do not share a realizable part")
        return c2.degree() - c1.degree()

    def chiPlus(self, n: int) -> int:
        return self._get(n)[2]


# ---------------------------------------------------------------------------
# exponent bound


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"[: min(2, n + 1)]
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def _next_prime(p: int) -> int:
    q = p + 1
    while any(q % r == 0 for r in range(2, math.isqrt(q) + 1)):
        q += 1
    return q


def _try_degF(oracle: ZetaOracle, n: int) -> int | None:
    try:
        return oracle.degF(n)
    except OracleUndefined:
        return None


def _tuples_in_bracket(d: int, lo: Fraction, hi: Fraction, start: int, cap: int | None):
    """Nondecreasing d-tuples >= start with lo <= sum 1/k < hi.

    Without a cap, None signals that the search is unbounded (a partial tuple
    already reaches lo); with a cap the search is truncated there.
    """
    if d == 0:
        return [()] if lo <= 0 < hi else []
    if hi <= 0:
        return []
    if lo <= 0 and cap is None:
        return None
    top = cap if lo <= 0 else math.floor(d / lo)  # the smallest term of d reciprocals summing to >= lo
    if cap is not None:
        top = min(top, cap)
    out = []
    for k in range(start, top + 1):
        rest = _tuples_in_bracket(d - 1, lo - Fraction(1, k), hi - Fraction(1, k), k, cap)
        if rest is None:
            return None
        out.extend((k,) + r for r in rest)
    return out


def bound_exponents(oracle: ZetaOracle, d: int, config: RecoveryConfig = RecoveryConfig()) -> int:
    """An upper bound K for the exponents, from pure coefficients.

    At each prime p with a pure coefficient, s_p = 1 - degF(p) brackets
    sum 1/k_i in [s_p / p, (s_p + d) / p). Once the tuples in the bracket are
    finitely many (or p passes the exponent cap, which then truncates the
    search) the candidates are filtered by every pure sample seen so far and
    two further ones.
    """
    if d < 1 or d > config.max_dim:
        raise ValueError(f"dimension must be in 1..{config.max_dim}")
    samples: dict[int, int] = {}
    n = 0
    p = 2
    while p <= 8 * config.max_exponent:
        while n < p:
            n += 1
            deg = _try_degF(oracle, n)
            if deg is not None:
                samples[n] = 1 - deg
        if p in samples and samples[p] > 0:
            s = samples[p]
            lo, hi = Fraction(s, p), Fraction(s + d, p)
            cands = _tuples_in_bracket(d, lo, hi, 2, None)
            if cands is None and p > config.max_exponent:
                cands = _tuples_in_bracket(d, lo, hi, 2, config.max_exponent)
            if cands is not None:
                extra = 0
                while extra < 2:
                    n += 1
                    deg = _try_degF(oracle, n)
                    if deg is not None:
                        samples[n] = 1 - deg
                        extra += 1
                cands = [c for c in cands if all(sum(m // k for k in c) == v for m, v in samples.items())]
                if not cands:
                    raise InconsistentOracle(f"no exponent tuple up to {config.max_exponent} fits the samples")
                return max(max(c) for c in cands)
        p = _next_prime(p)
    raise InconsistentOracle("pure coefficients never pinned down the exponents")


# ---------------------------------------------------------------------------
# the Q lattice and CRT indices


@dataclass
class RecoveryState:
    K: int
    gammas: dict[int, int]  # prime -> largest exponent in Q
    Q: list[int] = field(default_factory=list)
    mult: dict[int, int] = field(default_factory=dict)
    equations: list[tuple[str, int, dict[int, int], int]] = field(default_factory=list)  # (case, n, coeffs, rhs)
    indices: dict[int, int] = field(default_factory=dict)  # q -> CRT index

    @classmethod
    def for_bound(cls, K: int) -> "RecoveryState":
        gammas = {2: 3, 3: 2, 5: 1, 7: 1}
        for p in _primes_upto(K):
            g = 0
            while p ** (g + 1) <= K:
                g += 1
            gammas[p] = max(gammas.get(p, 0), g)
        primes = sorted(gammas)
        Q = sorted(math.prod(p**a for p, a in zip(primes, alphas)) for alphas in product(*(range(gammas[p] + 1) for p in primes)))
        return cls(K, gammas, Q)

    @property
    def modulus(self) -> int:
        return math.prod(p ** (g + 1) for p, g in self.gammas.items())

    def pattern(self, n: int) -> tuple[int, ...]:
        """Capped valuations; two indices with equal patterns have the same divisors in Q."""
        out = []
        for p in sorted(self.gammas):
            v = 0
            while v < self.gammas[p] and n % p == 0:
                n //= p
                v += 1
            out.append(v)
        return tuple(out)

    def divisors_in_Q(self, n: int) -> list[int]:
        return [q for q in self.Q if n % q == 0]

    def is_pure_pattern(self, n: int) -> bool:
        return not any(self.pattern(n))


def case_name(q: int) -> str:
    if q == 1:
        return "trivial"
    if q % 6 == 0:
        return "multiple of 6"
    if q == 2:
        return "mult 2"
    if q % 2 == 0:
        return "even, prime to 3"
    if q % 3 == 0:
        return "multiple of 3, odd"
    return "prime to 6"


def crt_index(state: RecoveryState, q: int, min_index: int) -> int:
    """Smallest n >= min_index whose divisors in Q are exactly the divisors of q.

    Primes not dividing q are given residue 2 when p >= 5, so that n - 1 and
    n + 1 avoid them; 2 and 3 get the residue 1.
    """
    n, M = 0, 1
    for p, g in sorted(state.gammas.items()):
        mod = p ** (g + 1)
        v = 0
        while q % p ** (v + 1) == 0:
            v += 1
        r = p**v if v else (2 if p >= 5 else 1)
        # combine n = n (mod M) with n = r (mod mod)
        t = ((r - n) * pow(M, -1, mod)) % mod
        n, M = n + M * t, M * mod
    while n < min_index:
        n += M
    return n


def _interval_coeffs(Q: list[int], lo: int, hi: int) -> dict[int, int]:
    """s(hi) - s(lo) = sum_q mult(q) * (floor(hi/q) - floor(lo/q))."""
    return {q: hi // q - lo // q for q in Q if hi // q - lo // q}


def _collect(state: RecoveryState, oracle: ZetaOracle, n: int, case: str):
    """Equations from the neighbourhood of n: absolute degF at pure neighbours, and matched pairs."""
    eqs = state.equations
    for step in (-1, 1):
        m = n + step
        while m >= 1 and not state.is_pure_pattern(m):
            m += step
        if m < 1:
            continue
        deg = oracle.degF(m)
        eqs.append((case, m, {q: m // q for q in state.Q if m // q}, 1 - deg))
    for j in range(1, 5):
        lo, hi = n - j, n + j
        # the oracle itself decides whether the non-scalar parts match
        if lo < 1 or state.is_pure_pattern(lo) or state.is_pure_pattern(hi):
            continue
        if oracle.chiPlus(lo) == 0:
            continue
        try:
            diff = oracle.degDiffPlus(lo, hi)
        except OracleUndefined:
            continue
        eqs.append((case, n, _interval_coeffs(state.Q, lo, hi), -diff))


def _solve(Q: list[int], equations) -> tuple[dict[int, Fraction] | None, int]:
    """Exact row reduction; returns (solution or None if underdetermined, rank)."""
    col = {q: i for i, q in enumerate(Q)}
    rows = []
    for _, _, coeffs, rhs in equations:
        row = [Fraction(0)] * (len(Q) + 1)
        for q, c in coeffs.items():
            row[col[q]] = Fraction(c)
        row[-1] = Fraction(rhs)
        rows.append(row)
    rank, pivots = 0, []
    for c in range(len(Q)):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(c)
        rank += 1
    for r in rows[rank:]:
        if r[-1]:
            raise InconsistentOracle("the observed degrees admit no exponent multiset")
    if rank < len(Q):
        return None, rank
    return {Q[c]: rows[i][-1] for i, c in enumerate(pivots)}, rank


def recover_exponents(
    oracle: ZetaOracle, d: int, config: RecoveryConfig = RecoveryConfig(), state: RecoveryState | None = None
) -> list[int]:
    """The sorted exponent multiset of the hidden Brieskorn polynomial."""
    if state is None:
        state = RecoveryState.for_bound(bound_exponents(oracle, d, config))
    for q in state.Q[1:]:
        n = crt_index(state, q, config.min_index)
        state.indices[q] = n
        _collect(state, oracle, n, case_name(q))
    solution, rank = _solve(state.Q, state.equations)
    rounds = 0
    while solution is None and rounds < config.extra_rounds:
        rounds += 1
        for q in state.Q[1:]:
            _collect(state, oracle, state.indices[q] + rounds * state.modulus, case_name(q))
        solution, rank = _solve(state.Q, state.equations)
    if solution is None:
        raise InconsistentOracle(f"observations determine only {rank} of {len(state.Q)} multiplicities")
    if any(v.denominator != 1 or v < 0 for v in solution.values()):
        raise InconsistentOracle("multiplicities are not nonnegative integers")
    state.mult = {q: int(v) for q, v in solution.items()}
    if state.mult.get(1, 0) != 0 or sum(state.mult.values()) != d:
        raise InconsistentOracle(f"multiplicities sum to {sum(state.mult.values())}, expected {d}")
    exps = sorted(q for q, m in state.mult.items() for _ in range(m))
    _check_samples(oracle, exps)
    return exps


def _check_samples(oracle: ZetaOracle, exps: list[int], count: int = 10):
    n, seen = 1, 0
    while seen < count:
        if all(n % k for k in exps):
            deg = _try_degF(oracle, n)
            if deg is not None:
                seen += 1
                if 1 - deg != sum(n // k for k in exps):
                    raise ValidationFailure(f"recovered exponents disagree with the oracle at n={n}")
        n += 1


@dataclass(frozen=True)
class RecoveryReport:
    passed: bool
    expected: tuple[int, ...]
    recovered: tuple[int, ...]
    first_divergent: int | None

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        where = "" if self.first_divergent is None else f"; degF first differs at n={self.first_divergent}"
        exp = ",".join(map(str, self.expected))
        rec = ",".join(map(str, self.recovered))
        return f"{status}: expected exponents {exp}, recovered {rec}{where}"


def validate_recovery(spec: BrieskornSpec, recovered: Iterable[int], samples: int = 10) -> RecoveryReport:
    """Exponent multisets must agree; degF is compared on indices where both coefficients are pure."""
    rec = tuple(sorted(recovered))
    exp = tuple(sorted(spec.exponents))
    oracle = BrieskornOracle(spec)
    other = BrieskornOracle(BrieskornSpec([(1, k) for k in rec])) if rec and min(rec) >= 2 else None
    first = None
    if other is not None:
        n, seen = 1, 0
        while seen < samples and n < 10_000:
            a, b = _try_degF(oracle, n), _try_degF(other, n)
            if a is not None and b is not None:
                seen += 1
                if a != b:
                    first = n
                    break
            n += 1
    return RecoveryReport(Counter(rec) == Counter(exp) and first is None, exp, rec, first)
