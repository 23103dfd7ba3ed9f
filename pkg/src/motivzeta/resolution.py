"""Zeta functions and Milnor fibers from user-supplied resolution combinatorics.

The caller supplies, for an embedded resolution of the germ, the exceptional
and strict-transform divisors with their multiplicities (N for the pulled-back
function, nu - 1 for the Jacobian) and the equivariant class of every stratum.
Stratum classes are taken as given; the only check available is the
forgetful consistency check against an optional non-equivariant class of the
open stratum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ParseError, SchemaError, ValidationFailure
from .motive import ASClass, MotClass, forget
from .parsing import parse_asclass, parse_motclass
from .scalars import ScalarValue
from .series import Factor, MilnorFiber, RationalTerm, RationalZeta, RealizedZeta

SCHEMA_KEYS = ("divisors", "strata")


@dataclass(frozen=True)
class Divisor:
    id: str
    N: int
    nu: int


@dataclass(frozen=True)
class Stratum:
    ids: tuple[str, ...]
    class_expr: str
    value: MotClass
    exceptional_expr: str | None = None  # class of the open stratum of the intersection, optional


@dataclass(frozen=True)
class ResolutionData:
    divisors: tuple[Divisor, ...]
    strata: tuple[Stratum, ...] = ()
    by_id: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ids = [d.id for d in self.divisors]
        if len(set(ids)) != len(ids):
            raise SchemaError("divisor ids must be unique")
        for d in self.divisors:
            if d.N < 1 or d.nu < 1:
                raise SchemaError(f"divisor {d.id}: N and nu must be positive integers")
        self.by_id.update({d.id: d for d in self.divisors})
        for s in self.strata:
            if not s.ids:
                raise SchemaError("a stratum needs a nonempty divisor set")
            if len(set(s.ids)) != len(s.ids):
                raise SchemaError(f"stratum {list(s.ids)} repeats a divisor")
            missing = [i for i in s.ids if i not in self.by_id]
            if missing:
                raise SchemaError(f"stratum {list(s.ids)} references unknown divisors {missing}")

    @classmethod
    def from_dict(cls, obj) -> "ResolutionData":
        if not isinstance(obj, dict):
            raise SchemaError("resolution data must be a JSON object")
        unknown = set(obj) - set(SCHEMA_KEYS)
        if unknown:
            raise SchemaError(f"unknown top-level keys {sorted(unknown)}")
        divisors = []
        for i, d in enumerate(obj.get("divisors", [])):
            if not isinstance(d, dict) or set(d) != {"id", "N", "nu"}:
                raise SchemaError(f"divisor #{i} must have exactly the keys id, N, nu")
            if not isinstance(d["id"], str) or not all(_is_int(d[k]) for k in ("N", "nu")):
                raise SchemaError(f"divisor #{i}: id must be a string, N and nu integers")
            divisors.append(Divisor(d["id"], d["N"], d["nu"]))
        strata = []
        for i, s in enumerate(obj.get("strata", [])):
            if not isinstance(s, dict) or not {"I", "class"} <= set(s) or set(s) - {"I", "class", "exceptional"}:
                raise SchemaError(f"stratum #{i} must have the keys I and class (and optionally exceptional)")
            if not isinstance(s["I"], list) or not all(isinstance(x, str) for x in s["I"]):
                raise SchemaError(f"stratum #{i}: I must be a list of divisor ids")
            try:
                value = parse_motclass(s["class"])
                if s.get("exceptional") is not None:
                    parse_asclass(s["exceptional"])
            except ParseError as exc:
                raise SchemaError(f"stratum #{i}: {exc}") from None
            strata.append(Stratum(tuple(s["I"]), s["class"], value, s.get("exceptional")))
        return cls(tuple(divisors), tuple(strata))

    @classmethod
    def from_json(cls, text: str) -> "ResolutionData":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        strata = []
        for s in self.strata:
            entry = {"I": list(s.ids), "class": s.class_expr}
            if s.exceptional_expr is not None:
                entry["exceptional"] = s.exceptional_expr
            strata.append(entry)
        return {
            "divisors": [{"id": d.id, "N": d.N, "nu": d.nu} for d in self.divisors],
            "strata": strata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def evaluate_rationality(data: ResolutionData) -> RationalZeta:
    """One term per stratum: class times prod over its divisors of L^-nu T^N / (1 - L^-nu T^N)."""
    terms = []
    for s in data.strata:
        factors = [Factor(data.by_id[i].nu, data.by_id[i].N) for i in s.ids]
        terms.append(RationalTerm(s.value, tuple(factors)))
    return RationalZeta(terms)


def milnor_fiber_resolution(data: ResolutionData) -> MilnorFiber:
    total = MotClass.zero()
    for s in data.strata:
        total = total + s.value if len(s.ids) % 2 else total - s.value
    return MilnorFiber(total)


def check_forgetful_consistency(data: ResolutionData) -> list[tuple[str, ...]]:
    """Strata whose forgotten class differs from (L - 1)^|I| times the supplied open-stratum class."""
    bad = []
    for s in data.strata:
        if s.exceptional_expr is None:
            continue
        expected = ASClass.scalar((ScalarValue.L() - 1) ** len(s.ids)) * parse_asclass(s.exceptional_expr)
        if forget(s.value) != expected:
            bad.append(s.ids)
    return bad


def validate(data: ResolutionData) -> None:
    bad = check_forgetful_consistency(data)
    if bad:
        raise ValidationFailure(f"forgetful consistency fails for strata {[list(b) for b in bad]}")


REALIZED_FORMS = (
    ("beta", "forget"),
    ("beta", "plus"),
    ("beta", "minus"),
    ("chi", "forget"),
    ("chi", "pos"),
    ("chi", "neg"),
    ("chi", "plus"),
    ("chi", "minus"),
)


def realized_zetas(data: ResolutionData | RationalZeta, named: Mapping | None = None) -> dict[str, RealizedZeta]:
    """All available realizations, keyed like "beta", "beta,+", "chi", "chi,>"; each realized coefficientwise."""
    z = data if isinstance(data, RationalZeta) else evaluate_rationality(data)
    short = {"forget": "", "plus": ",+", "minus": ",-", "pos": ",>", "neg": ",<"}
    return {f"{kind}{short[which]}": z.realize(kind, which, named) for kind, which in REALIZED_FORMS}
