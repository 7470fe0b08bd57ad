"""Symbolic lower K-theory of the finite and virtually cyclic groups that occur.

Nothing here computes K-groups from rings. Values come from a versioned facts
file in which every record carries its literature citation; anything the
sources do not settle stays Unknown. The only computed quantity is the Bass
rank r - q, from conjugacy counts on a multiplication table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

from .errors import NotInCatalog, TableViolation, UnknownDescriptor
from .finite_groups import (CANONICAL_TYPES, FiniteGroupTable, FiniteType, catalog_group,
                            cyclic_subgroup_classes, inverse_pair_classes, parse_type)
from .vc_classify import DIHEDRAL_ROWS, TRANSLATION_ROWS, PhiClass, VCDescriptor


class Status(str, Enum):
    Zero = "Zero"
    Finite = "Finite"
    UnknownBoundedBy = "UnknownBoundedBy"
    Unknown = "Unknown"
    NonzeroUnspecified = "NonzeroUnspecified"
    InfinitelyGenerated = "InfinitelyGenerated"

    def __str__(self) -> str:
        return self.value


# absorbing order under direct sum, weakest first
_RANK = {s: i for i, s in enumerate(Status)}


def _merge(a: tuple, b: tuple) -> tuple:
    counts: dict = {}
    for sym, m in a + b:
        counts[sym] = counts.get(sym, 0) + m
    return tuple(sorted(counts.items()))


def _union(a: tuple, b: tuple) -> tuple:
    return tuple(dict.fromkeys(a + b))


@dataclass(frozen=True)
class KValue:
    """An abelian group known up to the listed symbols.

    ``free_rank`` is None when even the rank is unknown. ``summands`` is a
    multiset of named groups (symbol, multiplicity).
    """

    status: Status
    free_rank: int | None = 0
    summands: tuple = ()
    bound: tuple = ()
    citations: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))
        empty = self.free_rank == 0 and not self.summands
        if (self.status is Status.Zero) != empty:
            raise ValueError(f"inconsistent KValue: status {self.status} with free rank "
                             f"{self.free_rank} and summands {self.summands}")

    @classmethod
    def zero(cls, *citations: str) -> "KValue":
        return cls(Status.Zero, 0, (), (), tuple(citations))

    @classmethod
    def free(cls, rank: int, *citations: str) -> "KValue":
        if rank == 0:
            return cls.zero(*citations)
        return cls(Status.Finite, rank, (), (), tuple(citations))

    @classmethod
    def symbol(cls, sym: str, status: Status, *citations: str, mult: int = 1,
               free_rank: int | None = 0, bound: tuple = ()) -> "KValue":
        return cls(status, free_rank, ((sym, mult),), tuple(bound), tuple(citations))

    def __add__(self, other: "KValue") -> "KValue":
        if not isinstance(other, KValue):
            return NotImplemented
        status = max(self.status, other.status, key=_RANK.get)
        if self.free_rank is None or other.free_rank is None:
            rank = None
        else:
            rank = self.free_rank + other.free_rank
        return KValue(status, rank, _merge(self.summands, other.summands),
                      _union(self.bound, other.bound), _union(self.citations, other.citations))

    def times(self, k: int) -> "KValue":
        out = KValue.zero()
        for _ in range(k):
            out = out + self
        return out

    @property
    def is_zero(self) -> bool:
        return self.status is Status.Zero

    @property
    def nonzero(self) -> bool:
        return self.status in (Status.Finite, Status.NonzeroUnspecified,
                               Status.InfinitelyGenerated)

    def text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.free_rank is None and not self.summands:
            parts.append("Z^?")
        elif self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for sym, m in self.summands:
            parts.append(sym if m == 1 else f"{m}·{sym}")
        s = " ⊕ ".join(parts)
        if self.status is Status.UnknownBoundedBy:
            s += f"  [unknown, bounded by {', '.join(self.bound)}]"
        elif self.status is Status.Unknown:
            s += "  [unknown]"
        elif self.status is Status.NonzeroUnspecified:
            s += "  [nonzero, value unspecified]"
        elif self.status is Status.InfinitelyGenerated:
            s += "  [infinitely generated]"
        return s

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank,
                "summands": [{"symbol": s, "mult": m} for s, m in self.summands],
                "status": self.status.value,
                "bound": list(self.bound),
                "citations": list(self.citations)}


def direct_sum(values) -> KValue:
    out = KValue.zero()
    for v in values:
        out = out + v
    return out


# ---------------------------------------------------------------- facts DB

class NilFact(str, Enum):
    Zero = "Zero"
    NonzeroInfinitelyGenerated = "NonzeroInfinitelyGenerated"
    Unknown = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Fact:
    status: str
    citation: str
    free_rank: int | None = None
    via: str = "table"


@dataclass(frozen=True)
class TypeRecord:
    wh: Fact
    ktilde0: Fact
    kminus1: Fact
    sk1_zero: bool | None
    sk1_citation: str
    nil1: Fact


@dataclass(frozen=True)
class KFactsDB:
    version: int
    types: dict
    virtually_cyclic: dict
    rules: dict

    def record(self, t: FiniteType) -> TypeRecord:
        t = FiniteType(t).canonical
        try:
            return self.types[t]
        except KeyError:
            raise NotInCatalog(f"no K-theory record for {t}") from None

    def citations(self) -> set:
        out = set(self.rules.values())
        for r in self.types.values():
            out.update((r.wh.citation, r.ktilde0.citation, r.kminus1.citation, r.sk1_citation,
                        r.nil1.citation))
        for r in self.virtually_cyclic.values():
            out.update(f.citation for f in r.values())
        return out


def _fact(d: dict) -> Fact:
    if not d.get("citation"):
        raise ValueError("facts record without a citation")
    return Fact(d.get("status", "Zero"), d["citation"], d.get("free_rank"), d.get("via", "table"))


def parse_facts(text: str) -> KFactsDB:
    doc = json.loads(text)
    types = {}
    for name, r in doc["types"].items():
        t = parse_type(name)
        sk1 = r["sk1_zero"]
        types[t] = TypeRecord(_fact(r["wh"]), _fact(r["ktilde0"]), _fact(r["kminus1"]),
                              sk1["value"], sk1["citation"], _fact(r["nil1"]))
    vc = {name: {k: _fact(v) for k, v in r.items()} for name, r in doc["virtually_cyclic"].items()}
    return KFactsDB(doc["version"], types, vc, dict(doc["rules"]))


@lru_cache(maxsize=None)
def facts() -> KFactsDB:
    text = (resources.files("whcryst") / "data" / "kfacts.json").read_text()
    return parse_facts(text)


# ---------------------------------------------------------------- finite groups

def bass_rank(G: FiniteGroupTable) -> int:
    """r - q: classes of {g, g^-1} pairs minus classes of cyclic subgroups."""
    r = inverse_pair_classes(G)
    q = cyclic_subgroup_classes(G)
    y = r - q
    assert y >= 0, f"negative Bass rank {y}"
    return y


def _fact_value(f: Fact, sym: str) -> KValue:
    if f.status == "Zero":
        return KValue.zero(f.citation)
    if f.status == "Finite":
        return KValue.free(f.free_rank, f.citation)
    if f.status == "NonzeroUnspecified":
        return KValue.symbol(sym, Status.NonzeroUnspecified, f.citation)
    if f.status == "InfinitelyGenerated":
        return KValue.symbol(sym, Status.InfinitelyGenerated, f.citation)
    return KValue.symbol(sym, Status.Unknown, f.citation, free_rank=None)


@dataclass(frozen=True)
class WhFinite:
    value: KValue
    path: str           # "table" or "bass_rank+sk1"
    bass_rank: int | None


def wh_finite_detail(t: FiniteType, G: FiniteGroupTable | None = None) -> WhFinite:
    t = parse_type(str(t)) if not isinstance(t, FiniteType) else t.canonical
    rec = facts().record(t)
    y = None
    if rec.sk1_zero:
        y = bass_rank(G if G is not None else catalog_group(t))
        if y != 0:
            raise TableViolation(f"Bass rank of {t} is {y}, but SK1 = 0 and Wh = 0 are recorded")
    if rec.wh.via == "bass_rank+sk1":
        if not rec.sk1_zero:
            raise TableViolation(f"{t}: the rank path needs SK1 = 0")
        return WhFinite(KValue.free(y, rec.wh.citation, rec.sk1_citation), "bass_rank+sk1", y)
    return WhFinite(_fact_value(rec.wh, f"Wh({t})"), "table", y)


def wh_finite(t: FiniteType, G: FiniteGroupTable | None = None) -> KValue:
    return wh_finite_detail(t, G).value


def lower_k(t: FiniteType, which: str) -> KValue:
    t = parse_type(str(t)) if not isinstance(t, FiniteType) else t.canonical
    rec = facts().record(t)
    if which in ("Ktilde0", "ktilde0"):
        return _fact_value(rec.ktilde0, f"Ktilde0(Z[{t}])")
    if which in ("Kminus1", "kminus1"):
        return _fact_value(rec.kminus1, f"K_-1(Z[{t}])")
    raise ValueError(f"unknown K-group {which!r}")


def nil_fact(t: FiniteType) -> NilFact:
    t = parse_type(str(t)) if not isinstance(t, FiniteType) else t.canonical
    st = facts().record(t).nil1.status
    if st == "Zero":
        return NilFact.Zero
    if st == "InfinitelyGenerated":
        return NilFact.NonzeroInfinitelyGenerated
    return NilFact.Unknown


def nil1(t: FiniteType) -> KValue:
    t = FiniteType(t).canonical
    return _fact_value(facts().record(t).nil1, f"Nil1(Z[{t}])")


# ---------------------------------------------------------------- VC groups

T = FiniteType


def special_vc_name(d: VCDescriptor) -> str | None:
    """Z, Dinf, ZxC2 or DinfxC2 when d is one of those abstract groups."""
    if d.kind == "Semidirect":
        if d.fiber is T.Trivial:
            return "Z"
        if d.fiber is T.C2:
            return "ZxC2"
        return None
    if d.fiber is T.Trivial:
        return "Dinf"
    if d.fiber is T.C2 and {d.vertexA, d.vertexB} == {T.D2}:
        return "DinfxC2"
    return None


def _check_row(d: VCDescriptor) -> None:
    if d.kind == "Amalgam":
        ok = d.key()[1:] in DIHEDRAL_ROWS
    elif d.kind == "Semidirect":
        ok = (d.fiber.value, d.phi) in TRANSLATION_ROWS
    else:
        ok = False
    if not ok:
        raise UnknownDescriptor(f"{d} is not a row of the classification tables")


def wh_vc(d: VCDescriptor) -> KValue:
    _check_row(d)
    db = facts()
    special = special_vc_name(d)
    if special is not None:
        return _fact_value(db.virtually_cyclic[special]["wh"], f"Wh({special})")
    F = d.fiber
    if d.kind == "Semidirect":
        if d.phi is not PhiClass.Trivial:
            return KValue.symbol(f"Wh({F} ⋊_φ Z)", Status.Unknown, db.rules["twisted"],
                                 free_rank=None)
        rule = db.rules["bass_heller_swan"]
        total = wh_finite(F) + lower_k(F, "Ktilde0") + nil1(F).times(2)
        return KValue(total.status, total.free_rank, total.summands, total.bound,
                      _union((rule,), total.citations))
    whA, whB, k0 = wh_finite(d.vertexA), wh_finite(d.vertexB), lower_k(F, "Ktilde0")
    if F is T.C2 and whA.is_zero and whB.is_zero and k0.is_zero:
        return KValue.zero(db.rules["waldhausen"], *whA.citations, *whB.citations,
                           *k0.citations)
    bound = (f"Wh({d.vertexA})", f"Wh({d.vertexB})", f"Ktilde0(Z[{F}])",
             f"NilW(Z[{F}]; {d.vertexA}, {d.vertexB})")
    return KValue.symbol(f"Wh({d.vertexA} *_{F} {d.vertexB})", Status.UnknownBoundedBy,
                         db.rules["amalgam_open"], free_rank=None, bound=bound)


def catalog_types() -> tuple:
    return CANONICAL_TYPES
