"""Whitehead group reports: one summand per maximal VC class, plus the product formula
for 2-dimensional groups times Z."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import exact as ex
from .crystgroup import CrystGroup, product_with_Z
from .errors import CrossCheckFailure, DimensionError
from .ktheory import KValue, Status, direct_sum, facts, nil1, wh_vc
from .vc_enumerate import (SubgroupClassList, ZERO_BUCKET_NOTE, maximal_finite_classes,
                           maximal_vc_classes, _orbit_key)

SCHEMA_VERSION = 1


@dataclass
class ReportEntry:
    descriptor: str
    abstract: str
    where: str
    certificate: str
    value: KValue

    def to_json(self) -> dict:
        return {"class": self.descriptor, "abstract": self.abstract, "where": self.where,
                "certificate": self.certificate, "value": self.value.to_json()}


@dataclass
class WhReport:
    group: str
    kind: str                      # "whitehead" or "corollary2"
    entries: list
    total: KValue
    infinitely_generated: bool
    finiteness_note: str
    zero_bucket: str = ""
    zero_bucket_citations: tuple = ()
    cross_check: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "group": self.group,
            "entries": [e.to_json() for e in self.entries],
            "total": self.total.to_json(),
            "infinitely_generated": self.infinitely_generated,
            "finiteness_note": self.finiteness_note,
            "zero_bucket": {"note": self.zero_bucket, "citations": list(self.zero_bucket_citations)},
            "cross_check": self.cross_check,
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False)

    def text(self) -> str:
        head = "Wh" if self.kind == "whitehead" else "Wh (product formula)"
        lines = [f"{head}({self.group})"]
        for i, e in enumerate(self.entries, 1):
            lines.append(f"  [{i}] {e.descriptor}  ≅ {e.abstract}")
            lines.append(f"      at {e.where}; {e.certificate}")
            label = e.value.text()
            if e.value.status in (Status.Unknown, Status.UnknownBoundedBy):
                label += ", outside the cited results"
            lines.append(f"      Wh = {label}")
            if not e.value.is_zero:
                for c in e.value.citations:
                    lines.append(f"      source: {c}")
        if not self.entries:
            lines.append("  (no classes)")
        if self.zero_bucket:
            lines.append(f"  zero bucket: {self.zero_bucket}")
            for c in self.zero_bucket_citations:
                lines.append(f"      source: {c}")
        nonzero = sum(1 for e in self.entries if not e.value.is_zero)
        lines.append(f"total: {self.total.text()}")
        lines.append(f"  {nonzero} nonzero summand(s); {self.finiteness_note}")
        lines.append(f"infinitely generated: {'yes' if self.infinitely_generated else 'no'}")
        if self.cross_check:
            lines.append(f"cross-check: {self.cross_check}")
        return "\n".join(lines)


def _point_text(p) -> str:
    return "(" + ", ".join(ex.format_rational(x) for x in p) + ")"


def _zero_bucket_citations() -> tuple:
    vc = facts().virtually_cyclic
    return tuple(dict.fromkeys(vc[k]["wh"].citation for k in ("Z", "Dinf", "ZxC2", "DinfxC2")))


def _assemble(name: str, kind: str, entries: list, **kw) -> WhReport:
    total = direct_sum(e.value for e in entries)
    infinite = any(e.value.status is Status.InfinitelyGenerated for e in entries)
    note = f"finite direct sum over {len(entries)} class(es)"
    return WhReport(name, kind, entries, total, infinite, note, **kw)


def whitehead_group(G: CrystGroup, jobs: int = 1, radius: int | None = None,
                    classes: SubgroupClassList | None = None) -> WhReport:
    if classes is None:
        classes = maximal_vc_classes(G, jobs=jobs, radius=radius)
    entries = []
    for v in classes.vc_classes:
        d = v.descriptor
        entries.append(ReportEntry(d.text(), d.abstract_name(), str(v.line), v.certificate.kind,
                                   wh_vc(d)))
    rep = _assemble(G.name, "whitehead", entries, zero_bucket=ZERO_BUCKET_NOTE,
                    zero_bucket_citations=_zero_bucket_citations())
    rep.extra["classes"] = classes
    return rep


def corollary2(G2: CrystGroup, jobs: int = 1, radius: int | None = None) -> WhReport:
    """Wh(G2 x Z) as twice the sum of Nil1(Z[F]) over maximal finite classes F of G2,
    checked against the general VC-class assembly on G2 x Z."""
    if G2.dim != 2:
        raise DimensionError(f"the product formula needs a 2-dimensional group, got dim {G2.dim}")
    rule = facts().rules["corollary"]
    entries = []
    keyed = {}
    for fc in maximal_finite_classes(G2):
        v = nil1(fc.type).times(2)
        v = KValue(v.status, v.free_rank, v.summands, v.bound, (rule,) + v.citations)
        e = ReportEntry(f"{fc.type} x Z", f"{fc.type} × ℤ", _point_text(fc.point),
                        "maximal finite class", v)
        entries.append(e)
        keyed[_orbit_key(G2, fc.point)] = (fc, e)
    rep = _assemble(G2.name + "xZ", "corollary2", entries)
    rep.cross_check = _cross_check(G2, keyed, rep, jobs, radius)
    return rep


def _cross_check(G2: CrystGroup, keyed: dict, rep: WhReport, jobs: int, radius) -> str:
    P = product_with_Z(G2)
    W = whitehead_group(P, jobs=jobs, radius=radius)
    classes = W.extra["classes"].vc_classes
    seen = set()
    for v, e in zip(classes, W.entries):
        d = v.descriptor
        vertical = v.line.direction == (0, 0, 1)
        if vertical and d.kind == "Semidirect":
            key = _orbit_key(G2, v.line.base[:2])
            if key not in keyed:
                raise CrossCheckFailure(f"VC class {d} over {v.line} has no finite class")
            fc, ce = keyed[key]
            if fc.type is not d.fiber or ce.value != e.value:
                raise CrossCheckFailure(f"class at {_point_text(fc.point)}: {ce.value.text()} "
                                        f"versus {e.value.text()}")
            seen.add(key)
        elif not e.value.is_zero:
            raise CrossCheckFailure(f"unexpected nonzero summand {d} in Wh({P.name})")
    missing = set(keyed) - seen
    if missing:
        raise CrossCheckFailure(f"{len(missing)} finite class(es) without a VC class in {P.name}")
    if rep.total != W.total:
        raise CrossCheckFailure(f"totals differ: {rep.total.text()} versus {W.total.text()}")
    return (f"agrees with the VC-class assembly on {P.name} "
            f"({len(seen)} matched class(es), remaining summands zero)")
