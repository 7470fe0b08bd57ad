"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import exact as ex
from .crystgroup import catalog_names, load_group, point_group
from .errors import InputError, InvariantViolation, WhError
from .finite_groups import (CANONICAL_TYPES, FiniteType, catalog_group, cyclic_subgroup_classes,
                            identify_type, inverse_pair_classes, out_group)
from .geometry import Line, line_stabilizer, point_stabilizer
from .ktheory import bass_rank, facts, wh_finite
from .report import corollary2, whitehead_group
from .vc_classify import (DIHEDRAL_ROWS, EXCLUDED_AMALGAMS, EXCLUDED_SEMIDIRECT,
                          TRANSLATION_ROWS, check_realizable, classify)
from .vc_enumerate import SubgroupClassList, subgroup_classes


def _p(p) -> str:
    return "(" + ", ".join(ex.format_rational(x) for x in p) + ")"


def classes_text(res: SubgroupClassList) -> str:
    G = res.group
    out = [f"{G.name}: maximal finite classes ({len(res.finite_classes)})"]
    for fc in res.finite_classes:
        where = _p(fc.point) if fc.fixed_dim == 0 else f"flat of dim {fc.fixed_dim} through {_p(fc.point)}"
        out.append(f"  {fc.type.value:<7} order {fc.subgroup.order:<3} at {where}")
    if G.dim == 3:
        out.append(f"{G.name}: maximal VC classes ({len(res.vc_classes)})")
        for v in res.vc_classes:
            out.append(f"  {v.descriptor.text():<44} {v.descriptor.abstract_name():<18} "
                       f"{v.line}  [{v.certificate.kind}]")
        out.append(f"  zero bucket: {res.zero_bucket_note}")
    if res.audit_radius is not None:
        out.append(f"conjugacy audit: passed at radius {res.audit_radius}")
    return "\n".join(out)


def classes_json(res: SubgroupClassList) -> dict:
    return {
        "schema_version": 1,
        "group": res.group.name,
        "finite_classes": [{"type": fc.type.value, "order": fc.subgroup.order,
                            "point": [ex.format_rational(x) for x in fc.point],
                            "fixed_dim": fc.fixed_dim, "certificate": fc.certificate}
                           for fc in res.finite_classes],
        "vc_classes": [{"descriptor": v.descriptor.text(), "abstract": v.descriptor.abstract_name(),
                        "line": str(v.line), "certificate": v.certificate.kind}
                       for v in res.vc_classes],
        "zero_bucket": res.zero_bucket_note if res.group.dim == 3 else "",
        "audit_radius": res.audit_radius,
    }


# ---------------------------------------------------------------- selftest

def _random_point(rng: random.Random, n: int) -> tuple:
    return tuple(Fraction(rng.randrange(0, 12), rng.choice((1, 2, 3, 4, 6, 12))) for _ in range(n))


def selftest(seed: int = 0, samples: int = 60) -> list[tuple[str, bool, str]]:
    rows = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except WhError as e:
            ok, detail = False, str(e)
        rows.append((name, bool(ok), detail))

    expected_out = {"C2": 1, "D3": 1, "C3": 2, "C4": 2, "C6": 2, "D4": 2, "D6": 2, "D2": 6}
    for t, k in expected_out.items():
        check(f"|Out({t})| = {k}", lambda t=t, k=k: (out_group(catalog_group(FiniteType(t))).order == k,
                                                   f"order {out_group(catalog_group(FiniteType(t))).order}"))

    def out_d2():
        O = out_group(catalog_group(FiniteType.D2))
        t = identify_type(O.table)
        orders = sorted(O.table.elem_order(min(c)) for c in O.classes())
        return t is FiniteType.D3 and orders == [1, 2, 3], f"type {t.value}, class orders {orders}"
    check("Out(D2) ≅ D3", out_d2)

    def a4c2():
        G = catalog_group(FiniteType.A4xC2)
        r, q = inverse_pair_classes(G), cyclic_subgroup_classes(G)
        return r == q == 6, f"r = {r}, q = {q}"
    check("A4xC2: r = q = 6", a4c2)

    for t in CANONICAL_TYPES:
        if t is FiniteType.Trivial:
            continue
        check(f"bass rank of {t.value} is 0", lambda t=t: (bass_rank(catalog_group(t)) == 0, ""))
        check(f"Wh({t.value}) = 0", lambda t=t: (wh_finite(t).is_zero, ""))

    for F, rows_ in EXCLUDED_AMALGAMS.items():
        for a, b in rows_:
            check(f"rejects amalgam ({F.value}; {a.value}, {b.value})",
                  lambda F=F, a=a, b=b: (not check_realizable((F, a, b))[0], ""))
    for F, phis in EXCLUDED_SEMIDIRECT.items():
        for phi in phis:
            check(f"rejects {F.value} x|_{phi.value} Z",
                  lambda F=F, phi=phi: (not check_realizable((F, phi))[0], ""))

    check("facts carry citations", lambda: (all(facts().citations()), f"{len(facts().citations())} strings"))

    for name in catalog_names():
        G = load_group(f"catalog:{name}")

        def table_rows(G=G):
            res = subgroup_classes(G)
            for v in res.vc_classes:
                d = v.descriptor
                key = d.key()[1:]
                if key not in (DIHEDRAL_ROWS if d.kind == "Amalgam" else TRANSLATION_ROWS):
                    return False, d.text()
            return True, f"{len(res.vc_classes)} VC classes, {len(res.finite_classes)} finite"
        check(f"{name}: classes are table rows", table_rows)

        def isotropy(G=G, name=name):
            rng = random.Random(f"{seed}:{name}")
            for _ in range(samples):
                p = _random_point(rng, G.dim)
                H = point_stabilizer(G, p)
                identify_type(H.table)
                if G.dim == 3:
                    h = tuple(rng.randint(-2, 2) for _ in range(3))
                    if any(h):
                        classify(line_stabilizer(G, Line.make(G.gram, p, h)))
            return True, f"{samples} points"
        check(f"{name}: random isotropy in catalog", isotropy)
    return rows


# ---------------------------------------------------------------- main

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="whcryst",
                                 description="Whitehead groups of 3-dimensional crystallographic groups")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for the enumeration")
    common.add_argument("--radius", type=int, default=2,
                        help="element-ball radius of the conjugacy audit (default 2)")
    common.add_argument("--seed", type=int, default=0, help="seed for the randomized selftest checks")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name, hlp in (("validate", "parse and validate a group file"),
                      ("classes", "list maximal finite and maximal VC classes"),
                      ("wh", "Whitehead group report"),
                      ("corollary2", "Wh(G x Z) for a 2-dimensional group G")):
        p = sub.add_parser(name, help=hlp, parents=[common])
        p.add_argument("group", help="catalog:NAME or a path to a group file")
    sub.add_parser("catalog", help="list built-in groups", parents=[common])
    sub.add_parser("selftest", help="run the built-in verification matrix", parents=[common])
    return ap


def _emit(args, text: str, doc: dict) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def run(args) -> int:
    if args.cmd == "validate":
        G = load_group(args.group)
        t = identify_type(point_group(G)[0])
        _emit(args, f"point group: {t.value}; OK",
              {"group": G.name, "dim": G.dim, "point_group": t.value, "valid": True})
        return 0
    if args.cmd == "classes":
        G = load_group(args.group)
        res = subgroup_classes(G, jobs=args.jobs, radius=args.radius)
        _emit(args, classes_text(res), classes_json(res))
        return 0
    if args.cmd == "wh":
        G = load_group(args.group)
        rep = whitehead_group(G, jobs=args.jobs, radius=args.radius)
        _emit(args, rep.text(), rep.to_json())
        return 0
    if args.cmd == "corollary2":
        G = load_group(args.group)
        rep = corollary2(G, jobs=args.jobs, radius=args.radius)
        _emit(args, rep.text(), rep.to_json())
        return 0
    if args.cmd == "catalog":
        items = []
        for name in catalog_names():
            G = load_group(f"catalog:{name}")
            items.append((name, G.dim, identify_type(point_group(G)[0]).value))
        _emit(args, "\n".join(f"catalog:{n:<8} dim {d}  point group {t}" for n, d, t in items),
              {"groups": [{"name": n, "dim": d, "point_group": t} for n, d, t in items]})
        return 0
    if args.cmd == "selftest":
        rows = selftest(args.seed)
        width = max(len(r[0]) for r in rows)
        text = "\n".join(f"{n:<{width}}: {'PASS' if ok else 'FAIL'}" + (f"  ({d})" if d and not ok else "")
                         for n, ok, d in rows)
        passed = sum(ok for _, ok, _ in rows)
        text += f"\n{passed}/{len(rows)} passed"
        _emit(args, text, {"seed": args.seed,
                           "results": [{"check": n, "pass": ok, "detail": d} for n, ok, d in rows]})
        return 0 if passed == len(rows) else 2
    raise AssertionError(args.cmd)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return run(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 2
