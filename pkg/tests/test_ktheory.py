import json

import pytest
from hypothesis import given, settings, strategies as st

from whcryst.errors import NotInCatalog, TableViolation, UnknownDescriptor
from whcryst.finite_groups import CANONICAL_TYPES, FiniteType as T, catalog_group, cyclic
from whcryst.ktheory import (KValue, NilFact, Status, bass_rank, direct_sum, facts, lower_k,
                             nil1, nil_fact, parse_facts, wh_finite, wh_finite_detail, wh_vc)
from whcryst.vc_classify import (DIHEDRAL_TABLE, TRANSLATION_TABLE, PhiClass, VCDescriptor,
                                 parse_descriptor)


def test_bass_rank_examples():
    assert bass_rank(catalog_group(T.A4xC2)) == 0
    assert bass_rank(catalog_group(T.C6)) == 0
    assert bass_rank(catalog_group(T.Trivial)) == 0
    assert bass_rank(cyclic(5)) == 1          # outside the catalog, Wh(Z5) has rank 1


@pytest.mark.parametrize("t", CANONICAL_TYPES, ids=lambda t: t.value)
def test_wh_finite_zero(t):
    d = wh_finite_detail(t)
    assert d.value.is_zero
    assert d.path in ("table", "bass_rank+sk1")
    assert d.value.citations
    if facts().record(t).sk1_zero:
        assert d.bass_rank == 0


def test_wh_paths():
    assert wh_finite_detail(T.C6).path == "table"
    assert wh_finite_detail(T.D6xC2).path == "bass_rank+sk1"
    assert wh_finite_detail(T.A4xC2).path == "bass_rank+sk1"


def test_sk1_rank_cross_check():
    with pytest.raises(TableViolation):
        wh_finite_detail(T.D2, cyclic(5))


def test_lower_k_examples():
    v = lower_k(T.C6, "Kminus1")
    assert v.status is Status.Finite and v.free_rank == 1
    assert lower_k(T.D6, "Kminus1").free_rank == 1
    assert lower_k(T.D3, "Kminus1").is_zero
    assert lower_k(T.D4, "Kminus1").is_zero
    assert lower_k(T.C4xC2, "Ktilde0").status is Status.NonzeroUnspecified
    for t in (T.C4xC2, T.D4xC2, T.D2xC2, T.C6xC2, T.D6xC2):
        assert lower_k(t, "Ktilde0").status is Status.NonzeroUnspecified
    with pytest.raises(ValueError):
        lower_k(T.C2, "K2")


def test_nil_facts():
    assert nil_fact(T.D2) is NilFact.NonzeroInfinitelyGenerated
    assert nil_fact(T.C2) is NilFact.Zero
    assert nil_fact(T.Trivial) is NilFact.Zero
    for t in CANONICAL_TYPES:
        if t not in (T.D2, T.C2, T.Trivial):
            assert nil_fact(t) is NilFact.Unknown


def test_not_in_catalog():
    with pytest.raises(NotInCatalog):
        nil_fact("C5")


def test_wh_vc_examples():
    v = wh_vc(VCDescriptor("Semidirect", T.D2, phi=PhiClass.Trivial))
    assert v.summands == (("Nil1(Z[D2])", 2),)
    assert v.status is Status.InfinitelyGenerated
    assert wh_vc(VCDescriptor("Amalgam", T.C2, T.C4, T.C4)).is_zero
    assert wh_vc(VCDescriptor("Semidirect", T.Trivial, phi=PhiClass.Trivial)).is_zero
    assert wh_vc(parse_descriptor("Amalgam(F=Trivial, A=C2, B=C2)")).is_zero
    assert wh_vc(parse_descriptor("Amalgam(F=C2, A=D2, B=D2)")).is_zero
    assert wh_vc(parse_descriptor("Semidirect(F=C2, phi=Trivial)")).is_zero
    assert wh_vc(parse_descriptor("Semidirect(F=C4, phi=Inv)")).status is Status.Unknown
    v = wh_vc(parse_descriptor("Amalgam(F=C6, A=D6, B=D6)"))
    assert v.status is Status.UnknownBoundedBy
    assert "Ktilde0(Z[C6])" in v.bound
    with pytest.raises(UnknownDescriptor):
        wh_vc(VCDescriptor("Semidirect", T.D2, phi=PhiClass.Order3))


def test_every_row_has_a_value():
    for F, pairs in DIHEDRAL_TABLE.items():
        for a, b in pairs:
            v = wh_vc(VCDescriptor("Amalgam", F, a, b))
            assert v.is_zero or v.citations
    for F, phis in TRANSLATION_TABLE.items():
        for phi in phis:
            v = wh_vc(VCDescriptor("Semidirect", F, phi=phi))
            assert v.is_zero or v.citations


def test_facts_db_requires_citations():
    doc = json.loads(json.dumps({"version": 1, "types": {}, "virtually_cyclic": {}, "rules": {}}))
    db = parse_facts(json.dumps(doc))
    assert db.types == {}
    from importlib import resources
    text = (resources.files("whcryst") / "data" / "kfacts.json").read_text()
    doc = json.loads(text)
    doc["types"]["C2"]["wh"]["citation"] = ""
    with pytest.raises(ValueError):
        parse_facts(json.dumps(doc))


def test_kvalue_invariant():
    with pytest.raises(ValueError):
        KValue(Status.Zero, 1)
    with pytest.raises(ValueError):
        KValue(Status.Finite, 0)
    assert KValue.free(0).is_zero
    assert KValue.free(2).text() == "Z^2"


def _kvalues():
    syms = st.sampled_from(["Nil1(Z[D2])", "Ktilde0(Z[C4xC2])", "Wh(X)"])
    stats = st.sampled_from([Status.Finite, Status.UnknownBoundedBy, Status.Unknown,
                             Status.NonzeroUnspecified, Status.InfinitelyGenerated])
    zero = st.just(KValue.zero("c0"))
    free = st.integers(1, 3).map(lambda r: KValue.free(r, "cf"))
    sym = st.builds(lambda s, t, m, r: KValue.symbol(s, t, "cs", mult=m, free_rank=r),
                    syms, stats, st.integers(1, 3), st.sampled_from([0, 1, None]))
    return st.one_of(zero, free, sym)


@settings(max_examples=200, deadline=None)
@given(_kvalues(), _kvalues(), _kvalues())
def test_kvalue_algebra(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + KValue.zero() == a
    assert (a + b).is_zero == (a.is_zero and b.is_zero)
    if Status.InfinitelyGenerated in (a.status, b.status):
        assert (a + b).status is Status.InfinitelyGenerated
    assert a.times(2) == a + a
    assert direct_sum([a, b, c]) == a + b + c


def test_nil1_doubling():
    v = nil1(T.D2).times(2)
    assert v.text() == "2·Nil1(Z[D2])  [infinitely generated]"
    assert nil1(T.C2).times(2).is_zero
