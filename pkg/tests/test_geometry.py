import random
from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given, settings, strategies as st

import oracles
from whcryst import exact as ex
from whcryst.crystgroup import SubgroupSpec, load_group
from whcryst.finite_groups import closure, identify_type
from whcryst.geometry import (Line, fixed_sets, induced_action_on_line_family, invariant_lines,
                              line_image, line_stabilizer, point_stabilizer)

GROUPS_3D = ["P1", "Pm", "P2_1", "PmmxZ", "P4cc", "P622", "Pm-3m"]
GROUPS = GROUPS_3D + ["p1", "p2", "p4", "p6", "pg", "Pmm"]
frac = st.fractions(min_value=-1, max_value=1, max_denominator=12)


def test_point_stabilizer_examples(catalog):
    G = catalog("Pm-3m")
    assert identify_type(point_stabilizer(G, (0, 0, 0)).table).value == "S4xC2"
    assert identify_type(point_stabilizer(G, (Q(1, 2), 0, 0)).table).value == "D4xC2"
    assert point_stabilizer(catalog("P2_1"), (0, 0, 0)).order == 1
    assert identify_type(point_stabilizer(catalog("p6"), (Q(1, 3), Q(2, 3))).table).value == "C3"


@pytest.mark.parametrize("name", ["p4", "Pmm", "P622"])
def test_point_stabilizer_matches_ball(catalog, name):
    G = catalog(name)
    elems = oracles.ball(G, 2)
    rng = random.Random(name)
    for _ in range(15):
        p = tuple(Q(rng.randrange(d), d) for d in (rng.choice((2, 3, 4, 6, 12)) for _ in range(G.dim)))
        brute = {g for g in elems if oracles._apply(g, p) == p}
        mine = {(g.linear, g.translation) for g in point_stabilizer(G, p).elements}
        assert mine == brute


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_stabilizer_conjugation(name, data):
    """Stab(g p) = g Stab(p) g^-1."""
    G = load_group(f"catalog:{name}")
    p = tuple(data.draw(frac) for _ in range(G.dim))
    z = data.draw(st.lists(st.integers(-1, 1), min_size=G.dim, max_size=G.dim))
    g = data.draw(st.sampled_from(G.cosets)).shifted(z)
    S = point_stabilizer(G, p)
    T = point_stabilizer(G, g.apply(p))
    conj = {g * s * g.inverse() for s in S.elements}
    assert conj == set(T.elements)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(GROUPS_3D), st.data())
def test_line_canonical_form(name, data):
    G = load_group(f"catalog:{name}")
    p = tuple(data.draw(frac) for _ in range(3))
    h = tuple(data.draw(st.lists(st.integers(-2, 2), min_size=3, max_size=3)))
    if not any(h):
        return
    t = data.draw(frac)
    l = Line.make(G.gram, p, h)
    assert Line.make(G.gram, ex.add(p, ex.scale(t, h)), ex.scale(-2, h)) == l
    assert G.gram.inner(l.base, l.direction) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Pm", "PmmxZ", "P4cc", "P622"]), st.data())
def test_line_stabilizer_conjugation(name, data):
    G = load_group(f"catalog:{name}")
    p = tuple(data.draw(frac) for _ in range(3))
    h = data.draw(st.sampled_from([(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, -1, 0)]))
    g = data.draw(st.sampled_from(G.cosets))
    l = Line.make(G.gram, p, h)
    m = line_image(G.gram, g, l)
    S, T = line_stabilizer(G, l), line_stabilizer(G, m)
    assert len(S.elements) == len(T.elements)
    assert S.translation_length == T.translation_length
    for s in S.elements.values():
        assert (g * s * g.inverse()).linear in T.elements
        assert line_image(G.gram, s, l) == l


def _key(basis):
    return oracles._span_key([sympy.Matrix(v) for v in basis], len(basis[0]))


def test_fixed_sets_examples():
    rot = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
    fs = fixed_sets([ex.identity(3), rot, ex.mat_mul(rot, rot), ex.mat_mul(rot, ex.mat_mul(rot, rot))])
    assert _key(fs.E0) == _key([(0, 0, 1)])
    assert fs.E1 == ()
    mirror = ((1, 0, 0), (0, 1, 0), (0, 0, -1))
    fs = fixed_sets([ex.identity(3), mirror])
    assert len(fs.E0) == 2
    assert [_key(b) for b in fs.E1] == [_key([(0, 0, 1)])]


@pytest.mark.parametrize("name", GROUPS_3D)
def test_fixed_sets_match_oracle(catalog, name):
    G = catalog(name)
    mats = G.point_group_matrices()
    rng = random.Random(name)
    for _ in range(6):
        F = closure(rng.sample(mats, min(2, len(mats))), ex.mat_mul, ex.identity(3))
        fs = fixed_sets(F)
        E0, E1 = oracles.sign_pattern_oracle(F)
        assert (_key(fs.E0) if fs.E0 else ()) == E0
        assert {_key(b) for b in fs.E1} == E1


def test_invariant_lines_kinds(catalog):
    G = catalog("PmmxZ")
    c = [x for x in G.cosets if x.linear == ((-1, 0, 0), (0, -1, 0), (0, 0, 1))][0]
    S = SubgroupSpec(G, (c, G.lattice_translation((0, 0, 1))))
    inv = invariant_lines(S)
    assert inv.kind == "unique"
    assert inv.lines[0].direction == (0, 0, 1)
    S = SubgroupSpec(G, (G.lattice_translation((0, 0, 1)),))
    assert invariant_lines(S).kind == "infinite"
    S = SubgroupSpec(G, (G.lattice_translation((0, 0, 1)), G.lattice_translation((1, 0, 0))))
    assert invariant_lines(S).kind == "none"


def test_induced_action_is_crystallographic(catalog):
    ind = induced_action_on_line_family(catalog("P622"), (0, 0, 1))
    assert ind.group.dim == 2
    from whcryst.crystgroup import point_group
    assert identify_type(point_group(ind.group)[0]).value == "D6"
    ind = induced_action_on_line_family(catalog("PmmxZ"), (0, 0, 1))
    assert identify_type(point_group(ind.group)[0]).value == "D2"
