"""Stabilizers of points and lines, invariant lines, fixed sets, line families.

Points are rational vectors in lattice coordinates; lines carry a primitive
integer direction and a base point G-orthogonal to it, so equal lines compare
equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact as ex
from .crystgroup import AffineIsometry, CrystGroup, SubgroupSpec, build_group
from .errors import DegenerateLattice, ValidationError
from .finite_groups import FiniteGroupTable, closure, table_from_elements


# ---------------------------------------------------------------- lines

@dataclass(frozen=True)
class Line:
    base: tuple
    direction: tuple

    @classmethod
    def make(cls, gram: ex.GramForm, point: Sequence, direction: Sequence) -> "Line":
        h = ex.primitive(direction)
        p = gram.project_off(ex.vec(point), h)
        return cls(p, h)

    def point_at(self, t) -> tuple:
        return ex.add(self.base, ex.scale(Fraction(t), self.direction))

    def __str__(self) -> str:
        p = ", ".join(ex.format_rational(x) for x in self.base)
        h = ", ".join(str(x) for x in self.direction)
        return f"({p}) + R({h})"

    def sort_key(self):
        return (self.direction, self.base)


def line_image(gram: ex.GramForm, g: AffineIsometry, l: Line) -> Line:
    return Line.make(gram, g.apply(l.base), g.apply_linear(l.direction))


def along(gram: ex.GramForm, v: Sequence, h: Sequence) -> Fraction:
    """Coefficient c with v = c h, raising if v is not parallel to h."""
    c = gram.inner(v, h) / gram.inner(h, h)
    if ex.sub(ex.vec(v), ex.scale(c, h)) != ex.zero_vec(len(h)):
        raise ValueError("vector is not parallel to the line")
    return c


def _direction_sign(g: AffineIsometry, h: Sequence) -> int:
    Jh = g.apply_linear(h)
    if Jh == ex.vec(h):
        return 1
    if Jh == ex.scale(-1, h):
        return -1
    return 0


# ---------------------------------------------------------------- finite stabilizers

@dataclass
class FiniteSubgroup:
    """A finite subgroup listed element by element (identity first)."""

    parent: CrystGroup
    elements: list
    point: tuple | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def spec(self) -> SubgroupSpec:
        return SubgroupSpec(self.parent, tuple(self.elements[1:]))

    @property
    def table(self) -> FiniteGroupTable:
        # a finite subgroup maps isomorphically onto its linear parts, and the
        # integer product is much cheaper than the affine one
        return table_from_elements(self.linear_parts, ex.mat_mul)

    @property
    def linear_parts(self) -> list:
        return [g.linear for g in self.elements]


def point_stabilizer(G: CrystGroup, p: Sequence) -> FiniteSubgroup:
    """All elements of G fixing the point p."""
    p = ex.vec(p)
    elems = []
    for c in G.cosets:
        z = ex.sub(ex.sub(p, c.apply_linear(p)), c.translation)
        if ex.is_integral(z):
            elems.append(c.shifted(z))
    return FiniteSubgroup(G, elems, p)


# ---------------------------------------------------------------- subgroup closure

@dataclass
class SubgroupClosure:
    """S = union over J of reps[J] + lattice, computed from generators."""

    reps: dict
    lattice: list  # echelon basis of {v : translation by v lies in S}

    @property
    def linear_parts(self) -> list:
        return list(self.reps)

    @property
    def is_finite(self) -> bool:
        return not self.lattice

    def contains(self, g: AffineIsometry) -> bool:
        r = self.reps.get(g.linear)
        if r is None:
            return False
        v = ex.sub(g.translation, r.translation)
        if not self.lattice:
            return ex.is_zero(v)
        return ex.solve_integer(ex.transpose(tuple(self.lattice)), v) is not None


def subgroup_closure(gens: Iterable[AffineIsometry], dim: int) -> SubgroupClosure:
    gens = list(gens)
    one = AffineIsometry.identity(dim)
    reps = {one.linear: one}
    lat: list = []

    def reduce(v):
        if not lat:
            return v
        # canonical representative of v modulo the lattice
        sol = ex.solve_integer(ex.transpose(tuple(lat)), v)
        return ex.zero_vec(dim) if sol is not None else v

    while True:
        extra = []
        order = list(reps)
        i = 0
        while i < len(order):
            x = reps[order[i]]
            for g in gens:
                y = x * g
                old = reps.get(y.linear)
                if old is None:
                    reps[y.linear] = y
                    order.append(y.linear)
                else:
                    d = ex.mat_vec(ex.int_inverse(y.linear), ex.sub(y.translation, old.translation))
                    if not ex.is_zero(reduce(d)):
                        extra.append(d)
            i += 1
        for J in reps:
            for v in lat:
                w = ex.mat_vec(J, v)
                if not ex.is_zero(reduce(w)):
                    extra.append(w)
        if not extra:
            return SubgroupClosure(reps, lat)
        lat = ex.lattice_basis(lat + extra)


# ---------------------------------------------------------------- line groups

@dataclass
class LineGroup:
    """A group preserving a line l: one element per linear part, plus translations
    by multiples of ``ell * h``. ``ell == 0`` means the group is finite."""

    line: Line
    gram: ex.GramForm
    elements: dict          # linear part -> element, normalized so 0 <= s < ell (ell > 0)
    ell: int
    parent: CrystGroup | None = None

    def __post_init__(self):
        h = self.line.direction
        normed = {}
        for J, g in self.elements.items():
            if _direction_sign(g, h) == 0:
                raise ValueError("element does not preserve the line direction")
            s = self._shift(g)
            if self.ell:
                k = (s // self.ell)
                g = g.shifted(ex.scale(-k * self.ell, h))
            normed[J] = g
        self.elements = dict(sorted(normed.items()))

    def _shift(self, g: AffineIsometry) -> Fraction:
        p = self.line.base
        return along(self.gram, ex.sub(g.apply(p), p), self.line.direction)

    def eps(self, g: AffineIsometry) -> int:
        return _direction_sign(g, self.line.direction)

    def shift(self, g: AffineIsometry) -> Fraction:
        """s with g(p + t h) = p + (eps t + s) h."""
        return self._shift(g)

    @property
    def orientation_preserving(self) -> list:
        return [g for g in self.elements.values() if self.eps(g) == 1]

    @property
    def reversing(self) -> list:
        return [g for g in self.elements.values() if self.eps(g) == -1]

    @property
    def translation_length(self) -> Fraction:
        """Generator t0 of the translation image in Isom(l), in units of h."""
        return ex.rational_gcd([self.ell] + [self.shift(g) for g in self.orientation_preserving])

    def _with_shift(self, g: AffineIsometry, target: Fraction) -> AffineIsometry | None:
        s = self.shift(g)
        if self.ell == 0:
            return g if s == target else None
        k = (target - s) / self.ell
        if k.denominator != 1:
            return None
        return g.shifted(ex.scale(k * self.ell, self.line.direction))

    def pointwise(self) -> list:
        """Elements fixing the line pointwise (identity first)."""
        out = []
        for g in self.orientation_preserving:
            f = self._with_shift(g, Fraction(0))
            if f is not None:
                out.append(f)
        out.sort(key=lambda g: (not g.is_identity(), g.linear))
        return out

    def stabilizer_of(self, t: Fraction) -> list:
        """Elements fixing the point p + t h (identity first)."""
        out = self.pointwise()
        for g in self.reversing:
            f = self._with_shift(g, 2 * Fraction(t))
            if f is not None:
                out.append(f)
        return out

    def minimal_translation(self) -> AffineIsometry | None:
        t0 = self.translation_length
        if t0 == 0:
            return None
        for g in self.orientation_preserving:
            f = self._with_shift(g, t0)
            if f is not None:
                return f
        raise AssertionError("translation image is not attained")

    def reflection_values(self) -> list:
        """Shifts c of reversing elements x -> -x + c, reduced modulo t0."""
        t0 = self.translation_length
        vals = set()
        for g in self.reversing:
            c = self.shift(g)
            vals.add(c - t0 * (c // t0) if t0 else c)
        return sorted(vals)

    def generators(self) -> list:
        gens = [g for g in self.elements.values() if not g.is_identity()]
        if self.ell:
            gens.append(AffineIsometry.translation_by(ex.scale(self.ell, self.line.direction)))
        return gens

    def spec(self, label: str = "") -> SubgroupSpec:
        return SubgroupSpec(self.parent, tuple(self.generators()), label)

    def is_infinite(self) -> bool:
        return self.ell != 0

    def same_group(self, other: "LineGroup") -> bool:
        if self.ell != other.ell or set(self.elements) != set(other.elements):
            return False
        return all(self._with_shift(other.elements[J], self.shift(g)) == g
                   for J, g in self.elements.items())


def line_group_of(S: SubgroupSpec, l: Line) -> LineGroup:
    """Coset data of a subgroup that preserves the line l."""
    cl = subgroup_closure(S.generators, S.dim)
    h = l.direction
    if len(cl.lattice) > 1:
        raise ValueError("subgroup contains independent translations; it preserves no line")
    ell = 0
    if cl.lattice:
        ell = int(abs(along(S.parent.gram, cl.lattice[0], h)))
    return LineGroup(l, S.parent.gram, dict(cl.reps), ell, S.parent)


def _alpha_coordinates(gram: ex.GramForm, h: Sequence):
    alpha = ex.orthogonal_complement(gram, h)
    return alpha, (lambda v: ex.coordinates(alpha, gram.project_off(v, h)))


def line_stabilizer(G: CrystGroup, l: Line) -> LineGroup:
    """The full stabilizer of the line l in G (as a set)."""
    h = l.direction
    p = l.base
    n = G.dim
    alpha, coords = _alpha_coordinates(G.gram, h)
    C = ex.transpose(tuple(coords(tuple(int(i == j) for j in range(n))) for i in range(n)))
    elems = {}
    for c in G.cosets:
        if _direction_sign(c, h) == 0:
            continue
        w = coords(ex.sub(c.apply(p), p))
        sol = ex.solve_integer(C, ex.scale(-1, w))
        if sol is None:
            continue
        z0, ker = sol
        elems[c.linear] = c.shifted(z0)
    return LineGroup(l, G.gram, elems, 1, G)


def is_vc_cocompact(S, l: Line) -> bool:
    """Whether S (a group or subgroup) has infinite image in Isom(l)."""
    if isinstance(S, CrystGroup):
        return True
    if isinstance(S, LineGroup):
        return S.translation_length != 0
    cl = subgroup_closure(S.generators, S.dim)
    if not cl.lattice:
        return False
    if len(cl.lattice) > 1:
        return False
    try:
        along(S.parent.gram, cl.lattice[0], l.direction)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------- invariant lines

@dataclass
class InvariantLines:
    kind: str                      # "none", "unique", "several", "infinite"
    lines: list = field(default_factory=list)
    note: str = ""


def _base_point_family(gram: ex.GramForm, elems: Iterable[AffineIsometry], h: Sequence):
    """Base points p in the complement of h with g(p + Rh) = p + Rh for all elems.

    Returns None, or (p0, list of free directions).
    """
    alpha, coords = _alpha_coordinates(gram, h)
    k = len(alpha)
    rows, rhs = [], []
    for g in elems:
        if _direction_sign(g, h) == 0:
            return None
        M = ex.transpose(tuple(coords(ex.sub(g.apply_linear(a), a)) for a in alpha))
        b = coords(g.translation)
        rows.extend(M)
        rhs.extend(ex.scale(-1, b))
    sol = ex.solve_affine(tuple(rows), rhs, k)
    if sol is None:
        return None
    t0, ker = sol
    p0 = ex.zero_vec(len(h))
    for ti, a in zip(t0, alpha):
        p0 = ex.add(p0, ex.scale(ti, a))
    free = []
    for kv in ker:
        v = ex.zero_vec(len(h))
        for ti, a in zip(kv, alpha):
            v = ex.add(v, ex.scale(ti, a))
        free.append(v)
    return p0, free


def sign_eigenspaces(mats: Sequence) -> dict:
    """Nonzero common eigenspaces: sign pattern -> basis of {v : M_i v = s_i v}."""
    mats = list(mats)
    n = len(mats[0]) if mats else 0
    out = {}
    for signs in itertools.product((1, -1), repeat=len(mats)):
        rows = []
        for M, s in zip(mats, signs):
            rows.extend(ex.mat_sub(M, ex.scale_matrix(s, ex.identity(n))))
        basis = ex.nullspace(tuple(rows), n) if rows else ex.nullspace((), n)
        if basis:
            out[signs] = [ex.vec(ex.primitive(v)) for v in _canonical_basis(basis)]
    return out


def _canonical_basis(basis: Sequence) -> list:
    R, piv = ex.rref(tuple(basis))
    return [tuple(r) for r in R[:len(piv)]]


def invariant_lines(S: SubgroupSpec) -> InvariantLines:
    gram = S.parent.gram
    cl = subgroup_closure(S.generators, S.dim)
    elems = list(S.generators)
    if len(cl.lattice) > 1:
        return InvariantLines("none", note="contains independent translations")
    if cl.lattice:
        h = ex.primitive(cl.lattice[0])
        fam = _base_point_family(gram, elems + list(cl.reps.values()), h)
        if fam is None:
            return InvariantLines("none", note="no base point is compatible with every generator")
        p0, free = fam
        l = Line.make(gram, p0, h)
        if free:
            return InvariantLines("infinite", [l], note=f"lines parallel to {h} forming a "
                                  f"{len(free)}-parameter family")
        return InvariantLines("unique", [l])
    # finite subgroup
    mats = [g.linear for g in cl.reps.values()]
    lines = []
    for signs, basis in sign_eigenspaces(_generating_matrices(mats)).items():
        if len(basis) >= 2:
            return InvariantLines("infinite", note="finite group with a 2-dimensional "
                                  "common eigenspace")
        h = ex.primitive(basis[0])
        fam = _base_point_family(gram, list(cl.reps.values()), h)
        if fam is None:
            continue
        p0, free = fam
        if free:
            return InvariantLines("infinite", note=f"parallel family in direction {h}")
        lines.append(Line.make(gram, p0, h))
    lines.sort(key=Line.sort_key)
    if not lines:
        return InvariantLines("none")
    return InvariantLines("unique" if len(lines) == 1 else "several", lines)


def _generating_matrices(mats: Sequence) -> list:
    """A short list of matrices generating the same group as ``mats``."""
    gens: list = []
    have = {ex.identity(len(mats[0]))} if mats else set()
    for M in mats:
        if M in have:
            continue
        gens.append(M)
        have = set(closure(gens, ex.mat_mul, ex.identity(len(M))))
    return gens


# ---------------------------------------------------------------- fixed sets

@dataclass(frozen=True)
class FixedSets:
    E0: tuple          # basis of the common fixed subspace
    E1: tuple          # list of subspaces (bases) where every f acts by +-1, some by -1


def fixed_sets(F: Sequence) -> FixedSets:
    mats = [ex.mat(M) for M in F]
    n = len(mats[0])
    gens = _generating_matrices(mats)
    spaces = sign_eigenspaces(gens)
    plus = tuple(1 for _ in gens)
    E0 = tuple(spaces.get(plus, []))
    if not gens:
        E0 = tuple(ex.vec(r) for r in ex.identity(n))
    E1 = tuple(tuple(b) for s, b in sorted(spaces.items()) if s != plus)
    return FixedSets(E0, E1)


# ---------------------------------------------------------------- line families

@dataclass
class InducedAction:
    """The action of the stabilizer of the family of lines parallel to h on the
    G-orthogonal complement of h, as a (dim-1)-dimensional crystallographic group."""

    group: CrystGroup
    h: tuple
    basis: list            # ambient vectors of the induced translation lattice
    lifts: dict            # induced linear part -> parent linear parts restricting to it

    def to_ambient(self, c: Sequence) -> tuple:
        p = ex.zero_vec(len(self.h))
        for ci, b in zip(c, self.basis):
            p = ex.add(p, ex.scale(ci, b))
        return p

    def line_through(self, c: Sequence) -> Line:
        return Line.make(self.group_parent_gram, self.to_ambient(c), self.h)

    group_parent_gram: ex.GramForm | None = None


def induced_action_on_line_family(G: CrystGroup, h: Sequence) -> InducedAction:
    h = ex.primitive(h)
    n = G.dim
    alpha, coords = _alpha_coordinates(G.gram, h)
    keep = [c for c in G.cosets if _direction_sign(c, h) != 0]
    kernel = [c for c in keep
              if all(c.apply_linear(a) == a for a in alpha)]
    gens = [coords(tuple(int(i == j) for j in range(n))) for i in range(n)]
    gens += [coords(c.translation) for c in kernel]
    lat = ex.lattice_basis(gens)
    if len(lat) != n - 1:
        raise DegenerateLattice(f"projected lattice has rank {len(lat)}, expected {n - 1}")
    basis = []
    for row in lat:
        v = ex.zero_vec(n)
        for ci, a in zip(row, alpha):
            v = ex.add(v, ex.scale(ci, a))
        basis.append(v)
    cosets = {}
    lifts: dict = {}
    for c in keep:
        M = ex.transpose(tuple(ex.coordinates(basis, c.apply_linear(b)) for b in basis))
        M = ex.to_int_matrix(M)
        t = ex.mod1(ex.coordinates(basis, G.gram.project_off(c.translation, h)))
        prev = cosets.get(M)
        if prev is not None and prev.translation != t:
            raise AssertionError("inconsistent induced cosets")
        cosets[M] = AffineIsometry(M, t)
        lifts.setdefault(M, []).append(c.linear)
    gram = G.gram.restrict(basis)
    name = f"{G.name}/[{','.join(map(str, h))}]"
    try:
        group = build_group(name, gram, list(cosets.values()))
    except ValidationError as e:
        raise AssertionError(f"induced action is not crystallographic: {e}") from None
    return InducedAction(group, tuple(h), basis, lifts, group_parent_gram=G.gram)
