"""Conjugacy classes of maximal finite and maximal virtually cyclic subgroups.

Every finite subgroup fixes a point, so a maximal finite subgroup is the
pointwise stabilizer of its fixed flat V. The flats worth looking at are the
fixed flats of single elements (whose stabilizer is automatically maximal when
V is a point) and, in dimension 3, the reflection points on rotation axes. All
solving is exact: flats modulo Z^n come from integer linear algebra, not from a
search window.

A maximal VC subgroup with direction h is the preimage of a maximal finite
subgroup of the induced action on the lines parallel to h, so the VC
enumeration runs the finite enumeration once per axis direction.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import exact as ex
from .crystgroup import AffineIsometry, CrystGroup, SubgroupSpec
from .errors import ConjugacyViolation, DimensionError
from .finite_groups import FiniteType, identify_type, table_from_elements
from .geometry import (FiniteSubgroup, Line, LineGroup, fixed_sets, induced_action_on_line_family,
                       invariant_lines, line_group_of, line_stabilizer,
                       point_stabilizer, sign_eigenspaces, subgroup_closure, _alpha_coordinates,
                       _direction_sign)
from .vc_classify import VCDescriptor, classify, line_action_type, DihedralAction

ZERO_BUCKET_NOTE = ("lines in directions that are not point-group axes, and lines whose induced "
                    "stabilizer fixes more than a point, have stabilizers isomorphic to Z, D∞, "
                    "Z×Z2 or D∞×Z2; their Whitehead groups vanish")


# ---------------------------------------------------------------- flats

@dataclass(frozen=True)
class Flat:
    """The affine subspace point + span(directions)."""

    point: tuple
    directions: tuple

    @property
    def dim(self) -> int:
        return len(self.directions)


def _left_null(M: Sequence[Sequence], nrows: int) -> list:
    """Rows N with N M = 0."""
    if not M or not M[0]:
        return [tuple(int(i == j) for j in range(nrows)) for i in range(nrows)]
    return ex.nullspace(ex.transpose(tuple(M)), nrows)


def _in_lattice(basis: list, v: Sequence) -> bool:
    if not basis:
        return ex.is_zero(v)
    return ex.solve_integer(ex.transpose(tuple(basis)), v) is not None


def _quotient_reps(big: list, small: list, n: int) -> list:
    """Representatives of the finite group span(big) / span(small)."""
    reps = [ex.zero_vec(n)]
    i = 0
    while i < len(reps):
        for b in big:
            w = ex.add(reps[i], b)
            if not any(_in_lattice(small, ex.sub(w, r)) for r in reps):
                reps.append(w)
        i += 1
    return reps


def fixed_flats(c: AffineIsometry) -> list[Flat]:
    """Fixed flats of the elements (J, a + z), z in Z^n, one per orbit under Z^n."""
    J, a = c.linear, c.translation
    n = len(a)
    M = ex.mat_sub(ex.identity(n), J)
    N = _left_null(M, n)
    if N:
        sol = ex.solve_integer(N, ex.scale(-1, ex.mat_vec(N, a)), n)
        if sol is None:
            return []
        z0, ker = sol
        big = [ex.vec(k) for k in ker]
    else:
        z0 = (0,) * n
        big = [ex.vec(r) for r in ex.identity(n)]
    small = ex.lattice_basis([col for col in ex.transpose(M) if not ex.is_zero(col)])
    dirs = tuple(tuple(v) for v in ex.nullspace(M, n))
    out = []
    for r in _quotient_reps(big, small, n):
        rhs = ex.add(ex.add(a, z0), r)
        q0, _ = ex.solve_affine(M, rhs, n)
        out.append(Flat(ex.vec(q0), dirs))
    return out


def flat_stabilizer(G: CrystGroup, V: Flat) -> FiniteSubgroup:
    """Elements of G fixing V pointwise."""
    elems = []
    for c in G.cosets:
        if any(c.apply_linear(d) != ex.vec(d) for d in V.directions):
            continue
        z = ex.sub(ex.sub(V.point, c.apply_linear(V.point)), c.translation)
        if ex.is_integral(z):
            elems.append(c.shifted(z))
    return FiniteSubgroup(G, elems, V.point)


def _meets_flat(c: AffineIsometry, V: Flat) -> bool:
    """Whether some element of the coset of c fixes a point of V."""
    n = len(V.point)
    JmI = ex.mat_sub(c.linear, ex.identity(n))
    A = ex.transpose(tuple(ex.mat_vec(JmI, d) for d in V.directions)) if V.directions else ()
    N = _left_null(A, n) if V.directions else [tuple(int(i == j) for j in range(n))
                                               for i in range(n)]
    rhs = ex.add(ex.mat_vec(JmI, V.point), c.translation)
    if not N:
        return True
    return ex.solve_integer(N, ex.scale(-1, ex.mat_vec(N, rhs)), n) is not None


def _maps_flat(c: AffineIsometry, V1: Flat, V2: Flat) -> bool:
    """Whether some element of the coset of c maps V1 onto V2."""
    n = len(V1.point)
    if V1.dim != V2.dim:
        return False
    if V1.dim:
        img = [c.apply_linear(d) for d in V1.directions]
        if ex.rank(tuple(img) + tuple(V2.directions)) != V2.dim:
            return False
        N = _left_null(ex.transpose(tuple(V2.directions)), n)
    else:
        N = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    w = ex.sub(c.apply(V1.point), V2.point)
    return ex.solve_integer(N, ex.scale(-1, ex.mat_vec(N, w)), n) is not None


def _orbit_key(G: CrystGroup, p: Sequence) -> tuple:
    return min(ex.mod1(c.apply(p)) for c in G.cosets)


def _flat_key(V: Flat) -> tuple:
    """A normal form of V modulo Z^n; equal keys mean equal flats mod Z^n (not conversely)."""
    R, piv = ex.rref(V.directions)
    R = [tuple(r) for r in R[:len(piv)]]
    p = list(V.point)
    for r, c in zip(R, piv):
        x = p[c]
        p = [pi - x * ri for pi, ri in zip(p, r)]
    rest = tuple(p[k] - (p[k].numerator // p[k].denominator)
                 for k in range(len(p)) if k not in piv)
    return tuple(R), rest


def _image_flat(c: AffineIsometry, V: Flat) -> Flat:
    return Flat(c.apply(V.point), tuple(c.apply_linear(d) for d in V.directions))


def _flat_reps(G: CrystGroup, flats: list) -> list:
    """One flat per G-orbit."""
    reps: list[Flat] = []
    seen: set = set()
    for V in flats:
        if _flat_key(V) in seen:
            continue
        if any(_maps_flat(c, V, W) for W in reps if W.dim == V.dim for c in G.cosets):
            continue
        reps.append(V)
        seen.update(_flat_key(_image_flat(c, V)) for c in G.cosets)
    return reps


def _type_of_stabilizer(H: FiniteSubgroup) -> FiniteType:
    # a finite group fixing a point embeds in its linear parts
    return identify_type(table_from_elements(H.linear_parts, ex.mat_mul))


# ---------------------------------------------------------------- finite classes

@dataclass
class FiniteClass:
    type: FiniteType
    point: tuple
    subgroup: FiniteSubgroup
    fixed_dim: int
    certificate: str

    @property
    def spec(self) -> SubgroupSpec:
        return self.subgroup.spec


def _reflection_points(G: CrystGroup, V: Flat) -> list:
    l = Line.make(G.gram, V.point, ex.primitive(V.directions[0]))
    try:
        act = line_action_type(line_stabilizer(G, l))
    except Exception:
        return []
    if isinstance(act, DihedralAction):
        return [act.p_a, act.p_b]
    return []


def maximal_finite_classes(G: CrystGroup, include_trivial: bool = False) -> list[FiniteClass]:
    """One entry per conjugacy class of maximal finite subgroups.

    The trivial subgroup is reported only when asked for and when G is
    torsion-free.
    """
    n = G.dim
    points: dict = {}
    flats: list[Flat] = []
    for c in G.cosets[1:]:
        for V in fixed_flats(c):
            if V.dim == 0:
                points.setdefault(_orbit_key(G, V.point), V.point)
            else:
                flats.append(V)
    reps = _flat_reps(G, flats)
    if n == 3:
        for V in reps:
            if V.dim == 1:
                for p in _reflection_points(G, V):
                    points.setdefault(_orbit_key(G, p), p)
    out = []
    for key in sorted(points):
        p = points[key]
        H = point_stabilizer(G, p)
        fs = fixed_sets(H.linear_parts)
        if fs.E0:
            continue
        out.append(FiniteClass(_type_of_stabilizer(H), ex.mod1(p), H, 0, "isolated fixed point"))
    for V in reps:
        H = flat_stabilizer(G, V)
        if len(fixed_sets(H.linear_parts).E0) != V.dim:
            continue
        mine = set(H.linear_parts)
        if any(_meets_flat(c, V) for c in G.cosets if c.linear not in mine):
            continue
        out.append(FiniteClass(_type_of_stabilizer(H), V.point, H, V.dim,
                               "no point of the fixed flat has a larger stabilizer"))
    if include_trivial and not out and not points and not flats:
        one = AffineIsometry.identity(n)
        H = FiniteSubgroup(G, [one], ex.zero_vec(n))
        out.append(FiniteClass(FiniteType.Trivial, ex.zero_vec(n), H, n, "torsion-free"))
    out.sort(key=lambda fc: (fc.fixed_dim, -fc.subgroup.order, fc.type.value, fc.point))
    return out


# ---------------------------------------------------------------- maximality

@dataclass
class Certificate:
    kind: str                   # "Maximal-by-unique-line", "Maximal-by-direct-check", "NotMaximal"
    witness: LineGroup | None = None
    note: str = ""

    @property
    def maximal(self) -> bool:
        return self.kind != "NotMaximal"


def _as_spec(G) -> SubgroupSpec:
    return G.spec() if isinstance(G, LineGroup) else G


def certify_maximal(G) -> Certificate:
    """Decide whether a VC subgroup is maximal among VC subgroups of its parent."""
    S = _as_spec(G)
    parent = S.parent
    inv = invariant_lines(S)
    if inv.kind == "none" or not inv.lines:
        raise ValueError("the subgroup preserves no line, so it is not virtually infinite cyclic")
    l = inv.lines[0]
    mine = line_group_of(S, l)
    if not mine.is_infinite():
        raise ValueError("the subgroup is finite")
    if inv.kind == "unique":
        full = line_stabilizer(parent, l)
        if full.same_group(mine):
            return Certificate("Maximal-by-unique-line", note="unique invariant line")
        return Certificate("NotMaximal", full, note="strictly contained in the line stabilizer")
    if mine.ell != 1:
        return Certificate("NotMaximal", line_stabilizer(parent, l),
                           note="misses translations along its line")
    # a whole family of invariant lines: look for a line in the family whose
    # stabilizer has an extra linear part
    gram = parent.gram
    h = l.direction
    fam = _family(S, h)
    p0, free = fam
    n = parent.dim
    alpha, coords = _alpha_coordinates(gram, h)
    k = len(alpha)
    for c in parent.cosets:
        if c.linear in mine.elements or _direction_sign(c, h) == 0:
            continue
        JmI = ex.mat_sub(c.linear, ex.identity(n))
        A = ex.transpose(tuple(coords(ex.mat_vec(JmI, f)) for f in free))
        B = ex.transpose(tuple(coords(tuple(int(i == j) for j in range(n))) for i in range(n)))
        rhs = ex.scale(-1, coords(ex.add(ex.mat_vec(JmI, p0), c.translation)))
        N = _left_null(A, k)
        if N:
            sol = ex.solve_integer(tuple(ex.mat_vec(ex.transpose(B), r) for r in N),
                                   ex.mat_vec(N, rhs), n)
            if sol is None:
                continue
            z = sol[0]
        else:
            z = (0,) * n
        t, _ = ex.solve_affine(A, ex.sub(rhs, ex.mat_vec(B, z)), len(free))
        q = p0
        for ti, f in zip(t, free):
            q = ex.add(q, ex.scale(ti, f))
        wl = Line.make(gram, q, h)
        return Certificate("NotMaximal", line_stabilizer(parent, wl),
                           note=f"the stabilizer of {wl} is strictly larger")
    return Certificate("Maximal-by-direct-check", note="no line of the invariant family has a "
                       "larger stabilizer")


def _family(S: SubgroupSpec, h):
    from .geometry import _base_point_family
    cl = subgroup_closure(S.generators, S.dim)
    return _base_point_family(S.parent.gram, list(S.generators) + list(cl.reps.values()), h)


# ---------------------------------------------------------------- VC classes

@dataclass
class VCClass:
    descriptor: VCDescriptor
    line: Line
    group: LineGroup
    certificate: Certificate
    direction_class: tuple

    @property
    def spec(self) -> SubgroupSpec:
        return self.group.spec()


@dataclass
class SubgroupClassList:
    group: CrystGroup
    finite_classes: list
    vc_classes: list
    zero_bucket_note: str = ZERO_BUCKET_NOTE
    audit_radius: int | None = None
    directions: list = field(default_factory=list)


def axis_directions(G: CrystGroup) -> list[tuple]:
    """Axis directions of point-group elements, one per orbit under the point group and sign.

    Rotations contribute their +1 eigenline and orientation-reversing elements
    their -1 eigenline, whenever that eigenspace is a line.
    """
    n = G.dim
    found = []
    for c in G.cosets[1:]:
        J = c.linear
        s = 1 if ex.det(J) == 1 else -1
        sp = sign_eigenspaces([J]).get((s,))
        if sp and len(sp) == 1:
            found.append(ex.primitive(sp[0]))
    mats = G.point_group_matrices()
    classes: dict = {}
    for h in found:
        orbit = {ex.primitive(ex.mat_vec(J, h)) for J in mats}
        classes.setdefault(min(orbit), True)
    return sorted(classes)


def _classes_along(G: CrystGroup, h: tuple) -> list[VCClass]:
    ind = induced_action_on_line_family(G, h)
    out = []
    for fc in maximal_finite_classes(ind.group, include_trivial=True):
        l = ind.line_through(fc.point)
        lg = line_stabilizer(G, l)
        d = classify(lg)
        if fc.fixed_dim == 0:
            cert = Certificate("Maximal-by-unique-line", note="unique invariant line")
        else:
            cert = certify_maximal(lg)
        out.append(VCClass(d, l, lg, cert, h))
    return out


def _classes_along_job(args):
    return _classes_along(*args)


def maximal_vc_classes(G: CrystGroup, jobs: int = 1, radius: int | None = None) -> SubgroupClassList:
    if G.dim != 3:
        raise DimensionError(f"VC enumeration is implemented for dimension 3, got {G.dim}")
    dirs = axis_directions(G)
    if jobs > 1 and len(dirs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_dir = list(pool.map(_classes_along_job, [(G, h) for h in dirs]))
    else:
        per_dir = [_classes_along(G, h) for h in dirs]
    vc = [v for chunk in per_dir for v in chunk]
    finite = maximal_finite_classes(G)
    res = SubgroupClassList(G, finite, vc, directions=dirs)
    if radius is not None:
        audit(res, radius)
        res.audit_radius = radius
    return res


def subgroup_classes(G: CrystGroup, jobs: int = 1, radius: int | None = None) -> SubgroupClassList:
    """Finite classes for any group, VC classes too in dimension 3."""
    if G.dim == 3:
        return maximal_vc_classes(G, jobs, radius)
    res = SubgroupClassList(G, maximal_finite_classes(G), [])
    if radius is not None:
        audit(res, radius)
        res.audit_radius = radius
    return res


def audit(res: SubgroupClassList, radius: int) -> None:
    """Check that no element (J, a_J + z) with |z| <= radius conjugates two listed
    representatives."""
    G = res.group
    n = G.dim
    ball = list(itertools.product(range(-radius, radius + 1), repeat=n))
    pts = [(i, fc.point) for i, fc in enumerate(res.finite_classes) if fc.fixed_dim == 0]
    for i, p in pts:
        for j, q in pts:
            if i == j:
                continue
            for c in G.cosets:
                z = ex.sub(ex.sub(q, c.apply_linear(p)), c.translation)
                if ex.is_integral(z) and max(abs(x) for x in z) <= radius:
                    raise ConjugacyViolation(f"finite classes {i} and {j} are conjugate by "
                                             f"{c.shifted(z)!r}")
    reps = []
    for v in res.vc_classes:
        h = v.line.direction
        N = [tuple(int(x) for x in ex.primitive(r))
             for r in _left_null(ex.transpose((h,)), n)]
        table = {tuple(sum(a * b for a, b in zip(r, z)) for r in N): z for z in ball}
        reps.append((v.line, N, table))
    for i, (li, _, _) in enumerate(reps):
        for j, (lj, N, table) in enumerate(reps):
            if i == j:
                continue
            for c in G.cosets:
                Jh = c.apply_linear(li.direction)
                if Jh != ex.vec(lj.direction) and Jh != ex.scale(-1, lj.direction):
                    continue
                w0 = ex.sub(c.apply(li.base), lj.base)
                target = tuple(-sum(a * b for a, b in zip(r, w0)) for r in N)
                if all(t.denominator == 1 for t in target) and \
                        tuple(int(t) for t in target) in table:
                    z = table[tuple(int(t) for t in target)]
                    raise ConjugacyViolation(f"VC classes {i} and {j} are conjugate by "
                                             f"{c.shifted(z)!r}")
