"""Structure of virtually infinite cyclic groups acting on a line.

A group G preserving a line l with infinite image in Isom(l) either acts
dihedrally, and is an amalgam G^a *_F G^b of two vertex stabilizers over the
pointwise fiber F, or acts by translations, and is F x| Z with the monodromy of
a minimal translation acting on F. The admissible (F, G^a, G^b) and (F, phi)
combinations are fixed tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from . import exact as ex
from .crystgroup import AffineIsometry, SubgroupSpec
from .errors import NotCocompact, TableViolation, UnknownDescriptor
from .finite_groups import FiniteType, identify_type, out_group, parse_type, table_from_elements
from .geometry import Line, LineGroup, line_group_of

T = FiniteType


class PhiClass(str, Enum):
    Trivial = "Trivial"
    Inv = "Inv"
    Order3 = "Order3"

    def __str__(self) -> str:
        return self.value


PHI_BY_ORDER = {1: PhiClass.Trivial, 2: PhiClass.Inv, 3: PhiClass.Order3}

# dihedral action: fiber -> vertex pairs, as the tables name them
DIHEDRAL_TABLE = {
    T.Trivial: [(T.C2, T.C2)],
    T.C2: [(T.C4, T.C4), (T.D2, T.C4), (T.D2, T.D2)],
    T.C3: [(T.C6, T.C6), (T.D3, T.C6), (T.D3, T.D3)],
    T.C4: [(T.C4xC2, T.C4xC2), (T.D4, T.C4xC2), (T.D4, T.D4)],
    T.C6: [(T.C6xC2, T.C6xC2), (T.D6, T.C6xC2), (T.D6, T.D6)],
    T.D2: [(T.D2xC2, T.D2xC2), (T.D4, T.D2xC2), (T.D4, T.D4)],
    T.D3: [(T.D3xC2, T.D3xC2)],
    T.D4: [(T.D4xC2, T.D4xC2)],
    T.D6: [(T.D6xC2, T.D6xC2)],
}

# candidates that survive the algebraic constraints but cannot be realized by isometries
EXCLUDED_AMALGAMS = {
    T.D2: [(T.C4xC2, T.D2xC2), (T.D4, T.C4xC2), (T.C4xC2, T.C4xC2)],
}

# translation action: fiber -> admissible monodromy classes
TRANSLATION_TABLE = {
    T.Trivial: [PhiClass.Trivial],
    T.C2: [PhiClass.Trivial],
    T.C3: [PhiClass.Trivial, PhiClass.Inv],
    T.C4: [PhiClass.Trivial, PhiClass.Inv],
    T.C6: [PhiClass.Trivial, PhiClass.Inv],
    T.D2: [PhiClass.Trivial, PhiClass.Inv],
    T.D3: [PhiClass.Trivial],
    T.D4: [PhiClass.Trivial, PhiClass.Inv],
    T.D6: [PhiClass.Trivial, PhiClass.Inv],
}

EXCLUDED_SEMIDIRECT = {T.D2: [PhiClass.Order3]}

FIBER_TYPES = tuple(TRANSLATION_TABLE)


def _pair(a: FiniteType, b: FiniteType) -> tuple:
    """Unordered pair of canonical tags."""
    a, b = a.canonical.value, b.canonical.value
    return tuple(sorted((a, b)))


def _rows(table: dict) -> set:
    return {(F.canonical.value, _pair(a, b)) for F, pairs in table.items() for a, b in pairs}


DIHEDRAL_ROWS = _rows(DIHEDRAL_TABLE)
EXCLUDED_AMALGAM_ROWS = _rows(EXCLUDED_AMALGAMS)
TRANSLATION_ROWS = {(F.value, phi) for F, phis in TRANSLATION_TABLE.items() for phi in phis}
EXCLUDED_SEMIDIRECT_ROWS = {(F.value, phi) for F, phis in EXCLUDED_SEMIDIRECT.items() for phi in phis}


@dataclass(frozen=True)
class VCDescriptor:
    kind: str                                   # "Amalgam" or "Semidirect"
    fiber: FiniteType
    vertexA: FiniteType | None = None
    vertexB: FiniteType | None = None
    phi: PhiClass | None = None
    line: Line | None = field(default=None, compare=False)
    p_a: tuple | None = field(default=None, compare=False)
    p_b: tuple | None = field(default=None, compare=False)
    witnesses: tuple = field(default=(), compare=False, repr=False)

    def text(self) -> str:
        if self.kind == "Amalgam":
            return f"Amalgam(F={self.fiber}, A={self.vertexA}, B={self.vertexB})"
        return f"Semidirect(F={self.fiber}, phi={self.phi})"

    __str__ = text

    def abstract_name(self) -> str:
        F = self.fiber.value
        if self.kind == "Amalgam":
            if self.fiber is T.Trivial:
                return "D∞"
            return f"{self.vertexA} *_{F} {self.vertexB}"
        if self.fiber is T.Trivial:
            return "ℤ"
        if self.phi is PhiClass.Trivial:
            return f"{F} × ℤ"
        return f"{F} ⋊_φ ℤ"

    def key(self) -> tuple:
        if self.kind == "Amalgam":
            return ("Amalgam", self.fiber.value, _pair(self.vertexA, self.vertexB))
        return ("Semidirect", self.fiber.value, self.phi.value)


def parse_descriptor(text: str) -> VCDescriptor:
    """Inverse of :meth:`VCDescriptor.text`."""
    s = text.strip()
    kind, _, rest = s.partition("(")
    if not rest.endswith(")") or kind not in ("Amalgam", "Semidirect"):
        raise UnknownDescriptor(f"cannot parse descriptor {text!r}")
    fields = dict(part.strip().split("=", 1) for part in rest[:-1].split(","))
    try:
        if kind == "Amalgam":
            return VCDescriptor("Amalgam", parse_type(fields["F"]),
                                parse_type(fields["A"]), parse_type(fields["B"]))
        return VCDescriptor("Semidirect", parse_type(fields["F"]), phi=PhiClass(fields["phi"]))
    except (KeyError, ValueError):
        raise UnknownDescriptor(f"cannot parse descriptor {text!r}") from None


# ---------------------------------------------------------------- line actions

@dataclass
class DihedralAction:
    group: LineGroup
    t_a: Fraction
    t_b: Fraction

    @property
    def p_a(self) -> tuple:
        return self.group.line.point_at(self.t_a)

    @property
    def p_b(self) -> tuple:
        return self.group.line.point_at(self.t_b)


@dataclass
class TranslationAction:
    group: LineGroup
    g0: AffineIsometry


def _as_line_group(G: Union[SubgroupSpec, LineGroup], l: Line | None) -> LineGroup:
    if isinstance(G, LineGroup):
        return G
    if l is None:
        raise ValueError("a line is required for a subgroup given by generators")
    return line_group_of(G, l)


def line_action_type(G: Union[SubgroupSpec, LineGroup], l: Line | None = None):
    lg = _as_line_group(G, l)
    t0 = lg.translation_length
    if t0 == 0:
        raise NotCocompact("the image in Isom(l) is finite")
    refl = lg.reflection_values()
    if not refl:
        return TranslationAction(lg, lg.minimal_translation())
    # reflection points are c/2 + (t0/2) Z
    u = t0 / 2
    c2 = refl[0] / 2
    r = c2 - u * (c2 // u)
    t_a = r if r <= u - r else r - u
    return DihedralAction(lg, t_a, t_a + u)


def _type_of(elements: list) -> FiniteType:
    return identify_type(table_from_elements(elements, lambda a, b: a * b))


def dihedral_decomposition(G: Union[SubgroupSpec, LineGroup], l: Line | None = None) -> VCDescriptor:
    act = line_action_type(G, l)
    if not isinstance(act, DihedralAction):
        raise ValueError("the group acts on the line by translations only")
    lg = act.group
    fiber = lg.pointwise()
    Ga = lg.stabilizer_of(act.t_a)
    Gb = lg.stabilizer_of(act.t_b)
    if not (len(Ga) == len(Gb) == 2 * len(fiber)):
        raise TableViolation(f"vertex groups of orders {len(Ga)}, {len(Gb)} over a fiber of "
                             f"order {len(fiber)}")
    F, A, B = _type_of(fiber), _type_of(Ga), _type_of(Gb)
    row = (F.value, _pair(A, B))
    if row not in DIHEDRAL_ROWS:
        extra = " (a candidate that cannot occur geometrically)" if row in EXCLUDED_AMALGAM_ROWS else ""
        raise TableViolation(f"({F}; {A}, {B}) is not an admissible dihedral row{extra}")
    return VCDescriptor("Amalgam", F, A, B, line=lg.line, p_a=act.p_a, p_b=act.p_b,
                        witnesses=tuple(lg.generators()))


def monodromy_class(fiber: list, g0: AffineIsometry) -> PhiClass:
    """Outer class of f -> g0^-1 f g0 on the fiber, named by its order in Out."""
    pos = {f.linear: i for i, f in enumerate(fiber)}
    J0 = g0.linear
    J0i = ex.int_inverse(J0)
    aut = tuple(pos[ex.mat_mul(ex.mat_mul(J0i, f.linear), J0)] for f in fiber)
    table = table_from_elements([f.linear for f in fiber], ex.mat_mul)
    out = out_group(table)
    k = out.table.elem_order(out.index_of(aut))
    try:
        return PHI_BY_ORDER[k]
    except KeyError:
        raise TableViolation(f"monodromy of order {k} in Out(F)") from None


def translation_monodromy(G: Union[SubgroupSpec, LineGroup], l: Line | None = None) -> VCDescriptor:
    act = line_action_type(G, l)
    if not isinstance(act, TranslationAction):
        raise ValueError("the group acts on the line dihedrally")
    lg = act.group
    fiber = lg.pointwise()
    F = _type_of(fiber)
    phi = monodromy_class(fiber, act.g0)
    row = (F.value, phi)
    if row not in TRANSLATION_ROWS:
        extra = " (a candidate that cannot occur geometrically)" if row in EXCLUDED_SEMIDIRECT_ROWS else ""
        raise TableViolation(f"({F}, phi={phi}) is not an admissible translation row{extra}")
    return VCDescriptor("Semidirect", F, phi=phi, line=lg.line, witnesses=tuple(lg.generators()))


def classify(G: Union[SubgroupSpec, LineGroup], l: Line | None = None) -> VCDescriptor:
    act = line_action_type(G, l)
    if isinstance(act, DihedralAction):
        return dihedral_decomposition(act.group)
    return translation_monodromy(act.group)


def check_realizable(d) -> tuple[bool, str]:
    """Whether a candidate row occurs for subgroups of 3-crystallographic groups.

    ``d`` is a VCDescriptor, its text form, or a tuple ``(F, A, B)`` /
    ``(F, phi)``.
    """
    if isinstance(d, str):
        d = parse_descriptor(d)
    if isinstance(d, tuple):
        if len(d) == 3:
            d = VCDescriptor("Amalgam", parse_type(str(d[0])), parse_type(str(d[1])),
                             parse_type(str(d[2])))
        elif len(d) == 2:
            phi = d[1]
            if isinstance(phi, int):
                phi = PHI_BY_ORDER.get(phi)
                if phi is None:
                    raise UnknownDescriptor(f"no monodromy class of order {d[1]}")
            d = VCDescriptor("Semidirect", parse_type(str(d[0])), phi=PhiClass(phi))
        else:
            raise UnknownDescriptor(f"cannot interpret {d!r}")
    if d.kind == "Amalgam":
        row = (d.fiber.canonical.value, _pair(d.vertexA, d.vertexB))
        if row in DIHEDRAL_ROWS:
            return True, "admissible dihedral row"
        if row in EXCLUDED_AMALGAM_ROWS:
            return False, ("a C4xC2 vertex over a D2 fiber would force the fiber to be cyclic "
                           "of order 4")
        raise UnknownDescriptor(f"{d.text()} is not among the dihedral candidates")
    row = (d.fiber.canonical.value, d.phi)
    if row in TRANSLATION_ROWS:
        return True, "admissible translation row"
    if row in EXCLUDED_SEMIDIRECT_ROWS:
        return False, ("an order-3 outer automorphism of D2 permutes its three involutions "
                       "cyclically, which no isometry of the plane fixing the line can do")
    raise UnknownDescriptor(f"{d.text()} is not among the translation candidates")
