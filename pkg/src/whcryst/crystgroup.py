"""Crystallographic groups in lattice coordinates.

The translation lattice is always exactly Z^dim. A group is stored as its coset
system: one affine map (J, a_J) per point-group element, with a_J reduced into
[0, 1)^dim. The full group is {(J, a_J + z) : z in Z^dim}.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from . import exact as ex
from .errors import DimensionError, ParseError, ValidationError
from .finite_groups import FiniteGroupTable, table_from_elements

ALLOWED_ORDERS = (1, 2, 3, 4, 6)
MAX_COSETS = {2: 12, 3: 48}


@dataclass(frozen=True)
class AffineIsometry:
    """x -> J x + a, with J an integer matrix and a a rational vector."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        object.__setattr__(self, "linear", ex.mat(self.linear))
        object.__setattr__(self, "translation", ex.vec(self.translation))

    @classmethod
    def identity(cls, n: int) -> "AffineIsometry":
        return cls(ex.identity(n), ex.zero_vec(n))

    @classmethod
    def translation_by(cls, v: Sequence) -> "AffineIsometry":
        return cls(ex.identity(len(v)), v)

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __mul__(self, other: "AffineIsometry") -> "AffineIsometry":
        return AffineIsometry(ex.mat_mul(self.linear, other.linear),
                              ex.add(ex.mat_vec(self.linear, other.translation), self.translation))

    def inverse(self) -> "AffineIsometry":
        Ji = ex.int_inverse(self.linear)
        return AffineIsometry(Ji, ex.scale(-1, ex.mat_vec(Ji, self.translation)))

    def apply(self, p: Sequence) -> tuple:
        return ex.add(ex.mat_vec(self.linear, p), self.translation)

    def apply_linear(self, v: Sequence) -> tuple:
        return ex.mat_vec(self.linear, v)

    def reduced(self) -> "AffineIsometry":
        return AffineIsometry(self.linear, ex.mod1(self.translation))

    def shifted(self, z: Sequence) -> "AffineIsometry":
        """Compose with the lattice translation by z on the left."""
        return AffineIsometry(self.linear, ex.add(self.translation, z))

    def is_identity(self) -> bool:
        return self.linear == ex.identity(self.dim) and ex.is_zero(self.translation)

    def __repr__(self) -> str:
        t = ", ".join(ex.format_rational(x) for x in self.translation)
        return f"AffineIsometry({list(map(list, self.linear))}, ({t}))"


@dataclass(frozen=True)
class CrystGroup:
    name: str
    dim: int
    gram: ex.GramForm
    cosets: tuple
    _by_linear: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "cosets", tuple(self.cosets))
        object.__setattr__(self, "_by_linear", {c.linear: c for c in self.cosets})

    @property
    def order(self) -> int:
        """Order of the point group."""
        return len(self.cosets)

    def coset(self, J) -> AffineIsometry | None:
        return self._by_linear.get(ex.mat(J))

    def contains(self, g: AffineIsometry) -> bool:
        c = self.coset(g.linear)
        return c is not None and ex.is_integral(ex.sub(g.translation, c.translation))

    def point_group_matrices(self) -> list:
        return [c.linear for c in self.cosets]

    def lattice_translation(self, z: Sequence) -> AffineIsometry:
        return AffineIsometry.translation_by(z)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "gram": [[ex.format_rational(x) for x in r] for r in self.gram.entries],
            "generators": [
                {"linear": [list(r) for r in c.linear],
                 "translation": [ex.format_rational(x) for x in c.translation]}
                for c in self.cosets if c.linear != ex.identity(self.dim)
            ],
        }


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of ``parent`` given by generators with unreduced translations."""

    parent: CrystGroup
    generators: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def dim(self) -> int:
        return self.parent.dim

    def check_membership(self) -> None:
        for g in self.generators:
            if not self.parent.contains(g):
                raise ValidationError(f"{g!r} is not an element of {self.parent.name}")


# ---------------------------------------------------------------- construction

def _coset_key(g: AffineIsometry):
    return (g.linear, g.translation)


def build_group(name: str, gram: ex.GramForm, generators: Iterable[AffineIsometry]) -> CrystGroup:
    """Validate generators and close them up to a coset system."""
    gens = [g.reduced() for g in generators]
    dim = gram.dim
    for g in gens:
        if len(g.linear) != dim or any(len(r) != dim for r in g.linear) or g.dim != dim:
            raise ValidationError("generator shape does not match the dimension")
        o = ex.mat_order(g.linear)
        if o not in ALLOWED_ORDERS:
            raise ValidationError(f"linear part {list(map(list, g.linear))} has order {o}, "
                                  f"not one of {ALLOWED_ORDERS}")
    for g in gens:
        if not ex.gram_isometry_check(gram, g.linear):
            raise ValidationError(f"linear part {list(map(list, g.linear))} does not preserve "
                                  "the Gram form")
    if dim not in MAX_COSETS:
        raise ValidationError(f"dimension must be 2 or 3, got {dim}")
    cap = MAX_COSETS[dim]
    one = AffineIsometry.identity(dim)
    elems = [one]
    by_linear = {one.linear: one}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = (x * g).reduced()
            old = by_linear.get(y.linear)
            if old is None:
                by_linear[y.linear] = y
                elems.append(y)
                if len(elems) > cap:
                    raise ValidationError(f"point group is not finite within {cap} elements")
            elif old.translation != y.translation:
                raise ValidationError("linear part occurs with two translation parts mod Z^n; "
                                      "the translation lattice must be exactly Z^n")
        i += 1
    for c in elems:
        o = ex.mat_order(c.linear)
        if o not in ALLOWED_ORDERS:
            raise ValidationError(f"point group element of order {o}")
    rest = sorted(elems[1:], key=_coset_key)
    return CrystGroup(name=name, dim=dim, gram=gram, cosets=(one, *rest))


def parse_group(text: str) -> CrystGroup:
    """Parse and validate a group file (JSON)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed group file: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("group file must be an object")
    for key in ("name", "dim", "gram", "generators"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    name, dim = doc["name"], doc["dim"]
    if not isinstance(name, str):
        raise ParseError("name must be a string")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dim must be a positive integer")
    gram_rows = doc["gram"]
    if (not isinstance(gram_rows, list) or len(gram_rows) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in gram_rows)):
        raise ParseError("gram must be a dim x dim array")
    gram_q = [[ex.parse_rational(x) for x in r] for r in gram_rows]
    if not isinstance(doc["generators"], list):
        raise ParseError("generators must be a list")
    gens = []
    for k, g in enumerate(doc["generators"]):
        if not isinstance(g, dict) or "linear" not in g or "translation" not in g:
            raise ParseError(f"generator {k} needs 'linear' and 'translation'")
        lin, tr = g["linear"], g["translation"]
        if (not isinstance(lin, list) or len(lin) != dim
                or any(not isinstance(r, list) or len(r) != dim for r in lin)):
            raise ParseError(f"generator {k}: linear part must be dim x dim")
        if any(not isinstance(x, int) or isinstance(x, bool) for r in lin for x in r):
            raise ParseError(f"generator {k}: linear part must be integral")
        if not isinstance(tr, list) or len(tr) != dim:
            raise ParseError(f"generator {k}: translation must have length dim")
        gens.append(AffineIsometry(lin, [ex.parse_rational(x) for x in tr]))
    gram = ex.GramForm(gram_q)
    return build_group(name, gram, gens)


def catalog_names() -> list[str]:
    root = resources.files("whcryst") / "catalog"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def catalog_text(name: str) -> str:
    path = resources.files("whcryst") / "catalog" / f"{name}.json"
    if not path.is_file():
        raise ParseError(f"no catalog group named {name!r}; try one of {catalog_names()}")
    return path.read_text()


def load_group(ref: str) -> CrystGroup:
    """Load ``catalog:NAME`` or a path to a group file."""
    if ref.startswith("catalog:"):
        return parse_group(catalog_text(ref[len("catalog:"):]))
    try:
        text = Path(ref).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {ref}: {e}") from None
    return parse_group(text)


# ---------------------------------------------------------------- operations

def point_group(G: CrystGroup) -> tuple[FiniteGroupTable, list]:
    """Multiplication table of the point group and the matrix of each element."""
    mats = G.point_group_matrices()
    return table_from_elements(mats, ex.mat_mul), mats


def elements_in_ball(G: CrystGroup, R: int) -> list[AffineIsometry]:
    """All (J, a_J + z) with max-norm of z at most R."""
    out = []
    rng = range(-R, R + 1)
    for c in G.cosets:
        for z in itertools.product(rng, repeat=G.dim):
            out.append(c.shifted(z))
    return out


def product_with_Z(G: CrystGroup) -> CrystGroup:
    """G x Z acting on R^2 x R."""
    if G.dim != 2:
        raise DimensionError(f"product with Z needs a 2-dimensional group, got dim {G.dim}")
    cosets = [AffineIsometry(ex.direct_sum(c.linear, ((1,),)), tuple(c.translation) + (Fraction(0),))
              for c in G.cosets]
    cosets = [cosets[0], *sorted(cosets[1:], key=_coset_key)]
    return CrystGroup(name=f"{G.name}xZ", dim=3, gram=G.gram.extend_by_one(), cosets=cosets)
