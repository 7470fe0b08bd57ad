"""Finite groups given by multiplication tables.

Elements are the integers ``0 .. order-1`` with ``0`` the identity. The
routines here are brute force; every group we meet has order at most 48.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

from .errors import NotInCatalog, OrderTooLarge, ValidationError

MAX_ORDER = 48


class FiniteGroupTable:
    """A finite group as a Cayley table. ``table[a][b]`` is the index of ab."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 check: bool = True):
        self.table = tuple(tuple(r) for r in table)
        self.order = len(self.table)
        self.labels = tuple(labels) if labels is not None else None
        if check:
            self._validate()
        self._inv = tuple(next(b for b in range(self.order) if self.table[a][b] == 0)
                          for a in range(self.order))

    def _validate(self) -> None:
        n = self.order
        full = set(range(n))
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise ValidationError("element 0 is not the identity")
            if set(self.table[a]) != full or {self.table[b][a] for b in range(n)} != full:
                raise ValidationError("table is not a Latin square")
        if n <= MAX_ORDER:
            t = self.table
            for a in range(n):
                ta = t[a]
                for b in range(n):
                    tab = t[ta[b]]
                    tb = t[b]
                    for c in range(n):
                        if tab[c] != ta[tb[c]]:
                            raise ValidationError("table is not associative")

    def __repr__(self) -> str:
        return f"FiniteGroupTable(order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.table[self.table[g][x]][self._inv[g]]

    def elem_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k):
            x = self.table[x][a]
        return x

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def generated(self, gens: Iterable[int]) -> frozenset:
        gens = list(gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def cyclic_subgroup(self, a: int) -> frozenset:
        return self.generated([a])

    def order_histogram(self) -> tuple:
        hist: dict[int, int] = {}
        for a in range(self.order):
            k = self.elem_order(a)
            hist[k] = hist.get(k, 0) + 1
        return tuple(sorted(hist.items()))

    def subgroup_table(self, elements: Iterable[int]) -> tuple["FiniteGroupTable", list[int]]:
        """Table of a subgroup, with the list mapping new indices to old ones."""
        elems = sorted(set(elements))
        if not elems or elems[0] != 0:
            raise ValueError("subgroup must contain the identity")
        pos = {e: i for i, e in enumerate(elems)}
        tab = [[pos[self.table[a][b]] for b in elems] for a in elems]
        return FiniteGroupTable(tab, check=False), elems


# ---------------------------------------------------------------- constructors

def closure(gens: Iterable[Hashable], mul: Callable, identity: Hashable,
            limit: int | None = None) -> list:
    """All products of ``gens``, identity first, in breadth-first order."""
    gens = list(gens)
    elems = [identity]
    seen = {identity}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
                if limit is not None and len(elems) > limit:
                    raise OrderTooLarge(f"closure exceeds {limit} elements")
        i += 1
    return elems


def table_from_elements(elems: Sequence[Hashable], mul: Callable,
                        labels: Sequence[str] | None = None) -> FiniteGroupTable:
    """Cayley table of a finite set of elements closed under ``mul``.

    ``elems[0]`` must be the identity.
    """
    pos = {e: i for i, e in enumerate(elems)}
    tab = [[pos[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroupTable(tab, labels=labels, check=False)


def cyclic(n: int) -> FiniteGroupTable:
    return FiniteGroupTable([[(a + b) % n for b in range(n)] for a in range(n)], check=False)


def dihedral(n: int) -> FiniteGroupTable:
    """Dihedral group of order 2n; elements (k, s) act as x -> (-1)^s x + k on Z/n."""
    elems = [(k, s) for s in (0, 1) for k in range(n)]

    def mul(a, b):
        k1, s1 = a
        k2, s2 = b
        return ((k1 + (-k2 if s1 else k2)) % n, s1 ^ s2)

    return table_from_elements(elems, mul)


def direct_product(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    elems = [(a, b) for a in range(G.order) for b in range(H.order)]
    return table_from_elements(elems, lambda x, y: (G.mul(x[0], y[0]), H.mul(x[1], y[1])))


def permutation_group(gens: Iterable[Sequence[int]]) -> FiniteGroupTable:
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    ident = tuple(range(n))

    def mul(p, q):  # apply q first, then p
        return tuple(p[q[i]] for i in range(n))

    return table_from_elements(closure(gens, mul, ident), mul)


def alternating4() -> FiniteGroupTable:
    return permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)])


def symmetric4() -> FiniteGroupTable:
    return permutation_group([(1, 2, 3, 0), (1, 0, 2, 3)])


# ---------------------------------------------------------------- class counting

def conjugacy_classes(G: FiniteGroupTable) -> list[frozenset]:
    seen: set[int] = set()
    classes = []
    for x in range(G.order):
        if x in seen:
            continue
        cls = frozenset(G.conj(g, x) for g in range(G.order))
        seen |= cls
        classes.append(cls)
    return classes


def inverse_pair_classes(G: FiniteGroupTable) -> int:
    """Number of conjugacy classes of the sets {g, g^-1}."""
    classes = conjugacy_classes(G)
    where = {x: i for i, c in enumerate(classes) for x in c}
    merged = set()
    for i, c in enumerate(classes):
        j = where[G.inv(next(iter(c)))]
        merged.add((min(i, j), max(i, j)))
    return len(merged)


def cyclic_subgroup_classes(G: FiniteGroupTable) -> int:
    """Number of conjugacy classes of cyclic subgroups, trivial one included."""
    subs = {G.cyclic_subgroup(a) for a in range(G.order)}
    seen: set[frozenset] = set()
    count = 0
    for S in sorted(subs, key=lambda s: sorted(s)):
        if S in seen:
            continue
        count += 1
        for g in range(G.order):
            seen.add(frozenset(G.conj(g, x) for x in S))
    return count


# ---------------------------------------------------------------- homomorphisms

def small_generating_set(G: FiniteGroupTable) -> tuple[int, ...]:
    """A generating set of minimum size, lexicographically first among those."""
    if G.order == 1:
        return ()
    elems = range(1, G.order)
    for k in range(1, G.order):
        for combo in itertools.combinations(elems, k):
            if len(G.generated(combo)) == G.order:
                return combo
    raise AssertionError("unreachable")


def _extend(G: FiniteGroupTable, gens: Sequence[int], H: FiniteGroupTable,
            images: Sequence[int]) -> tuple[int, ...] | None:
    """Extend gens -> images to a homomorphism G -> H, or None if impossible."""
    phi = [-1] * G.order
    phi[0] = 0
    queue = [0]
    for x in queue:
        px = phi[x]
        for g, h in zip(gens, images):
            y = G.table[x][g]
            img = H.table[px][h]
            if phi[y] == -1:
                phi[y] = img
                queue.append(y)
            elif phi[y] != img:
                return None
    return tuple(phi)


def find_isomorphism(G: FiniteGroupTable, H: FiniteGroupTable) -> tuple[int, ...] | None:
    if G.order != H.order or G.order_histogram() != H.order_histogram():
        return None
    gens = small_generating_set(G)
    by_order: dict[int, list[int]] = {}
    for b in range(H.order):
        by_order.setdefault(H.elem_order(b), []).append(b)
    pools = [by_order.get(G.elem_order(g), []) for g in gens]
    for images in itertools.product(*pools):
        phi = _extend(G, gens, H, images)
        if phi is not None and len(set(phi)) == G.order:
            return phi
    return None


def is_isomorphic(G: FiniteGroupTable, H: FiniteGroupTable) -> bool:
    return find_isomorphism(G, H) is not None


def automorphisms(G: FiniteGroupTable) -> list[tuple[int, ...]]:
    """Every automorphism, as the tuple of images of 0..order-1."""
    if G.order > MAX_ORDER:
        raise OrderTooLarge(f"order {G.order} exceeds {MAX_ORDER}")
    gens = small_generating_set(G)
    pools = [[b for b in range(G.order) if G.elem_order(b) == G.elem_order(g)] for g in gens]
    auts = []
    for images in itertools.product(*pools):
        phi = _extend(G, gens, G, images)
        if phi is not None and len(set(phi)) == G.order:
            auts.append(phi)
    return sorted(auts)


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """a after b."""
    return tuple(a[x] for x in b)


def inner_automorphism(G: FiniteGroupTable, g: int) -> tuple[int, ...]:
    return tuple(G.conj(g, x) for x in range(G.order))


@dataclass
class OutGroup:
    """Aut(G)/Inn(G) together with the data to locate an automorphism in it."""

    base: FiniteGroupTable
    table: FiniteGroupTable
    reps: list          # lexicographically least automorphism of each outer class
    inner: frozenset

    def index_of(self, aut: Sequence[int]) -> int:
        key = min(compose(aut, c) for c in self.inner)
        return self._pos[key]

    def __post_init__(self):
        self._pos = {r: i for i, r in enumerate(self.reps)}

    @property
    def order(self) -> int:
        return self.table.order

    def classes(self) -> list[frozenset]:
        return conjugacy_classes(self.table)


def out_group(G: FiniteGroupTable) -> OutGroup:
    auts = automorphisms(G)
    inner = frozenset(inner_automorphism(G, g) for g in range(G.order))
    reps = sorted({min(compose(a, c) for c in inner) for a in auts})
    ident = tuple(range(G.order))
    # identity coset first
    reps.remove(ident)
    reps.insert(0, ident)
    pos = {r: i for i, r in enumerate(reps)}

    def canon(a):
        return min(compose(a, c) for c in inner)

    tab = [[pos[canon(compose(a, b))] for b in reps] for a in reps]
    return OutGroup(base=G, table=FiniteGroupTable(tab, check=False), reps=reps, inner=inner)


# ---------------------------------------------------------------- catalog

class FiniteType(str, Enum):
    """Isomorphism types of finite subgroups of 3-dimensional crystallographic groups."""

    Trivial = "Trivial"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C6 = "C6"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"
    D6 = "D6"
    C4xC2 = "C4xC2"
    C6xC2 = "C6xC2"
    D2xC2 = "D2xC2"
    D3xC2 = "D3xC2"
    D4xC2 = "D4xC2"
    D6xC2 = "D6xC2"
    A4 = "A4"
    S4 = "S4"
    A4xC2 = "A4xC2"
    S4xC2 = "S4xC2"

    def __str__(self) -> str:
        return self.value

    @property
    def canonical(self) -> "FiniteType":
        return FiniteType(ALIASES.get(self.value, self.value))


# names that describe the same abstract group as another tag
ALIASES = {"D3xC2": "D6", "Klein": "D2", "C2xC2": "D2", "C3xC2": "C6"}

CANONICAL_TYPES = tuple(t for t in FiniteType if t.value not in ALIASES)
NONTRIVIAL_TYPES = tuple(t for t in FiniteType if t is not FiniteType.Trivial)


def parse_type(name: str) -> FiniteType:
    """Tag for a name, applying the alias table."""
    name = ALIASES.get(name, name)
    try:
        return FiniteType(name)
    except ValueError:
        raise NotInCatalog(f"unknown finite type {name!r}") from None


@lru_cache(maxsize=None)
def catalog_group(t: FiniteType) -> FiniteGroupTable:
    """A concrete multiplication table for a catalog tag (aliases kept as built)."""
    t = FiniteType(t)
    v = t.value
    if v == "Trivial":
        return cyclic(1)
    if v in ("A4", "S4"):
        return alternating4() if v == "A4" else symmetric4()
    base, _, extra = v.partition("x")
    if base in ("A4", "S4"):
        G = alternating4() if base == "A4" else symmetric4()
    elif base[0] == "C":
        G = cyclic(int(base[1:]))
    else:
        G = dihedral(int(base[1:]))
    if extra:
        G = direct_product(G, cyclic(int(extra[1:])))
    return G


def _signature(G: FiniteGroupTable) -> tuple:
    return (G.order, G.is_abelian(), G.order_histogram())


@lru_cache(maxsize=None)
def _catalog_signatures() -> dict:
    sigs: dict = {}
    for t in CANONICAL_TYPES:
        sigs.setdefault(_signature(catalog_group(t)), []).append(t)
    return sigs


def identify_type(G: FiniteGroupTable) -> FiniteType:
    """Canonical catalog tag of G, confirmed by an explicit isomorphism."""
    if G.order > MAX_ORDER:
        raise NotInCatalog(f"order {G.order} exceeds {MAX_ORDER}")
    for t in _catalog_signatures().get(_signature(G), []):
        if is_isomorphic(G, catalog_group(t)):
            return t
    raise NotInCatalog(f"group of order {G.order} with element orders {G.order_histogram()} "
                       "is not a finite subgroup of a 3-dimensional crystallographic group")
