"""Brute-force reference computations used to check the package.

Nothing here calls the package's solvers. Groups are read only for their raw
coset data, and everything else (stabilizers, classes, automorphisms, kernels)
is recomputed by enumeration, with sympy for the linear algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import sympy

# ---------------------------------------------------------------- affine maps as raw tuples


def _mv(J, v):
    return tuple(sum(Fraction(a) * b for a, b in zip(row, v)) for row in J)


def _mm(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _apply(g, p):
    J, t = g
    return tuple(x + y for x, y in zip(_mv(J, p), t))


def _compose(g, h):
    return (_mm(g[0], h[0]), tuple(x + y for x, y in zip(_mv(g[0], h[1]), g[1])))


def _inverse(g):
    M = sympy.Matrix(g[0]).inv()
    Ji = tuple(tuple(int(M[i, j]) for j in range(M.cols)) for i in range(M.rows))
    return (Ji, tuple(-x for x in _mv(Ji, g[1])))


def ball(G, R):
    out = []
    for c in G.cosets:
        for z in itertools.product(range(-R, R + 1), repeat=G.dim):
            out.append((c.linear, tuple(Fraction(a) + b for a, b in zip(c.translation, z))))
    return out


def grid(n, d):
    return [tuple(Fraction(k, d) for k in ks) for ks in itertools.product(range(d), repeat=n)]


def _identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _linear_order(J):
    n = len(J)
    I = _identity_matrix(n)
    P = J
    for k in range(1, 13):
        if P == I:
            return k
        P = _mm(P, J)
    return 0


# ---------------------------------------------------------------- type by order statistics

# (order, sorted element-order histogram) -> type name; within the allowed list this
# data separates every type
_HIST = {}


def _register(name, order, hist):
    _HIST[(order, tuple(sorted(hist.items())))] = name


_register("Trivial", 1, {1: 1})
_register("C2", 2, {1: 1, 2: 1})
_register("C3", 3, {1: 1, 3: 2})
_register("C4", 4, {1: 1, 2: 1, 4: 2})
_register("D2", 4, {1: 1, 2: 3})
_register("C6", 6, {1: 1, 2: 1, 3: 2, 6: 2})
_register("D3", 6, {1: 1, 2: 3, 3: 2})
_register("D4", 8, {1: 1, 2: 5, 4: 2})
_register("C4xC2", 8, {1: 1, 2: 3, 4: 4})
_register("D2xC2", 8, {1: 1, 2: 7})
_register("D6", 12, {1: 1, 2: 7, 3: 2, 6: 2})
_register("C6xC2", 12, {1: 1, 2: 3, 3: 2, 6: 6})
_register("A4", 12, {1: 1, 2: 3, 3: 8})
_register("D4xC2", 16, {1: 1, 2: 11, 4: 4})
_register("D6xC2", 24, {1: 1, 2: 15, 3: 2, 6: 6})
_register("S4", 24, {1: 1, 2: 9, 3: 8, 4: 6})
_register("A4xC2", 24, {1: 1, 2: 7, 3: 8, 6: 8})
_register("S4xC2", 48, {1: 1, 2: 19, 3: 8, 4: 12, 6: 8})


def type_from_linear_parts(mats):
    hist = {}
    for J in mats:
        k = _linear_order(J)
        hist[k] = hist.get(k, 0) + 1
    return _HIST.get((len(mats), tuple(sorted(hist.items()))), "UNLISTED")


# ---------------------------------------------------------------- maximal finite subgroups


def _mod1(p):
    return tuple(x - (x.numerator // x.denominator) for x in p)


def _orbit_rep(G, p):
    return min(_mod1(_apply((c.linear, c.translation), p)) for c in G.cosets)


def finite_classes_oracle(G, denom, radius):
    """Types of maximal finite subgroups up to conjugacy, found on a rational grid.

    A candidate is the set of ball elements fixing a grid point; maximal ones are
    those not strictly inside another candidate. A maximal H is keyed by the lattice
    orbits of the grid points it fixes, and conjugate subgroups share that key.
    """
    elems = ball(G, radius)
    stabs = {}
    for p in grid(G.dim, denom):
        H = frozenset(g for g in elems if _apply(g, p) == p)
        if len(H) > 1:
            stabs[p] = H
    groups = set(stabs.values())
    maximal = [H for H in groups if not any(H < K for K in groups)]
    keys = {}
    for H in maximal:
        key = frozenset(_orbit_rep(G, p) for p, K in stabs.items() if K == H)
        keys[key] = H
    return sorted(type_from_linear_parts(sorted({g[0] for g in H})) for H in keys.values())


def fixed_point_orbits(G, denom, radius):
    """Orbits of grid points whose stabilizer is maximal and fixes only that point."""
    elems = ball(G, radius)
    pts = grid(G.dim, denom)
    stabs = {p: frozenset(g for g in elems if _apply(g, p) == p) for p in pts}
    out = []
    seen = set()
    for p in pts:
        H = stabs[p]
        if len(H) == 1 or p in seen:
            continue
        if any(H < K for K in stabs.values()):
            continue
        lin = [g[0] for g in H]
        if fixed_subspace_dim(lin) != 0:
            continue
        orbit = {tuple(x - (x.numerator // x.denominator) for x in _apply(g, p)) for g in elems}
        seen |= orbit
        out.append((p, type_from_linear_parts(sorted(set(lin)))))
    return out


# ---------------------------------------------------------------- linear algebra via sympy


def _kernel(rows, n):
    if not rows:
        return [sympy.Matrix([int(i == j) for j in range(n)]) for i in range(n)]
    return sympy.Matrix(rows).nullspace()


def fixed_subspace_dim(mats):
    n = len(mats[0])
    rows = []
    for J in mats:
        for i in range(n):
            rows.append([J[i][j] - int(i == j) for j in range(n)])
    return len(_kernel(rows, n))


def _span_key(vectors, n):
    if not vectors:
        return ()
    M = sympy.Matrix.hstack(*vectors).T.rref()[0]
    return tuple(tuple(M.row(i)) for i in range(M.rows) if any(M.row(i)))


def sign_pattern_oracle(mats):
    """E0 and the set of nonzero eigen-subspaces {v : f v = s_f v for all f}, some s_f = -1.

    Depth-first over sign assignments to every element, pruning as soon as the
    common kernel is zero.
    """
    mats = [tuple(tuple(r) for r in J) for J in mats]
    n = len(mats[0])
    found = {}

    def rows_for(J, s):
        return [[J[i][j] - s * int(i == j) for j in range(n)] for i in range(n)]

    def dfs(k, rows, signs):
        basis = _kernel(rows, n)
        if not basis:
            return
        if k == len(mats):
            found[tuple(signs)] = _span_key(basis, n)
            return
        for s in (1, -1):
            dfs(k + 1, rows + rows_for(mats[k], s), signs + [s])

    dfs(0, [], [])
    plus = tuple(1 for _ in mats)
    E0 = found.get(plus, ())
    E1 = {v for s, v in found.items() if s != plus}
    return E0, E1


# ---------------------------------------------------------------- line stabilizers by enumeration


def _along(v, h):
    k = next(i for i, x in enumerate(h) if x != 0)
    c = Fraction(v[k]) / h[k]
    return c if all(Fraction(a) == c * b for a, b in zip(v, h)) else None


def line_oracle(G, base, h, radius=3):
    """Row data of the stabilizer of base + R h computed from ball elements.

    Returns ("Amalgam", F, (A, B) sorted) or ("Semidirect", F, phi).
    """
    n = G.dim
    h = tuple(h)
    acts = []
    for g in ball(G, radius):
        Jh = _mv(g[0], h)
        if Jh == tuple(Fraction(x) for x in h):
            eps = 1
        elif Jh == tuple(-Fraction(x) for x in h):
            eps = -1
        else:
            continue
        s = _along(tuple(a - b for a, b in zip(_apply(g, base), base)), h)
        if s is not None:
            acts.append((g, eps, s))
    fiber = [g for g, e, s in acts if e == 1 and s == 0]
    plus = [s for g, e, s in acts if e == 1 and s != 0]
    t0 = Fraction(0)
    for s in plus:
        t0 = Fraction(gcd(t0.numerator * s.denominator, s.numerator * t0.denominator),
                      t0.denominator * s.denominator)
    Fname = type_from_linear_parts(sorted({g[0] for g in fiber}))
    refl = [(g, s) for g, e, s in acts if e == -1]
    if refl:
        c = min((s for g, s in refl), key=abs)
        verts = []
        shifts = {s for g, s in refl}
        # c + t0 and c - t0 are conjugate vertices; use whichever the ball reaches
        for at in (c, c + t0 if c + t0 in shifts else c - t0):
            V = set(g[0] for g in fiber) | {g[0] for g, s in refl if s == at}
            verts.append(type_from_linear_parts(sorted(V)))
        return ("Amalgam", Fname, tuple(sorted(verts)))
    g0 = next(g for g, e, s in acts if e == 1 and s == t0)
    g0i = _inverse(g0)
    F = {g[0] for g in fiber}

    def aut(J):
        return _mm(_mm(g0i[0], J), g0[0])

    def is_inner(a):
        return any(all(a[J] == _mm(_mm(_inverse((x, (0,) * n))[0], J), x) for J in F) for x in F)

    a = {J: aut(J) for J in F}
    power = dict(a)
    for k in range(1, 7):
        if is_inner(power):
            phi = {1: "Trivial", 2: "Inv", 3: "Order3"}.get(k, f"order{k}")
            return ("Semidirect", Fname, phi)
        power = {J: aut(power[J]) for J in F}
    return ("Semidirect", Fname, "none")


# ---------------------------------------------------------------- finite groups as permutations


def _perm_mul(a, b):
    """(a b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def perm_closure(gens):
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    todo = [e]
    while todo:
        x = todo.pop()
        for g in gens:
            y = _perm_mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return sorted(seen)


def _cycle(n, k=None):
    k = n if k is None else k
    return tuple((i + 1) % k if i < k else i for i in range(n))


def _with_swap(p, extra):
    """p extended by ``extra`` fixed points."""
    n = len(p)
    return tuple(p) + tuple(range(n, n + extra))


def _swap_last(n):
    return tuple(list(range(n - 2)) + [n - 1, n - 2])


def _dihedral_gens(k):
    if k == 2:
        return [(1, 0, 3, 2), (2, 3, 0, 1)]
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    return [rot, ref]


def perm_group(name):
    """An independent concrete model of each listed type."""
    if name == "Trivial":
        return perm_closure([(0,)])
    base, _, c2 = name.partition("x")
    if base.startswith("C"):
        k = int(base[1:])
        gens = [_cycle(k)] if k > 1 else [(0,)]
    elif base.startswith("D"):
        gens = _dihedral_gens(int(base[1:]))
    elif base == "A4":
        gens = [(1, 2, 0, 3), (1, 0, 3, 2)]
    elif base == "S4":
        gens = [(1, 2, 3, 0), (1, 0, 2, 3)]
    else:
        raise ValueError(name)
    if c2:
        n = len(gens[0])
        gens = [_with_swap(g, 2) for g in gens] + [_swap_last(n + 2)]
    return perm_closure(gens)


def _order(g):
    e = tuple(range(len(g)))
    k, x = 1, g
    while x != e:
        x = _perm_mul(x, g)
        k += 1
    return k


def _inv(g):
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def rq_oracle(name):
    """(r, q): classes of {g, g^-1} pairs and classes of cyclic subgroups."""
    els = perm_group(name)
    pairs = set()
    for g in els:
        pairs.add(frozenset(_perm_mul(_perm_mul(x, y), _inv(x)) for x in els for y in (g, _inv(g))))
    cyc = set()
    for g in els:
        sub = frozenset(perm_closure([g]))
        cyc.add(frozenset(frozenset(_perm_mul(_perm_mul(x, s), _inv(x)) for s in sub) for x in els))
    return len(pairs), len(cyc)


def automorphisms_oracle(name):
    """All automorphisms by backtracking over images, element by element."""
    els = perm_group(name)
    idx = {g: i for i, g in enumerate(els)}
    n = len(els)
    mul = [[idx[_perm_mul(a, b)] for b in els] for a in els]
    order = [_order(g) for g in els]
    out = []

    def bt(img, used):
        k = len(img)
        if k == n:
            out.append(tuple(img))
            return
        for c in range(n):
            if c in used or order[c] != order[k]:
                continue
            ok = True
            img.append(c)
            for a in range(k + 1):
                b = mul[a][k]
                if b <= k and mul[img[a]][img[k]] != img[b]:
                    ok = False
                    break
                b = mul[k][a]
                if b <= k and mul[img[k]][img[a]] != img[b]:
                    ok = False
                    break
            if ok:
                bt(img, used | {c})
            img.pop()

    bt([], frozenset())
    return els, mul, out


def out_order_oracle(name):
    els, mul, auts = automorphisms_oracle(name)
    n = len(els)
    e = els.index(tuple(range(len(els[0]))))
    inv = [next(b for b in range(n) if mul[a][b] == e) for a in range(n)]
    inner = {tuple(mul[mul[g][x]][inv[g]] for x in range(n)) for g in range(n)}
    return len(auts) // len(inner), auts, inner
