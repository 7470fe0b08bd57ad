"""Exact rational linear algebra in small dimension.

Scalars are :class:`fractions.Fraction`, vectors are tuples of Fractions,
matrices are tuples of row tuples. Integer matrices are the same structure with
``int`` entries. Nothing in here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError, ZeroVector

Rational = Fraction
Vector = tuple
Matrix = tuple
IntMatrix = tuple

MAX_ORDER_SEARCH = 12


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Infinite"


INFINITE = _Infinite()


# ---------------------------------------------------------------- scalars

def parse_rational(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    >>> parse_rational("-3/6")
    Fraction(-1, 2)
    """
    if isinstance(s, bool):
        raise ParseError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise ParseError(f"rationals must be strings or ints, got {s!r}")
    txt = s.strip()
    num, sep, den = txt.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"not a rational: {s!r}") from None
    if d == 0:
        raise ParseError(f"zero denominator: {s!r}")
    return Fraction(n, d)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_gcd(values: Iterable) -> Fraction:
    """Generator of the subgroup of Q spanned by ``values`` (0 if all zero)."""
    g = Fraction(0)
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            continue
        den = g.denominator * v.denominator // gcd(g.denominator, v.denominator)
        g = Fraction(gcd(int(g * den), int(v * den)), den)
    return g


# ---------------------------------------------------------------- vectors

def vec(xs: Iterable) -> Vector:
    return tuple(Fraction(x) for x in xs)


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def mod1(v: Sequence) -> Vector:
    """Reduce each coordinate into [0, 1)."""
    return tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in v)


def floor_vec(v: Sequence) -> tuple:
    return tuple(Fraction(x).numerator // Fraction(x).denominator for x in v)


def primitive(v: Sequence, positive_first: bool = True) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ZeroVector("zero vector has no primitive multiple")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if positive_first:
        first = next(x for x in ints if x != 0)
        if first < 0:
            ints = [-x for x in ints]
    return tuple(ints)


# ---------------------------------------------------------------- matrices

def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A: Matrix, v: Sequence) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def scale_matrix(c, A: Matrix) -> Matrix:
    return tuple(tuple(c * a for a in r) for r in A)


def neg(A: Matrix) -> Matrix:
    return tuple(tuple(-a for a in r) for r in A)


def direct_sum(A: Matrix, B: Matrix) -> Matrix:
    n, m = len(A), len(B)
    rows = [tuple(A[i]) + (0,) * m for i in range(n)]
    rows += [(0,) * n + tuple(B[i]) for i in range(m)]
    return tuple(rows)


def is_int_matrix(A: Matrix) -> bool:
    return all(Fraction(x).denominator == 1 for r in A for x in r)


def to_int_matrix(A: Matrix) -> IntMatrix:
    if not is_int_matrix(A):
        raise ValueError("matrix has non-integral entries")
    return tuple(tuple(int(Fraction(x)) for x in r) for r in A)


def rref(A: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    R = [[Fraction(x) for x in r] for r in A]
    pivots: list[int] = []
    if not R:
        return R, pivots
    ncols = len(R[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        p = R[r][c]
        R[r] = [x / p for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def nullspace(A: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : A x = 0} over Q, one vector per free column."""
    if not A:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    n = len(A[0])
    R, pivots = rref(A)
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        x = [Fraction(0)] * n
        x[free] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[free]
        basis.append(tuple(x))
    return basis


def solve_affine(A: Matrix, b: Sequence, ncols: int | None = None):
    """Solve A x = b over Q.

    Returns ``(x0, kernel_basis)`` or ``None`` when inconsistent.
    """
    if not A:
        n = ncols or 0
        return zero_vec(n), nullspace((), n)
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return tuple(x), nullspace(A)


def det(A: Matrix) -> Fraction:
    M = [[Fraction(x) for x in r] for r in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(A[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(R[i][n:]) for i in range(n))


def int_inverse(A: IntMatrix) -> IntMatrix:
    return to_int_matrix(inverse(A))


def mat_order(M: IntMatrix):
    """Multiplicative order of ``M``, or :data:`INFINITE`.

    >>> mat_order(((0, -1), (1, -1)))
    3
    """
    n = len(M)
    I = identity(n)
    P = M
    for k in range(1, MAX_ORDER_SEARCH + 1):
        if P == I:
            return k
        P = mat_mul(P, M)
    return INFINITE


# ---------------------------------------------------------------- Gram forms

@dataclass(frozen=True)
class GramForm:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValidationError("Gram form is not square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
            raise ValidationError("Gram form is not symmetric")
        for k in range(1, n + 1):
            if det(tuple(r[:k] for r in rows[:k])) <= 0:
                raise ValidationError("Gram form is not positive definite")

    @classmethod
    def standard(cls, n: int) -> "GramForm":
        return cls(identity(n))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        return dot(u, mat_vec(self.entries, v))

    def restrict(self, basis: Sequence[Sequence]) -> "GramForm":
        """Gram form of the sublattice spanned by ``basis``."""
        return GramForm(tuple(tuple(self.inner(u, v) for v in basis) for u in basis))

    def project_off(self, v: Sequence, h: Sequence) -> Vector:
        """G-orthogonal projection of ``v`` onto the complement of ``h``."""
        c = self.inner(v, h) / self.inner(h, h)
        return sub(vec(v), scale(c, h))

    def extend_by_one(self) -> "GramForm":
        n = self.dim
        rows = [tuple(r) + (Fraction(0),) for r in self.entries]
        rows.append((Fraction(0),) * n + (Fraction(1),))
        return GramForm(tuple(rows))


def gram_isometry_check(G: GramForm, M: Matrix) -> bool:
    """True iff M^T G M = G exactly."""
    if len(M) != G.dim:
        return False
    return mat_mul(mat_mul(transpose(M), G.entries), M) == G.entries


def orthogonal_complement(G: GramForm, v: Sequence) -> list[Vector]:
    """Primitive integer basis (as Fractions) of the G-orthogonal complement of v.

    >>> hexg = GramForm(((1, Fraction(-1, 2)), (Fraction(-1, 2), 1)))
    >>> orthogonal_complement(hexg, (1, 0))
    [(Fraction(1, 1), Fraction(2, 1))]
    """
    v = vec(v)
    if is_zero(v):
        raise ZeroVector("orthogonal complement of the zero vector")
    row = mat_vec(transpose(G.entries), v)
    return [vec(primitive(w)) for w in nullspace((row,))]


# ---------------------------------------------------------------- integer lattices

def _scale_rows_to_int(rows: Sequence[Sequence], rhs: Sequence | None = None):
    out, out_rhs = [], []
    for i, r in enumerate(rows):
        vals = [Fraction(x) for x in r]
        if rhs is not None:
            vals.append(Fraction(rhs[i]))
        den = 1
        for x in vals:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in vals]
        if rhs is not None:
            out_rhs.append(ints.pop())
        out.append(ints)
    return out, out_rhs


def _echelon(rows: list[list[int]], npiv: int) -> tuple[list[list[int]], list[int]]:
    """Unimodular row reduction on the first ``npiv`` columns.

    Returns the reduced rows and the pivot columns; rows past the pivots are
    zero on the first ``npiv`` columns.
    """
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(npiv):
        if r >= len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[k] = rows[k], rows[r]
            clean = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        clean = False
            if clean:
                break
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def lattice_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    """Echelon basis of the Z-span of finitely many rational vectors."""
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return []
    n = len(vectors[0])
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vectors]
    red, pivots = _echelon(rows, n)
    return [tuple(Fraction(x, den) for x in red[i]) for i in range(len(pivots))]


def integer_kernel(A: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Z-basis of {z in Z^n : A z = 0}."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    Ai, _ = _scale_rows_to_int(A)
    m = len(Ai)
    rows = [[Ai[i][j] for i in range(m)] + [int(j == k) for k in range(n)] for j in range(n)]
    red, pivots = _echelon(rows, m)
    return [tuple(red[i][m:]) for i in range(len(pivots), n)]


def solve_integer(A: Sequence[Sequence], b: Sequence, ncols: int | None = None):
    """Solve A z = b for z in Z^n (A, b rational).

    Returns ``(z0, kernel_basis)`` or ``None`` if no integral solution exists.
    """
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return (0,) * n, integer_kernel((), n)
    Ai, bi = _scale_rows_to_int(A, b)
    m = len(Ai)
    rows = [[Ai[i][j] for i in range(m)] + [int(j == k) for k in range(n)] for j in range(n)]
    red, pivots = _echelon(rows, m)
    resid = list(bi)
    z = [0] * n
    for i, c in enumerate(pivots):
        if any(resid[k] != 0 for k in range(c)):
            return None
        q, rem = divmod(resid[c], red[i][c])
        if rem:
            return None
        resid = [x - q * y for x, y in zip(resid, red[i][:m])]
        z = [x + q * y for x, y in zip(z, red[i][m:])]
    if any(resid):
        return None
    kernel = [tuple(red[i][m:]) for i in range(len(pivots), n)]
    return tuple(z), kernel


def coordinates(basis: Sequence[Sequence], v: Sequence) -> Vector:
    """Coordinates of v in a linearly independent (possibly non-square) basis."""
    cols = transpose(tuple(vec(b) for b in basis))
    sol = solve_affine(cols, vec(v))
    if sol is None:
        raise ValueError("vector is not in the span of the basis")
    return sol[0]
