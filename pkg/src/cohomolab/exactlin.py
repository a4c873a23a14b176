"""Exact rational linear algebra: ranks, kernels, images, subspace arithmetic.

All computations are over Q with arbitrary-precision rationals
(``fractions.Fraction``).  Row reduction uses fraction-free Bareiss
elimination on integer-scaled rows to keep intermediate coefficients small;
the final reduced row echelon form (RREF) is exact.

Conventions
-----------
* A ``Matrix`` with shape (r, c) represents a linear map Q^c -> Q^r acting on
  column vectors; ``kernel`` is the right null space, ``image`` the column
  span.
* A ``Subspace`` of Q^n is stored as the RREF of a spanning set, one vector
  per row.  Two equal subspaces therefore have identical representations, so
  ``==`` on Subspace is genuine subspace equality.
"""

from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch

Q0 = Fraction(0)
Q1 = Fraction(1)


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rs = tuple(tuple(_frac(x) for x in row) for row in rows)
        self.rows = rs
        self.nrows = len(rs)
        if rs:
            self.ncols = len(rs[0])
            if any(len(r) != self.ncols for r in rs):
                raise DimensionMismatch("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise DimensionMismatch("ncols mismatch")
        else:
            if ncols is None:
                raise DimensionMismatch("empty matrix needs explicit ncols")
            self.ncols = ncols

    @classmethod
    def zeros(cls, r, c):
        return cls([[Q0] * c for _ in range(r)], ncols=c)

    @classmethod
    def identity(cls, n):
        return cls([[Q1 if i == j else Q0 for j in range(n)] for i in range(n)], ncols=n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self):
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)], ncols=self.nrows)

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("add: shape mismatch")
        return Matrix([[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], ncols=self.ncols)

    def scale(self, c):
        c = _frac(c)
        return Matrix([[c * a for a in r] for r in self.rows], ncols=self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch("mul: inner dimension mismatch")
            ot = other.transpose().rows
            return Matrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                           for row in self.rows], ncols=other.ncols)
        return self.scale(other)

    def mulvec(self, v):
        if len(v) != self.ncols:
            raise DimensionMismatch("mulvec: length mismatch")
        return tuple(sum(a * _frac(b) for a, b in zip(row, v)) for row in self.rows)

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ncols == other.ncols
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return "Matrix(%d x %d)" % (self.nrows, self.ncols)


def vstack(mats):
    mats = [m for m in mats]
    if not mats:
        raise DimensionMismatch("vstack of nothing")
    c = mats[0].ncols
    rows = []
    for m in mats:
        if m.ncols != c:
            raise DimensionMismatch("vstack: column mismatch")
        rows.extend(m.rows)
    return Matrix(rows, ncols=c)


def hstack(mats):
    mats = [m for m in mats]
    r = mats[0].nrows
    rows = []
    for i in range(r):
        row = []
        for m in mats:
            if m.nrows != r:
                raise DimensionMismatch("hstack: row mismatch")
            row.extend(m.rows[i])
        rows.append(row)
    return Matrix(rows, ncols=sum(m.ncols for m in mats))


# ---------------------------------------------------------------------------
# Row reduction (Bareiss core + exact RREF)
# ---------------------------------------------------------------------------

def _integer_rows(rows):
    """Scale each row by the lcm of its denominators; returns int rows."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _rref(rows, ncols):
    """RREF of the given Fraction rows.  Returns (rref_rows, pivot_cols).

    Forward elimination is fraction-free (Bareiss) over integer-scaled rows,
    which keeps entry growth polynomial; back substitution then normalises to
    Fractions.  Zero rows are dropped.
    """
    a = _integer_rows(rows)
    m = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pc = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            # full Bareiss update on every row keeps entries equal to minors,
            # so the division by the previous pivot stays exact
            for j in range(c, ncols):
                row_i[j] = (row_i[j] * pc - aic * row_r[j]) // prev
        prev = pc
        pivots.append(c)
        r += 1
        if r == m:
            break
    # exact back substitution on the echelon rows
    out = [[Fraction(x) for x in a[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        inv = out[i][c]
        out[i] = [x / inv for x in out[i]]
        for k in range(i):
            f = out[k][c]
            if f != 0:
                out[k] = [x - f * y for x, y in zip(out[k], out[i])]
    return out, pivots


class Subspace:
    """A subspace of Q^n in canonical (RREF basis) form."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, vectors=(), _canonical=None):
        self.ambient_dim = ambient_dim
        if _canonical is not None:
            self.basis = _canonical
            return
        vecs = [tuple(_frac(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length != ambient dim")
        rows, _ = _rref(vecs, ambient_dim)
        self.basis = Matrix(rows, ncols=ambient_dim)

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @classmethod
    def full(cls, n):
        return cls(n, _canonical=Matrix.identity(n))

    @property
    def dim(self):
        return self.basis.nrows

    def vectors(self):
        return self.basis.rows

    def contains(self, v):
        v = [_frac(x) for x in v]
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length != ambient dim")
        w = list(v)
        for row in self.basis.rows:
            c = next((j for j, x in enumerate(row) if x != 0))
            if w[c] != 0:
                f = w[c]
                w = [a - f * b for a, b in zip(w, row)]
        return all(x == 0 for x in w)

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.vectors())

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim %d of Q^%d)" % (self.dim, self.ambient_dim)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def rank(m):
    _, pivots = _rref(list(m.rows), m.ncols)
    return len(pivots)


def kernel(m):
    """Right null space {x : m x = 0} as a Subspace of Q^ncols."""
    rref_rows, pivots = _rref(list(m.rows), m.ncols)
    n = m.ncols
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    vecs = []
    for f in free:
        v = [Q0] * n
        v[f] = Q1
        for i, c in enumerate(pivots):
            v[c] = -rref_rows[i][f]
        vecs.append(v)
    return Subspace(n, vecs)


def image(m):
    """Column span of m as a Subspace of Q^nrows."""
    return Subspace(m.nrows, m.transpose().rows)


def rowspace(m):
    return Subspace(m.ncols, m.rows)


def subspace_sum(u, v):
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("sum: ambient dims differ")
    return Subspace(u.ambient_dim, list(u.vectors()) + list(v.vectors()))


def annihilator(u):
    """Matrix whose rows span {c : c . x = 0 for all x in u}.

    With these rows N one has  u = {x : N x = 0},  the dual description used
    by preimage computations.
    """
    if u.dim == 0:
        return Matrix.identity(u.ambient_dim)
    return Matrix(kernel(u.basis).vectors(), ncols=u.ambient_dim)


def subspace_intersect(u, v):
    """Intersection via the kernel of the stacked system u.a - v.b = 0."""
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("intersect: ambient dims differ")
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    stacked = hstack([u.basis.transpose(), v.basis.transpose().scale(-1)])
    k = kernel(stacked)
    vecs = []
    ubasis = u.basis.rows
    for w in k.vectors():
        a = w[:u.dim]
        vec = [sum(a[i] * ubasis[i][j] for i in range(u.dim))
               for j in range(u.ambient_dim)]
        vecs.append(vec)
    return Subspace(u.ambient_dim, vecs)


def preimage(m, v):
    """{x : m x in v} as a Subspace of the domain."""
    if v.ambient_dim != m.nrows:
        raise DimensionMismatch("preimage: codomain mismatch")
    n = annihilator(v)
    if n.nrows == 0:
        return Subspace.full(m.ncols)
    return kernel(n * m)


def quotient_dim(u, v):
    """dim(u / v) for v a subspace of u (checked)."""
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("quotient: ambient dims differ")
    if not u.contains_subspace(v):
        raise DimensionMismatch("quotient: v is not contained in u")
    return u.dim - v.dim


def apply_to_subspace(m, u):
    """Image m(u) as a Subspace of the codomain."""
    if u.ambient_dim != m.ncols:
        raise DimensionMismatch("apply: domain mismatch")
    return Subspace(m.nrows, [m.mulvec(v) for v in u.vectors()])


def complement_in(v, u):
    """Canonical vectors of u extending a basis of v to one of u.

    Returned vectors are representatives of a basis of u/v: rows of the RREF
    of u's basis that add pivots not present in v.  Deterministic.
    """
    if not u.contains_subspace(v):
        raise DimensionMismatch("complement: v not inside u")
    got = list(v.vectors())
    out = []
    current = Subspace(u.ambient_dim, got)
    for cand in u.vectors():
        if not current.contains(cand):
            out.append(cand)
            got.append(cand)
            current = Subspace(u.ambient_dim, got)
    return out


def solve(m, b):
    """One solution x of m x = b, or None if inconsistent."""
    aug = hstack([m, Matrix([[x] for x in b], ncols=1)])
    rref_rows, pivots = _rref(list(aug.rows), aug.ncols)
    n = m.ncols
    if n in pivots:
        return None
    x = [Q0] * n
    for i, c in enumerate(pivots):
        x[c] = rref_rows[i][n]
    return tuple(x)


def inverse(m):
    """Exact inverse of a square matrix (None if singular)."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("inverse of non-square matrix")
    n = m.nrows
    aug = hstack([m, Matrix.identity(n)])
    rref_rows, pivots = _rref(list(aug.rows), 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return Matrix([row[n:] for row in rref_rows[:n]], ncols=n)


def coordinates(vectors, target):
    """Coefficients expressing target in the given spanning vectors, or None."""
    if not vectors:
        return None if any(_frac(t) != 0 for t in target) else ()
    m = Matrix(vectors, ncols=len(target)).transpose()
    return solve(m, target)
