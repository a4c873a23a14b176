"""Chevalley-Eilenberg cochain complexes and Lie algebra cohomology.

The coboundary on n-cochains f : Lambda^n g -> A is

    (d_n f)(x_1, ..., x_{n+1}) =
        sum_i (-1)^{i+1} pi(x_i) f(..., x_i omitted, ...)
      + sum_{i<j} (-1)^{i+j} f([x_i, x_j], ..., x_i, x_j omitted, ...)

with (d_0 v)(x) = pi(x) v.  Bases of Lambda^n are strictly increasing index
tuples in lexicographic order; a cochain is the coordinate vector indexed by
(tuple, module basis element), tuple-major.
"""

import itertools
from fractions import Fraction

from .errors import DimensionMismatch, ValidationError
from .exactlin import (Matrix, Subspace, Q0, Q1, complement_in, coordinates,
                       image, kernel, rank, subspace_intersect, vstack)
from . import structures as st


class CochainComplex:
    """A cochain complex in degrees 0..top given by its differentials.

    d[i] maps C^i -> C^{i+1}; the differential out of the top degree is
    implicitly zero.  d_{n+1} d_n = 0 is validated on construction.
    """

    def __init__(self, dims, d, validate=True):
        self.dims = tuple(dims)
        self.d = tuple(d)
        if len(self.d) != len(self.dims) - 1:
            raise DimensionMismatch("need len(dims)-1 differentials")
        for n, m in enumerate(self.d):
            if m.ncols != self.dims[n] or m.nrows != self.dims[n + 1]:
                raise DimensionMismatch("differential %d has wrong shape" % n)
        if validate:
            self.check_dsquared()

    @property
    def top(self):
        return len(self.dims) - 1

    def d_out(self, n):
        if 0 <= n < len(self.d):
            return self.d[n]
        return Matrix.zeros(0 if n >= self.top else self.dims[n + 1],
                            self.dims[n] if 0 <= n <= self.top else 0)

    def check_dsquared(self):
        for n in range(len(self.d) - 1):
            if not (self.d[n + 1] * self.d[n]).is_zero():
                raise ValidationError("d-squared", witness=(n,))

    def cocycles(self, n):
        if n == self.top or n >= len(self.d):
            return Subspace.full(self.dims[n])
        return kernel(self.d[n])

    def coboundaries(self, n):
        if n == 0:
            return Subspace.zero(self.dims[0])
        return image(self.d[n - 1])

    def cohomology_dim(self, n):
        return self.cocycles(n).dim - self.coboundaries(n).dim

    def cohomology_dims(self, up_to=None):
        up_to = self.top if up_to is None else up_to
        return tuple(self.cohomology_dim(n) for n in range(up_to + 1))

    def representatives(self, n):
        """Canonical cocycle representatives of H^n (echelon form)."""
        z = self.cocycles(n)
        b = self.coboundaries(n)
        return Subspace(self.dims[n], complement_in(b, z))


class CohomologyReport:
    """Per-degree dimensions and canonical representatives."""

    def __init__(self, dims, representatives, space_dims):
        self.dims = tuple(dims)
        self.representatives = tuple(representatives)
        self.space_dims = tuple(space_dims)
        self.euler_characteristic = sum((-1) ** n * d for n, d in enumerate(dims))

    def __repr__(self):
        return "CohomologyReport(dims=%r)" % (self.dims,)


# ---------------------------------------------------------------------------
# The CE complex
# ---------------------------------------------------------------------------

def exterior_basis(dim, n):
    return list(itertools.combinations(range(dim), n))


def insert_sign(k, rest):
    """Sign sorting (k, *rest) with rest strictly increasing; None if k in rest."""
    if k in rest:
        return None, None
    pos = sum(1 for r in rest if r < k)
    word = tuple(sorted((k,) + rest))
    return (-1) ** pos, word


def ce_delta(g, a, n):
    """Matrix of d_n : C^n(g; A) -> C^{n+1}(g; A)."""
    da = a.dim
    src = exterior_basis(g.dim, n)
    tgt = exterior_basis(g.dim, n + 1)
    src_index = {s: i for i, s in enumerate(src)}
    rows = [[Q0] * (len(src) * da) for _ in range(len(tgt) * da)]
    for t_i, t in enumerate(tgt):
        for i_pos in range(n + 1):
            s = t[:i_pos] + t[i_pos + 1:]
            sgn = (-1) ** i_pos  # (-1)^{i+1} with 1-based i
            mat = a.action[t[i_pos]]
            col0 = src_index[s] * da
            row0 = t_i * da
            for bp in range(da):
                for b in range(da):
                    v = mat[bp, b]
                    if v != 0:
                        rows[row0 + bp][col0 + b] += sgn * v
        for i_pos in range(n + 1):
            for j_pos in range(i_pos + 1, n + 1):
                rest = tuple(x for p, x in enumerate(t) if p not in (i_pos, j_pos))
                sgn_ij = (-1) ** (i_pos + 1 + j_pos + 1)
                for k, c in g.bracket(t[i_pos], t[j_pos]).items():
                    s_sgn, word = insert_sign(k, rest)
                    if s_sgn is None:
                        continue
                    col0 = src_index[word] * da
                    row0 = t_i * da
                    for b in range(da):
                        rows[row0 + b][col0 + b] += sgn_ij * s_sgn * c
    return Matrix(rows, ncols=len(src) * da)


def ce_complex(g, a, max_degree=None):
    """CE complex of g with coefficients in the module a.

    Degrees 0..min(max_degree + 1, dim g) are materialised, which is enough
    to read off H^0..H^max_degree.
    """
    if a.algebra is not g:
        raise DimensionMismatch("module is over a different algebra")
    top = g.dim if max_degree is None else min(max_degree + 1, g.dim)
    dims = [len(exterior_basis(g.dim, n)) * a.dim for n in range(top + 1)]
    d = [ce_delta(g, a, n) for n in range(top)]
    return CochainComplex(dims, d)


def cohomology(g, a, max_degree=None):
    max_degree = g.dim if max_degree is None else max_degree
    if max_degree > g.dim:
        max_degree = g.dim
    cx = ce_complex(g, a, max_degree=max_degree)
    dims, reps = [], []
    for n in range(max_degree + 1):
        dims.append(cx.cohomology_dim(n))
        reps.append(cx.representatives(n))
    return CohomologyReport(dims, reps, cx.dims[:max_degree + 1])


def invariants(a):
    """A^g = joint kernel of all action matrices."""
    if a.dim == 0:
        return Subspace.zero(0)
    nonzero = [m for m in a.action if not m.is_zero()]
    if not nonzero:
        return Subspace.full(a.dim)
    return kernel(vstack(nonzero))


def homology_via_duality(g, a, max_degree=None):
    """dim H_n(g; A) computed as dim H^n(g; A*) with the contragredient action."""
    return cohomology(g, st.dual_module(a), max_degree=max_degree).dims


def evaluate_cochain(vec, g, a, n, args):
    """Value of the n-cochain vec on a tuple of algebra basis indices."""
    if len(args) != n:
        raise DimensionMismatch("wrong arity")
    if len(set(args)) != n:
        return tuple([Q0] * a.dim)
    order = tuple(sorted(args))
    sgn = st._sort_sign(args)
    src = exterior_basis(g.dim, n)
    s_idx = src.index(order)
    da = a.dim
    return tuple(sgn * vec[s_idx * da + b] for b in range(da))


def verify_cocycle(vec, g, a, n, cx=None):
    """(is_cocycle, witness): witness is a violating basis tuple or None."""
    cx = cx or ce_complex(g, a, max_degree=min(n + 1, g.dim))
    if n >= len(cx.d):
        return True, None
    img = cx.d[n].mulvec(vec)
    if all(x == 0 for x in img):
        return True, None
    tgt = exterior_basis(g.dim, n + 1)
    da = a.dim
    for t_i, t in enumerate(tgt):
        if any(img[t_i * da + b] != 0 for b in range(da)):
            return False, t
    return False, None


# ---------------------------------------------------------------------------
# Relative cohomology
# ---------------------------------------------------------------------------

def contraction_matrix(g, a, n, vector):
    """Matrix of c |-> i_X c : C^n -> C^{n-1} for X with the given coords."""
    da = a.dim
    src = exterior_basis(g.dim, n)
    tgt = exterior_basis(g.dim, n - 1)
    src_index = {s: i for i, s in enumerate(src)}
    rows = [[Q0] * (len(src) * da) for _ in range(len(tgt) * da)]
    for t_i, t in enumerate(tgt):
        for i, coef in enumerate(vector):
            if coef == 0:
                continue
            sgn, word = insert_sign(i, t)
            if sgn is None:
                continue
            col0 = src_index[word] * da
            for b in range(da):
                rows[t_i * da + b][col0 + b] += sgn * coef
    return Matrix(rows, ncols=len(src) * da)


def is_subalgebra(g, h):
    for u in h.vectors():
        for v in h.vectors():
            if not h.contains(g.bracket_vectors(u, v)):
                return False
    return True


def is_ideal(g, h):
    basis = [[Q1 if i == j else Q0 for j in range(g.dim)] for i in range(g.dim)]
    for u in basis:
        for v in h.vectors():
            if not h.contains(g.bracket_vectors(u, v)):
                return False
    return True


class SubComplex:
    """A subcomplex of an ambient CochainComplex with explicit inclusion."""

    def __init__(self, ambient, spaces):
        self.ambient = ambient
        self.spaces = tuple(spaces)
        d = []
        for n in range(len(spaces) - 1):
            cols = []
            tgt_vectors = list(spaces[n + 1].vectors())
            for v in spaces[n].vectors():
                img = ambient.d_out(n).mulvec(v)
                coeff = coordinates(tgt_vectors, img)
                if coeff is None:
                    raise ValidationError("not-a-subcomplex", witness=(n,))
                cols.append(list(coeff))
            dn = Matrix(cols, ncols=spaces[n + 1].dim).transpose() if cols else \
                Matrix.zeros(spaces[n + 1].dim, 0)
            d.append(dn)
        self.complex = CochainComplex([s.dim for s in spaces], d)


def relative_complex(g, h, a, max_degree=None):
    """Relative cochains: i_X c = 0 and i_X dc = 0 for all X in h.

    h is a Subspace of g (must be closed under the bracket).  Returns a
    SubComplex whose .complex has the relative cohomology.
    """
    if not is_subalgebra(g, h):
        raise ValidationError("not-a-subalgebra")
    top = g.dim if max_degree is None else min(max_degree + 1, g.dim)
    ambient = ce_complex(g, a, max_degree=top)
    spaces = []
    for n in range(top + 1):
        dim_n = ambient.dims[n]
        conds = []
        for v in h.vectors():
            if n >= 1:
                conds.append(contraction_matrix(g, a, n, v))
            if n + 1 <= g.dim:
                conds.append(contraction_matrix(g, a, n + 1, v) * ambient.d_out(n))
        if not conds:
            spaces.append(Subspace.full(dim_n))
            continue
        nonzero = [m for m in conds if m.nrows > 0]
        if not nonzero:
            spaces.append(Subspace.full(dim_n))
        else:
            spaces.append(kernel(vstack(nonzero)))
    return SubComplex(ambient, spaces)


def _adapted_transform(g, h):
    """Basis of g adapted to h: h's canonical vectors then a complement."""
    comp = complement_in(h, Subspace.full(g.dim))
    return list(h.vectors()) + list(comp), h.dim


def quotient_algebra(g, h):
    """g/h for an ideal h, with the induced bracket (validated)."""
    if not is_ideal(g, h):
        raise ValidationError("not-an-ideal")
    vecs, nh = _adapted_transform(g, h)
    t = Matrix(vecs, ncols=g.dim).transpose()  # columns are the new basis
    q = g.dim - nh
    triples = []
    for ai in range(q):
        for bi in range(ai + 1, q):
            br = g.bracket_vectors(vecs[nh + ai], vecs[nh + bi])
            coeff = coordinates(vecs, br)
            terms = {k - nh: coeff[k] for k in range(nh, g.dim) if coeff[k] != 0}
            triples.append((ai, bi, terms))
    return st.lie_from_constants(q, triples), vecs


def invariants_module(g, h, a):
    """Inv_h A as a g/h-module (h must be an ideal)."""
    quot, vecs = quotient_algebra(g, h)
    nh = h.dim
    inv = subspace_intersect_all(
        [kernel(_action_along(a, v)) for v in vecs[:nh]], a.dim)
    inv_vectors = list(inv.vectors())
    mats = []
    for ci in range(quot.dim):
        mat_g = _action_along(a, vecs[nh + ci])
        cols = []
        for v in inv_vectors:
            img = mat_g.mulvec(v)
            coeff = coordinates(inv_vectors, img)
            if coeff is None:
                raise ValidationError("invariants-not-stable", witness=(ci,))
            cols.append(list(coeff))
        mats.append(Matrix(cols, ncols=inv.dim).transpose() if cols
                    else Matrix.zeros(0, 0))
    return st.LieModule(quot, mats), quot


def _action_along(a, vector):
    acc = Matrix.zeros(a.dim, a.dim)
    for i, c in enumerate(vector):
        if c != 0:
            acc = acc + a.action[i].scale(c)
    return acc


def subspace_intersect_all(subs, ambient):
    out = Subspace.full(ambient)
    for s in subs:
        out = subspace_intersect(out, s)
    return out


def relative_vs_quotient_check(g, h, a, max_degree=None):
    """For an ideal h: dims of H(g,h;A) must equal dims of H(g/h, Inv_h A)."""
    max_degree = (g.dim - h.dim) if max_degree is None else max_degree
    rel = relative_complex(g, h, a, max_degree=max_degree)
    lhs = rel.complex.cohomology_dims(up_to=min(max_degree, rel.complex.top))
    inv_mod, quot = invariants_module(g, h, a)
    rhs = cohomology(quot, inv_mod, max_degree=max_degree).dims
    n = max(len(lhs), len(rhs))
    pad = lambda t: tuple(t) + (0,) * (n - len(t))
    return {"relative": pad(lhs), "quotient": pad(rhs),
            "match": pad(lhs) == pad(rhs)}


# ---------------------------------------------------------------------------
# Witt / Virasoro cocycle checks (windowed, symbolic indices)
# ---------------------------------------------------------------------------

def witt_cocycle_delta(a, b, c, window):
    """(d omega)(L_a, L_b, L_c) for the central cocycle, trivial coefficients.

    Returns None if some needed bracket leaves the window.
    """
    terms = []
    for (x, y, z, sgn) in ((a, b, c, -1), (a, c, b, 1), (b, c, a, -1)):
        br = st.witt_bracket(x, y, window)
        if br is st.OUT_OF_WINDOW:
            return None
        coeff, idx = br
        terms.append(sgn * coeff * st.virasoro_omega(idx, z))
    return sum(terms, Fraction(0))


def witt_cocycle_check(max_index=8):
    """delta omega = 0 on all in-window triples; plus the exact cyclic identity."""
    window = st.WittWindow(max_index)
    checked = 0
    for a in range(-max_index, max_index + 1):
        for b in range(a + 1, max_index + 1):
            for c in range(b + 1, max_index + 1):
                val = witt_cocycle_delta(a, b, c, window)
                if val is None:
                    continue
                checked += 1
                if val != 0:
                    return {"ok": False, "witness": (a, b, c), "checked": checked}
    # cyclic identity, no window needed: omega(x3,[x1,x2]) + cyclic = 0
    for a in range(-max_index, max_index + 1):
        for b in range(-max_index, max_index + 1):
            for c in range(-max_index, max_index + 1):
                s = (Fraction(a - b) * st.virasoro_omega(c, a + b)
                     + Fraction(b - c) * st.virasoro_omega(a, b + c)
                     + Fraction(c - a) * st.virasoro_omega(b, c + a))
                if s != 0:
                    return {"ok": False, "witness": ("cyclic", a, b, c),
                            "checked": checked}
    return {"ok": True, "checked": checked}
