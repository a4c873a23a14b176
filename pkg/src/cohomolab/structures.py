"""Validated algebraic structures: Lie algebras, their modules, associative
algebras, and the specific constructions the rest of the workbench consumes
(gl_n, Witt windows, Virasoro brackets, semidirect sums, dual numbers,
truncated polynomial algebras, one-dimensional trace modules).

Every constructor validates its output (antisymmetry + Jacobi, or
associativity + unit laws) and raises ValidationError with a witness tuple on
failure.  Jacobi is checked exhaustively up to dimension 12 and by seeded
random sampling above that.
"""

import itertools
import json
import random
from fractions import Fraction

from .errors import CapExceeded, DimensionMismatch, ValidationError
from .exactlin import Matrix, Subspace, Q0, Q1

JACOBI_DENSE_DIM = 12
JACOBI_SAMPLES = 400


def frac(x):
    """Parse an exact rational from int/Fraction/'p/q' string (no decimals)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if any(ch in x for ch in ".eE"):
            raise ValidationError("rational-format", detail="decimal notation not allowed: %r" % x)
        return Fraction(x)
    raise ValidationError("rational-format", detail="cannot parse %r" % (x,))


def frac_str(x):
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else "%d" % x.numerator


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    Brackets are stored sparsely: ``brackets[(i, j)]`` for i < j is a dict
    {k: coeff} with [e_i, e_j] = sum coeff * e_k.
    """

    def __init__(self, dim, brackets, basis_names=None, validate=True, seed=0):
        self.dim = dim
        self.basis_names = tuple(basis_names) if basis_names else tuple(
            "e%d" % i for i in range(dim))
        if len(self.basis_names) != dim:
            raise DimensionMismatch("basis names / dim mismatch")
        bk = {}
        for (i, j), terms in brackets.items():
            terms = {k: frac(v) for k, v in terms.items() if frac(v) != 0}
            if not terms:
                continue
            if i == j:
                raise ValidationError("antisymmetry", witness=(i, i),
                                      detail="[e_i, e_i] must vanish")
            if i < j:
                if (i, j) in bk:
                    raise ValidationError("duplicate-bracket", witness=(i, j))
                bk[(i, j)] = terms
            else:
                key = (j, i)
                neg = {k: -v for k, v in terms.items()}
                if key in bk:
                    if bk[key] != neg:
                        raise ValidationError("antisymmetry", witness=(j, i),
                                              detail="[e_j,e_i] != -[e_i,e_j]")
                else:
                    bk[key] = neg
        self.brackets = bk
        if validate:
            self.check_jacobi(seed=seed)

    def bracket(self, i, j):
        """[e_i, e_j] as a dict {k: coeff}."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -v for k, v in self.brackets.get((j, i), {}).items()}

    def bracket_vectors(self, u, v):
        """Bracket of two coordinate vectors."""
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0 or i == j:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] += a * b * c
        return tuple(out)

    def _jacobi_defect(self, i, j, k):
        out = [Q0] * self.dim
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            for m, cm in self.bracket(b, c).items():
                for l, cl in self.bracket(a, m).items():
                    out[l] += cm * cl
        return out

    def check_jacobi(self, seed=0):
        if self.dim <= JACOBI_DENSE_DIM:
            triples = itertools.combinations(range(self.dim), 3)
        else:
            rng = random.Random(seed)
            triples = (tuple(sorted(rng.sample(range(self.dim), 3)))
                       for _ in range(JACOBI_SAMPLES))
        for (i, j, k) in triples:
            defect = self._jacobi_defect(i, j, k)
            for l, x in enumerate(defect):
                if x != 0:
                    raise ValidationError("jacobi", witness=(i, j, k, l),
                                          detail="defect %s at e_%d" % (frac_str(x), l))

    def is_unimodular(self):
        """sum_j c_ij^j = 0 for every i (trace of ad vanishes)."""
        for i in range(self.dim):
            tr = Q0
            for j in range(self.dim):
                tr += self.bracket(i, j).get(j, Q0)
            if tr != 0:
                return False
        return True

    def name_index(self, name):
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise ValidationError("unknown-basis-name", detail=name)

    def subalgebra_span(self, indices):
        return Subspace(self.dim, [[Q1 if i == j else Q0 for j in range(self.dim)]
                                   for i in indices])

    def __repr__(self):
        return "LieAlgebra(dim=%d)" % self.dim


class LieModule:
    """Representation of a LieAlgebra: one action matrix per basis element."""

    def __init__(self, algebra, action, validate=True, dim=None):
        self.algebra = algebra
        self.action = tuple(action)
        if len(self.action) != algebra.dim:
            raise DimensionMismatch("need one action matrix per algebra basis element")
        if self.action:
            self.dim = self.action[0].nrows
        elif dim is not None:
            self.dim = dim
        else:
            raise DimensionMismatch("module over the zero algebra needs an explicit dim")
        for m in self.action:
            if m.nrows != self.dim or m.ncols != self.dim:
                raise DimensionMismatch("action matrices must be square of equal size")
        if validate:
            self.check_module()

    def check_module(self):
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = Matrix.zeros(self.dim, self.dim)
                for k, c in g.bracket(i, j).items():
                    lhs = lhs + self.action[k].scale(c)
                rhs = self.action[i] * self.action[j] - self.action[j] * self.action[i]
                if lhs != rhs:
                    raise ValidationError("module-axiom", witness=(i, j))

    def act(self, i, v):
        return self.action[i].mulvec(v)

    def __repr__(self):
        return "LieModule(dim=%d over dim=%d)" % (self.dim, self.algebra.dim)


class AssocAlgebra:
    """Associative algebra by multiplication tensor, with unit and optional
    integer grading of the basis."""

    def __init__(self, dim, mult, unit, grading=None, basis_names=None, validate=True):
        self.dim = dim
        self.mult = tuple(tuple(tuple(frac(x) for x in vec) for vec in row) for row in mult)
        self.unit = tuple(frac(x) for x in unit)
        self.grading = tuple(grading) if grading is not None else None
        self.basis_names = tuple(basis_names) if basis_names else tuple(
            "a%d" % i for i in range(dim))
        if len(self.mult) != dim or any(len(r) != dim for r in self.mult):
            raise DimensionMismatch("mult tensor shape")
        if len(self.unit) != dim:
            raise DimensionMismatch("unit length")
        if validate:
            self.check_assoc()

    def mul_basis(self, i, j):
        return self.mult[i][j]

    def mul(self, u, v):
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                ab = a * b
                for k, c in enumerate(self.mult[i][j]):
                    if c != 0:
                        out[k] += ab * c
        return tuple(out)

    def check_assoc(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    left = self.mul(self.mul_basis(i, j), self._basis_vec(k))
                    right = self.mul(self._basis_vec(i), self.mul_basis(j, k))
                    if left != right:
                        raise ValidationError("associativity", witness=(i, j, k))
        for i in range(self.dim):
            e = self._basis_vec(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise ValidationError("unit-law", witness=(i,))
        if self.grading is not None:
            for i in range(self.dim):
                for j in range(self.dim):
                    d = self.grading[i] + self.grading[j]
                    for k, c in enumerate(self.mult[i][j]):
                        if c != 0 and self.grading[k] != d:
                            raise ValidationError("grading", witness=(i, j, k))
            for k, c in enumerate(self.unit):
                if c != 0 and self.grading[k] != 0:
                    raise ValidationError("grading", witness=(k,),
                                          detail="unit must sit in degree 0")

    def _basis_vec(self, i):
        return tuple(Q1 if j == i else Q0 for j in range(self.dim))

    def is_commutative(self):
        return all(self.mult[i][j] == self.mult[j][i]
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def __repr__(self):
        return "AssocAlgebra(dim=%d%s)" % (self.dim, ", graded" if self.grading else "")


# ---------------------------------------------------------------------------
# Lie algebra constructors
# ---------------------------------------------------------------------------

def lie_from_constants(dim, triples, basis_names=None):
    """Build a LieAlgebra from sparse bracket triples.

    triples: iterable of (i, j, {k: coeff}); indices may repeat with opposite
    orientation, in which case consistency with antisymmetry is enforced.
    """
    bk = {}
    for (i, j, terms) in triples:
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionMismatch("bracket index out of range")
        terms = {k: frac(v) for k, v in terms.items()}
        if i == j:
            if any(v != 0 for v in terms.values()):
                raise ValidationError("antisymmetry", witness=(i, j))
            continue
        key, val = ((i, j), terms) if i < j else ((j, i), {k: -v for k, v in terms.items()})
        if key in bk:
            if bk[key] != {k: v for k, v in val.items() if v != 0}:
                raise ValidationError("antisymmetry", witness=(i, j),
                                      detail="conflicting bracket orientations")
        else:
            bk[key] = {k: v for k, v in val.items() if v != 0}
    return LieAlgebra(dim, bk, basis_names=basis_names)


def abelian(n):
    return LieAlgebra(n, {})


def sl2():
    """Basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    return lie_from_constants(3, [
        (0, 1, {1: 2}),
        (0, 2, {2: -2}),
        (1, 2, {0: 1}),
    ], basis_names=("h", "e", "f"))


def heisenberg():
    """Basis (x, y, z) with [x,y] = z."""
    return lie_from_constants(3, [(0, 1, {2: 1})], basis_names=("x", "y", "z"))


def two_dim_nonabelian():
    """[e1, e2] = e2."""
    return lie_from_constants(2, [(0, 1, {1: 1})], basis_names=("e1", "e2"))


def gl(n):
    """gl_n on basis e_ij with [e_ij, e_kl] = d_jk e_il - d_li e_kj."""
    if n < 1:
        raise DimensionMismatch("gl(n) needs n >= 1")
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    bk = {}
    for (i, j) in itertools.product(range(n), repeat=2):
        for (k, l) in itertools.product(range(n), repeat=2):
            a, b = idx[(i, j)], idx[(k, l)]
            if a >= b:
                continue
            terms = {}
            if j == k:
                terms[idx[(i, l)]] = terms.get(idx[(i, l)], Q0) + 1
            if l == i:
                terms[idx[(k, j)]] = terms.get(idx[(k, j)], Q0) - 1
            terms = {m: v for m, v in terms.items() if v != 0}
            if terms:
                bk[(a, b)] = terms
    names = tuple("E%d%d" % (i + 1, j + 1) for i in range(n) for j in range(n))
    return LieAlgebra(n * n, bk, basis_names=names)


def gl_trace_vector(n):
    """Coordinates of the trace functional on gl(n)."""
    return tuple(Q1 if i % (n + 1) == 0 else Q0 for i in range(n * n))


# ---------------------------------------------------------------------------
# Witt window and Virasoro
# ---------------------------------------------------------------------------

class OutOfWindow:
    """Marker for a Witt bracket landing outside the index window."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OutOfWindow"


OUT_OF_WINDOW = OutOfWindow()


class WittWindow:
    """Symbolic generators L_k for |k| <= N; never closed under bracket."""

    def __init__(self, n):
        if n < 0:
            raise DimensionMismatch("window radius must be >= 0")
        self.N = n

    def indices(self):
        return range(-self.N, self.N + 1)


def witt_bracket(n, m, window):
    """[L_n, L_m] = (n - m) L_{n+m}, or OUT_OF_WINDOW if |n+m| > N."""
    if abs(n) > window.N or abs(m) > window.N:
        raise ValidationError("witt-index", witness=(n, m),
                              detail="index outside window radius %d" % window.N)
    if abs(n + m) > window.N:
        return OUT_OF_WINDOW
    return (Fraction(n - m), n + m)


def virasoro_omega(n, m):
    """Central 2-cocycle value: delta_{n+m,0} * n(n^2-1)/12."""
    if n + m != 0:
        return Q0
    return Fraction(n * (n * n - 1), 12)


def virasoro_bracket(a, b):
    """Bracket of (index, central coefficient) pairs in the Virasoro algebra.

    Returns ((coefficient, index), central) for
    [L_a + c1 z, L_b + c2 z] = (a-b) L_{a+b} + omega(a, b) z;
    the central generator commutes with everything.
    """
    (n, _c1), (m, _c2) = a, b
    return ((Fraction(n - m), n + m), virasoro_omega(n, m))


# ---------------------------------------------------------------------------
# Semidirect sum  w  +  gbar (x) p
# ---------------------------------------------------------------------------

def semidirect(w, gbar, p, action):
    """Semidirect sum on w + (gbar tensor p).

    [v + g1 p1, u + g2 p2] = [v,u] + [g1,g2] p1 p2 + g2 v(p2) - g1 u(p1),
    where v(p) is the derivation action of w on the commutative unital
    algebra p.  ``action`` is one matrix (dim p x dim p) per basis element
    of w; each must be a derivation (checked), and Jacobi of the result is
    validated, reporting a witness on failure.
    """
    if not p.is_commutative():
        raise ValidationError("semidirect-commutative",
                              detail="coefficient algebra must be commutative")
    if len(action) != w.dim:
        raise DimensionMismatch("need one action matrix per basis element of w")
    for t, mat in enumerate(action):
        for i in range(p.dim):
            for j in range(p.dim):
                prod = p.mul_basis(i, j)
                lhs = mat.mulvec(prod)
                rhs = [Q0] * p.dim
                dei = mat.mulvec(p._basis_vec(i))
                dej = mat.mulvec(p._basis_vec(j))
                for k, c in enumerate(p.mul(dei, p._basis_vec(j))):
                    rhs[k] += c
                for k, c in enumerate(p.mul(p._basis_vec(i), dej)):
                    rhs[k] += c
                if list(lhs) != rhs:
                    raise ValidationError("action-not-derivation", witness=(t, i, j))
    nw, ng, np_ = w.dim, gbar.dim, p.dim
    dim = nw + ng * np_

    def tens(gi, pj):
        return nw + gi * np_ + pj

    bk = {}

    def add(a, b, terms):
        if a == b:
            return
        key, sgn = ((a, b), 1) if a < b else ((b, a), -1)
        tgt = bk.setdefault(key, {})
        for k, v in terms.items():
            tgt[k] = tgt.get(k, Q0) + sgn * v
            if tgt[k] == 0:
                del tgt[k]

    for i in range(nw):
        for j in range(i + 1, nw):
            add(i, j, dict(w.bracket(i, j)))
    for i in range(nw):
        for gi in range(ng):
            for pj in range(np_):
                img = action[i].mulvec(p._basis_vec(pj))
                add(i, tens(gi, pj), {tens(gi, k): c for k, c in enumerate(img) if c != 0})
    for gi in range(ng):
        for pj in range(np_):
            for gk in range(ng):
                for pl in range(np_):
                    a, b = tens(gi, pj), tens(gk, pl)
                    if a >= b:
                        continue
                    terms = {}
                    prod = p.mul_basis(pj, pl)
                    for gm, c in gbar.bracket(gi, gk).items():
                        for pk, d in enumerate(prod):
                            if c * d != 0:
                                key = tens(gm, pk)
                                terms[key] = terms.get(key, Q0) + c * d
                    add(a, b, terms)
    names = tuple(w.basis_names) + tuple(
        "%s*%s" % (gn, pn) for gn in gbar.basis_names for pn in p.basis_names)
    return LieAlgebra(dim, {k: v for k, v in bk.items() if v}, basis_names=names)


# ---------------------------------------------------------------------------
# Formal vector fields truncated at polynomial degree D
# ---------------------------------------------------------------------------

def _monomials(n_vars, max_deg):
    out = []
    for d in range(max_deg + 1):
        for m in itertools.combinations_with_replacement(range(n_vars), d):
            exp = [0] * n_vars
            for v in m:
                exp[v] += 1
            out.append(tuple(exp))
    return out


class VectorFieldModel:
    """Vector fields sum_i v_i d/dz_i with polynomial v_i of degree <= D."""

    def __init__(self, n_vars, max_deg):
        self.n_vars = n_vars
        self.max_deg = max_deg
        self.monomials = _monomials(n_vars, max_deg)
        self.basis = [(m, i) for m in self.monomials for i in range(n_vars)]
        self.index = {b: k for k, b in enumerate(self.basis)}
        self.dim = len(self.basis)

    def bracket_basis(self, b1, b2):
        """Exact bracket of two basis fields, or None if it exceeds the cap.

        [x^m d_i, x^m' d_j] = m'_i x^{m+m'-e_i} d_j - m_j x^{m+m'-e_j} d_i.
        """
        (m, i), (mp, j) = b1, b2
        total = sum(m) + sum(mp) - 1
        if total > self.max_deg:
            return None
        out = {}
        if mp[i] > 0:
            exp = list(map(sum, zip(m, mp)))
            exp[i] -= 1
            key = (tuple(exp), j)
            out[key] = out.get(key, Q0) + mp[i]
        if m[j] > 0:
            exp = list(map(sum, zip(m, mp)))
            exp[j] -= 1
            key = (tuple(exp), i)
            out[key] = out.get(key, Q0) - m[j]
        return {k: v for k, v in out.items() if v != 0}


def l_filtration(n_vars, max_deg, k):
    """Subspace L_k: fields whose coefficients have polynomial degree >= k+1."""
    if not (-1 <= k <= max_deg):
        raise DimensionMismatch("filtration level out of range")
    model = VectorFieldModel(n_vars, max_deg)
    vecs = []
    for pos, (m, _i) in enumerate(model.basis):
        if sum(m) >= k + 1:
            v = [Q0] * model.dim
            v[pos] = Q1
            vecs.append(v)
    return Subspace(model.dim, vecs)


def l_filtration_check(n_vars, max_deg):
    """Verify [L_a, L_b] subset L_{a+b} wherever the cap allows, and that
    gl_n -> L_0 -> L_0/L_1 is an isomorphism of Lie algebras."""
    model = VectorFieldModel(n_vars, max_deg)
    report = {"bracket_inclusions": [], "gl_iso": None}
    for a in range(-1, max_deg):
        for b in range(a, max_deg):
            tgt = a + b
            if tgt > max_deg - 1:
                continue
            ok = True
            for b1 in model.basis:
                if sum(b1[0]) < a + 1:
                    continue
                for b2 in model.basis:
                    if sum(b2[0]) < b + 1:
                        continue
                    br = model.bracket_basis(b1, b2)
                    if br is None:
                        continue
                    if any(sum(mk[0]) < tgt + 1 for mk in br):
                        ok = False
            report["bracket_inclusions"].append(((a, b), ok))
    # gl_n -> L_0/L_1: e_ij -> z_i d/dz_j; brackets must match mod L_1
    g = gl(n_vars)
    def embed(i, j):
        exp = [0] * n_vars
        exp[i] += 1
        return (tuple(exp), j)
    ok = True
    pairs = [(i, j) for i in range(n_vars) for j in range(n_vars)]
    for (a_, (i, j)) in enumerate(pairs):
        for (b_, (k, l)) in enumerate(pairs):
            br = model.bracket_basis(embed(i, j), embed(k, l))
            expect = g.bracket(a_, b_)
            got = {}
            for (mon, d), c in (br or {}).items():
                if sum(mon) == 1:
                    src = mon.index(1)
                    got[src * n_vars + d] = c
                elif sum(mon) >= 2:
                    pass  # would land in L_1; degree-1 brackets of linear fields cannot
            if got != {k2: v2 for k2, v2 in expect.items()}:
                ok = False
    report["gl_iso"] = ok and l_filtration(n_vars, max_deg, 0).dim - \
        l_filtration(n_vars, max_deg, 1).dim == n_vars * n_vars
    return report


# ---------------------------------------------------------------------------
# Associative constructors
# ---------------------------------------------------------------------------

def base_field():
    return AssocAlgebra(1, [[[1]]], [1], grading=[0], basis_names=("1",))


def dual_numbers():
    """k[x]/(x^2), graded with deg x = 1."""
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return AssocAlgebra(2, mult, [1, 0], grading=[0, 1], basis_names=("1", "x"))


def truncated_poly(n_vars, max_deg):
    """k[z_1..z_n] / (degree > max_deg), graded by total degree."""
    mons = _monomials(n_vars, max_deg)
    index = {m: i for i, m in enumerate(mons)}
    dim = len(mons)
    mult = [[[Q0] * dim for _ in range(dim)] for _ in range(dim)]
    for i, mi in enumerate(mons):
        for j, mj in enumerate(mons):
            s = tuple(a + b for a, b in zip(mi, mj))
            if sum(s) <= max_deg:
                mult[i][j][index[s]] = Q1
    unit = [Q1 if sum(m) == 0 else Q0 for m in mons]
    names = tuple("z^%s" % (m,) for m in mons)
    return AssocAlgebra(dim, mult, unit, grading=[sum(m) for m in mons],
                        basis_names=names)


def matrix_algebra(n):
    """M_n with basis e_ij ordered row-major."""
    dim = n * n
    idx = lambda i, j: i * n + j
    mult = [[[Q0] * dim for _ in range(dim)] for _ in range(dim)]
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if j == k:
            mult[idx(i, j)][idx(k, l)][idx(i, l)] = Q1
    unit = [Q0] * dim
    for i in range(n):
        unit[idx(i, i)] = Q1
    return AssocAlgebra(dim, mult, unit,
                        basis_names=tuple("e%d%d" % (i + 1, j + 1)
                                          for i in range(n) for j in range(n)))


def tensor_assoc(a1, a2):
    """Tensor product algebra; graded when both factors are."""
    dim = a1.dim * a2.dim
    idx = lambda i, j: i * a2.dim + j
    mult = [[[Q0] * dim for _ in range(dim)] for _ in range(dim)]
    for i1, j1 in itertools.product(range(a1.dim), repeat=2):
        prod1 = a1.mul_basis(i1, j1)
        for i2, j2 in itertools.product(range(a2.dim), repeat=2):
            prod2 = a2.mul_basis(i2, j2)
            tgt = mult[idx(i1, i2)][idx(j1, j2)]
            for k1, c1 in enumerate(prod1):
                if c1 == 0:
                    continue
                for k2, c2 in enumerate(prod2):
                    if c2 != 0:
                        tgt[idx(k1, k2)] += c1 * c2
    unit = [Q0] * dim
    for k1, c1 in enumerate(a1.unit):
        for k2, c2 in enumerate(a2.unit):
            unit[idx(k1, k2)] = c1 * c2
    grading = None
    if a1.grading is not None and a2.grading is not None:
        grading = [a1.grading[i] + a2.grading[j]
                   for i in range(a1.dim) for j in range(a2.dim)]
    names = tuple("%s.%s" % (x, y) for x in a1.basis_names for y in a2.basis_names)
    return AssocAlgebra(dim, mult, unit, grading=grading, basis_names=names)


def commutator_lie(a):
    """The Lie algebra of an associative algebra via [x, y] = xy - yx."""
    bk = {}
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            left = a.mul_basis(i, j)
            right = a.mul_basis(j, i)
            terms = {k: left[k] - right[k] for k in range(a.dim)
                     if left[k] != right[k]}
            if terms:
                bk[(i, j)] = terms
    return LieAlgebra(a.dim, bk, basis_names=a.basis_names)


def gl_n_of(n, a):
    """gl_n(A) = M_n (x) A as a Lie algebra under commutators."""
    return commutator_lie(tensor_assoc(matrix_algebra(n), a))


# ---------------------------------------------------------------------------
# Module constructors
# ---------------------------------------------------------------------------

def trivial_module(g, dim=1):
    return LieModule(g, [Matrix.zeros(dim, dim) for _ in range(g.dim)], dim=dim)


def adjoint_module(g):
    mats = []
    for i in range(g.dim):
        cols = []
        for j in range(g.dim):
            br = g.bracket(i, j)
            cols.append([br.get(k, Q0) for k in range(g.dim)])
        mats.append(Matrix(cols, ncols=g.dim).transpose())
    return LieModule(g, mats)


def dual_module(m):
    """Contragredient: pi*(x) = -pi(x)^T."""
    return LieModule(m.algebra, [(-a).transpose() for a in m.action])


def tensor_module(m1, m2):
    if m1.algebra is not m2.algebra:
        raise DimensionMismatch("tensor factors over different algebras")
    d1, d2 = m1.dim, m2.dim
    dim = d1 * d2
    mats = []
    for x in range(m1.algebra.dim):
        a, b = m1.action[x], m2.action[x]
        rows = [[Q0] * dim for _ in range(dim)]
        for i in range(d1):
            for j in range(d2):
                r = i * d2 + j
                for k in range(d1):
                    if a[k, i] == 0:
                        continue
                    rows[k * d2 + j][r] += a[k, i]
                for l in range(d2):
                    if b[l, j] == 0:
                        continue
                    rows[i * d2 + l][r] += b[l, j]
        mats.append(Matrix(rows, ncols=dim))
    return LieModule(m1.algebra, mats)


def sym_power_module(m, p):
    """p-th symmetric power, basis = sorted index multisets."""
    basis = list(itertools.combinations_with_replacement(range(m.dim), p))
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    mats = []
    for x in range(m.algebra.dim):
        a = m.action[x]
        rows = [[Q0] * dim for _ in range(dim)]
        for col, mono in enumerate(basis):
            for pos in range(p):
                i = mono[pos]
                for k in range(m.dim):
                    if a[k, i] == 0:
                        continue
                    new = tuple(sorted(mono[:pos] + (k,) + mono[pos + 1:]))
                    rows[index[new]][col] += a[k, i]
        mats.append(Matrix(rows, ncols=dim))
    return LieModule(m.algebra, mats)


def ext_power_module(m, p):
    """p-th exterior power, basis = strictly increasing index tuples."""
    basis = list(itertools.combinations(range(m.dim), p))
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    mats = []
    for x in range(m.algebra.dim):
        a = m.action[x]
        rows = [[Q0] * dim for _ in range(dim)]
        for col, mono in enumerate(basis):
            for pos in range(p):
                i = mono[pos]
                for k in range(m.dim):
                    if a[k, i] == 0 or k in mono[:pos] + mono[pos + 1:]:
                        continue
                    word = mono[:pos] + (k,) + mono[pos + 1:]
                    srt = tuple(sorted(word))
                    sgn = _sort_sign(word)
                    rows[index[srt]][col] += sgn * a[k, i]
        mats.append(Matrix(rows, ncols=dim))
    return LieModule(m.algebra, mats)


def _sort_sign(word):
    sgn = 1
    w = list(word)
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sgn = -sgn
    return sgn


def e_lambda(n, lam, g=None):
    """One-dimensional gl_n module with g . a = -lam (Tr g) a."""
    g = g or gl(n)
    lam = frac(lam)
    mats = []
    for i in range(n):
        for j in range(n):
            mats.append(Matrix([[-lam if i == j else Q0]], ncols=1))
    return LieModule(g, mats)


def natural_gl_module(g, n):
    """Column vectors under gl(n): pi(e_ij) = E_ij."""
    mats = []
    for i in range(n):
        for j in range(n):
            rows = [[Q0] * n for _ in range(n)]
            rows[i][j] = Q1
            mats.append(Matrix(rows, ncols=n))
    return LieModule(g, mats)


def sl2_natural(g=None):
    g = g or sl2()
    # h, e, f in the 2-dim natural representation
    return LieModule(g, [Matrix([[1, 0], [0, -1]]),
                         Matrix([[0, 1], [0, 0]]),
                         Matrix([[0, 0], [1, 0]])])


def sl2_irrep(n, g=None):
    """Irreducible sl2 module of dimension n+1 (symmetric power of natural)."""
    g = g or sl2()
    return sym_power_module(sl2_natural(g), n)


def restrict_module(m, h, h_vectors):
    """Restrict a g-module to a subalgebra h given by vectors in g-coordinates.

    ``h`` must be the LieAlgebra with structure constants matching the given
    spanning vectors (checked).
    """
    if len(h_vectors) != h.dim:
        raise DimensionMismatch("need one spanning vector per basis element of h")
    g = m.algebra
    for a in range(h.dim):
        for b in range(h.dim):
            got = g.bracket_vectors(h_vectors[a], h_vectors[b])
            want = [Q0] * g.dim
            for k, c in h.bracket(a, b).items():
                want = [w + c * x for w, x in zip(want, h_vectors[k])]
            if list(got) != want:
                raise ValidationError("subalgebra-constants", witness=(a, b))
    mats = []
    for v in h_vectors:
        acc = Matrix.zeros(m.dim, m.dim)
        for i, c in enumerate(v):
            if c != 0:
                acc = acc + m.action[i].scale(c)
        mats.append(acc)
    return LieModule(h, mats)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def algebra_to_json(g):
    brackets = []
    for (i, j), terms in sorted(g.brackets.items()):
        brackets.append({
            "i": g.basis_names[i],
            "j": g.basis_names[j],
            "terms": [{"k": g.basis_names[k], "coeff": frac_str(v)}
                      for k, v in sorted(terms.items())],
        })
    return {"dim": g.dim, "basis": list(g.basis_names), "brackets": brackets}


def algebra_from_json(data):
    dim = data["dim"]
    names = data["basis"]
    if len(names) != dim:
        raise ValidationError("schema", detail="basis length != dim")
    pos = {n: i for i, n in enumerate(names)}
    triples = []
    for b in data.get("brackets", []):
        i, j = pos.get(b["i"]), pos.get(b["j"])
        if i is None or j is None:
            raise ValidationError("schema", detail="unknown basis name in bracket")
        terms = {}
        for t in b["terms"]:
            k = pos.get(t["k"])
            if k is None:
                raise ValidationError("schema", detail="unknown basis name %r" % t["k"])
            terms[k] = frac(t["coeff"])
        triples.append((i, j, terms))
    return lie_from_constants(dim, triples, basis_names=names)


def module_to_json(m):
    return {"dim": m.dim,
            "action": [[[frac_str(x) for x in row] for row in a.rows]
                       for a in m.action]}


def module_from_json(data, algebra):
    dim = data["dim"]
    mats = []
    for a in data["action"]:
        mats.append(Matrix([[frac(x) for x in row] for row in a], ncols=dim))
    return LieModule(algebra, mats)


def assoc_to_json(a):
    return {"dim": a.dim,
            "basis": list(a.basis_names),
            "mult": [[[frac_str(x) for x in vec] for vec in row] for row in a.mult],
            "unit": [frac_str(x) for x in a.unit],
            **({"grading": list(a.grading)} if a.grading is not None else {})}


def assoc_from_json(data):
    return AssocAlgebra(data["dim"], data["mult"], data["unit"],
                        grading=data.get("grading"),
                        basis_names=data.get("basis"))


def load_json(path):
    with open(path) as f:
        return json.load(f)
