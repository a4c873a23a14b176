"""Weyl DG-algebras, relative Weyl algebras, their standard filtration,
acyclicity, page formulas, and truncated quotients.

W(h) = Lambda h* (x) S h* with homological degrees 1 (exterior generators
l_a) and 2 (symmetric generators s_a).  The differential d = d1 + d2 is fixed
on generators and extended by the graded Leibniz rule:

    d1 l_a = - sum_{i<j} c_ij^a l_i l_j        (CE part)
    d1 s_a = - sum_{i,b}  c_ib^a l_i s_b       (coadjoint CE part)
    d2 l_a = s_a,   d2 s_a = 0                 (Koszul part)

The algebra is materialised as the quotient by symmetric degree > cap, i.e.
by the d-stable filtration ideal, so every identity (d1^2 = d2^2 = 0,
d1 d2 + d2 d1 = 0, Leibniz) holds exactly in the quotient.  Within total
degree <= cap the quotient agrees with the untruncated algebra, which is the
truncation-safe window used for acyclicity and page reports.
"""

import itertools
from fractions import Fraction

from .errors import CapExceeded, DimensionMismatch, ValidationError
from .exactlin import (Matrix, Subspace, Q0, Q1, complement_in, coordinates,
                       kernel, preimage, vstack)
from .ce import CochainComplex, exterior_basis, insert_sign
from . import ce as ce_mod
from . import structures as st
from .spectral import FilteredComplex, page


def _sym_monomials(nvars, max_deg):
    out = []
    for d in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            exp = [0] * nvars
            for v in combo:
                exp[v] += 1
            out.append(tuple(exp))
    return out


def mono_mul(i1, m1, i2, m2, cap):
    """Product of two monomials; None if annihilated or past the sym cap."""
    if set(i1) & set(i2):
        return None
    m = tuple(a + b for a, b in zip(m1, m2))
    if sum(m) > cap:
        return None
    inv = sum(1 for x in i1 for y in i2 if y < x)
    return ((-1) ** inv, tuple(sorted(i1 + i2)), m)


class WeylAlgebra:
    """The (cap-truncated) Weyl DG-algebra of a Lie algebra."""

    MAX_DIM = 4
    MAX_CAP = 4

    def __init__(self, h, cap):
        if h.dim > self.MAX_DIM:
            raise CapExceeded("Weyl algebra dimension cap", "dim <= %d" % self.MAX_DIM)
        if cap > self.MAX_CAP:
            raise CapExceeded("Weyl symmetric-degree cap", "cap <= %d" % self.MAX_CAP)
        h.check_jacobi()
        self.h = h
        self.cap = cap
        n = h.dim
        self.top = n + 2 * cap
        mons = _sym_monomials(n, cap)
        self.basis = [[] for _ in range(self.top + 1)]
        for i_t in [tuple(c) for k in range(n + 1)
                    for c in itertools.combinations(range(n), k)]:
            for m in mons:
                q = len(i_t) + 2 * sum(m)
                self.basis[q].append((i_t, m))
        for q in range(self.top + 1):
            self.basis[q].sort()
        self.index = [{b: i for i, b in enumerate(bs)} for bs in self.basis]
        self._dgen_l = self._gen_diff_lambda()
        self._dgen_s = self._gen_diff_s()
        self.d1 = []
        self.d2 = []
        self.d = []
        for q in range(self.top):
            m1, m2 = self._assemble(q)
            self.d1.append(m1)
            self.d2.append(m2)
            self.d.append(m1 + m2)
        self.complex = CochainComplex([len(b) for b in self.basis], self.d,
                                      validate=False)
        self.check_identities()

    # -- generator differentials ------------------------------------------
    def _gen_diff_lambda(self):
        n = self.h.dim
        out = []
        for a in range(n):
            terms = []
            for i in range(n):
                for j in range(i + 1, n):
                    c = self.h.bracket(i, j).get(a)
                    if c:
                        terms.append(("d1", (i, j), tuple([0] * n), -c))
            ea = tuple(1 if k == a else 0 for k in range(n))
            terms.append(("d2", (), ea, Q1))
            out.append(terms)
        return out

    def _gen_diff_s(self):
        n = self.h.dim
        out = []
        for a in range(n):
            terms = []
            for i in range(n):
                for b in range(n):
                    c = self.h.bracket(i, b).get(a)
                    if c:
                        eb = tuple(1 if k == b else 0 for k in range(n))
                        terms.append(("d1", (i,), eb, -c))
            out.append(terms)
        return out

    def d_monomial(self, i_t, m):
        """d of a basis monomial as {('d1'|'d2', (I, m)): coeff}."""
        n = self.h.dim
        out = {}

        def add(tag, key, coeff):
            if coeff == 0:
                return
            k = (tag, key)
            out[k] = out.get(k, Q0) + coeff
            if out[k] == 0:
                del out[k]

        klen = len(i_t)
        for t in range(klen):
            a = i_t[t]
            pre, post = i_t[:t], i_t[t + 1:]
            base = (-1) ** t
            for (tag, j_t, dm, c) in self._dgen_l[a]:
                r1 = mono_mul(pre, tuple([0] * n), j_t, dm, self.cap)
                if r1 is None:
                    continue
                s1, ic, mc = r1
                r2 = mono_mul(ic, mc, post, m, self.cap)
                if r2 is None:
                    continue
                s2, i_new, m_new = r2
                add(tag, (i_new, m_new), base * s1 * s2 * c)
        for a in range(n):
            if m[a] == 0:
                continue
            m_rest = tuple(x - (1 if k == a else 0) for k, x in enumerate(m))
            base = (-1) ** klen * m[a]
            for (tag, j_t, dm, c) in self._dgen_s[a]:
                r1 = mono_mul(i_t, tuple([0] * n), j_t, dm, self.cap)
                if r1 is None:
                    continue
                s1, ic, mc = r1
                r2 = mono_mul(ic, mc, (), m_rest, self.cap)
                if r2 is None:
                    continue
                s2, i_new, m_new = r2
                add(tag, (i_new, m_new), base * s1 * s2 * c)
        return out

    def _assemble(self, q):
        src = self.basis[q]
        tgt_index = self.index[q + 1]
        rows1 = [[Q0] * len(src) for _ in range(len(self.basis[q + 1]))]
        rows2 = [[Q0] * len(src) for _ in range(len(self.basis[q + 1]))]
        for col, (i_t, m) in enumerate(src):
            for (tag, key), c in self.d_monomial(i_t, m).items():
                r = tgt_index[key]
                (rows1 if tag == "d1" else rows2)[r][col] += c
        return (Matrix(rows1, ncols=len(src)), Matrix(rows2, ncols=len(src)))

    # -- identities ---------------------------------------------------------
    def check_identities(self):
        for q in range(self.top - 1):
            if not (self.d1[q + 1] * self.d1[q]).is_zero():
                raise ValidationError("weyl-d1-squared", witness=(q,))
            if not (self.d2[q + 1] * self.d2[q]).is_zero():
                raise ValidationError("weyl-d2-squared", witness=(q,))
            anti = self.d1[q + 1] * self.d2[q] + self.d2[q + 1] * self.d1[q]
            if not anti.is_zero():
                raise ValidationError("weyl-anticommute", witness=(q,))
            if not (self.d[q + 1] * self.d[q]).is_zero():
                raise ValidationError("weyl-d-squared", witness=(q,))

    def leibniz_check(self, rng, samples=30):
        """d(xy) = (dx)y + (-1)^|x| x (dy) on sampled basis monomials."""
        flat = [(q, b) for q in range(self.top + 1) for b in self.basis[q]]
        for _ in range(samples):
            qx, (ix, mx) = flat[rng.randrange(len(flat))]
            qy, (iy, my) = flat[rng.randrange(len(flat))]
            prod = mono_mul(ix, mx, iy, my, self.cap)
            lhs = {}
            if prod is not None:
                sgn, ip, mp = prod
                for key, c in self.d_monomial(ip, mp).items():
                    lhs[key[1]] = lhs.get(key[1], Q0) + sgn * c
            rhs = {}
            for (tag, key), c in self.d_monomial(ix, mx).items():
                r = mono_mul(key[0], key[1], iy, my, self.cap)
                if r is not None:
                    s, i_n, m_n = r
                    rhs[(i_n, m_n)] = rhs.get((i_n, m_n), Q0) + s * c
            for (tag, key), c in self.d_monomial(iy, my).items():
                r = mono_mul(ix, mx, key[0], key[1], self.cap)
                if r is not None:
                    s, i_n, m_n = r
                    rhs[(i_n, m_n)] = rhs.get((i_n, m_n), Q0) + \
                        (-1) ** qx * s * c
            lhs = {k: v for k, v in lhs.items() if v != 0}
            rhs = {k: v for k, v in rhs.items() if v != 0}
            if lhs != rhs:
                return False, ((ix, mx), (iy, my))
        return True, None

    # -- filtration ----------------------------------------------------------
    def filtration(self):
        """F^k = span of monomials with 2|m| >= k (decreasing, d-stable)."""
        chains = []
        for q in range(self.top + 1):
            dim_q = len(self.basis[q])
            chain = [Subspace.full(dim_q)]
            for k in range(1, 2 * self.cap + 2):
                vecs = []
                for i, (i_t, m) in enumerate(self.basis[q]):
                    if 2 * sum(m) >= k:
                        v = [Q0] * dim_q
                        v[i] = Q1
                        vecs.append(v)
                chain.append(Subspace(dim_q, vecs))
            while len(chain) > 1 and chain[-1].dim == 0:
                chain.pop()
            chains.append(chain)
        return FilteredComplex(self.complex, chains)


def weyl(h, cap):
    return WeylAlgebra(h, cap)


def acyclicity(w):
    """H^k = 0 for 1 <= k <= cap and H^0 = base field, inside the safe window."""
    rows = []
    ok = True
    for k in range(0, w.cap + 1):
        dim = w.complex.cohomology_dim(k)
        want = 1 if k == 0 else 0
        rows.append({"degree": k, "dim": dim, "expected": want})
        ok = ok and dim == want
    return {"ok": ok, "rows": rows, "window": w.cap}


def weyl_page_check(w):
    """E_1^{p,q} of the standard filtration versus H^q(h; S^{p/2} h*).

    Cells with p + q <= cap are inside the truncation-safe window; odd p must
    vanish.
    """
    fc = w.filtration()
    e1 = page(fc, 1)
    coad = st.dual_module(st.adjoint_module(w.h))
    cells = []
    ok = True
    for p in range(0, w.cap + 1):
        for q in range(0, w.cap + 1 - p):
            got = e1.dim(p, q)
            if p % 2 == 1:
                want = 0
            else:
                mod = st.sym_power_module(coad, p // 2)
                dims = ce_mod.cohomology(w.h, mod, max_degree=min(q, w.h.dim)).dims
                want = dims[q] if q < len(dims) else 0
            cells.append(((p, q), got, want))
            ok = ok and got == want
    return {"ok": ok, "cells": cells, "window": w.cap}


# ---------------------------------------------------------------------------
# Relative Weyl algebra
# ---------------------------------------------------------------------------

def _contraction_mat(w, q, x_vec):
    """i_X on degree q: sum_t (-1)^t X_{i_t} (I minus i_t, m)."""
    src = w.basis[q]
    tgt_index = w.index[q - 1] if q >= 1 else {}
    rows = [[Q0] * len(src) for _ in range(len(w.basis[q - 1]) if q >= 1 else 0)]
    for col, (i_t, m) in enumerate(src):
        for t, a in enumerate(i_t):
            if x_vec[a] == 0:
                continue
            key = (i_t[:t] + i_t[t + 1:], m)
            rows[tgt_index[key]][col] += (-1) ** t * x_vec[a]
    return Matrix(rows, ncols=len(src))


def _coadjoint_derivation_mat(w, q, x_vec):
    """L_X, the degree-0 derivation acting by the coadjoint action on both
    exterior and symmetric generators."""
    h = w.h
    n = h.dim
    src = w.basis[q]
    idx = w.index[q]
    rows = [[Q0] * len(src) for _ in range(len(src))]

    def coad_coeff(a, b):
        # coefficient of generator b in L_X(generator a)
        total = Q0
        for i, xi in enumerate(x_vec):
            if xi != 0:
                total += -xi * h.bracket(i, b).get(a, Q0)
        return total

    for col, (i_t, m) in enumerate(src):
        for t, a in enumerate(i_t):
            others = i_t[:t] + i_t[t + 1:]
            for b in range(n):
                c = coad_coeff(a, b)
                if c == 0:
                    continue
                sgn, word = insert_sign(b, others)
                if sgn is None:
                    continue
                key = (word, m)
                rows[idx[key]][col] += (-1) ** t * sgn * c
        for a in range(n):
            if m[a] == 0:
                continue
            for b in range(n):
                c = coad_coeff(a, b)
                if c == 0:
                    continue
                m_new = list(m)
                m_new[a] -= 1
                m_new[b] += 1
                key = (i_t, tuple(m_new))
                rows[idx[key]][col] += m[a] * c
    return Matrix(rows, ncols=len(src))


class RelativeWeyl:
    """W(g, h): h-horizontal, h-invariant part of W(g), with restricted d."""

    def __init__(self, g, h_sub, cap):
        if not ce_mod.is_subalgebra(g, h_sub):
            raise ValidationError("not-a-subalgebra")
        self.g = g
        self.h_sub = h_sub
        self.cap = cap
        self.ambient = WeylAlgebra(g, cap)
        w = self.ambient
        self.spaces = []
        for q in range(w.top + 1):
            conds = []
            for x in h_sub.vectors():
                if q >= 1:
                    conds.append(_contraction_mat(w, q, x))
                conds.append(_coadjoint_derivation_mat(w, q, x))
            conds = [m for m in conds if m.nrows > 0]
            if not conds:
                self.spaces.append(Subspace.full(len(w.basis[q])))
            else:
                self.spaces.append(kernel(vstack(conds)))
        self.subcomplex = ce_mod.SubComplex(w.complex, self.spaces)
        self.complex = self.subcomplex.complex

    def dims(self):
        return self.complex.dims

    def cohomology_dims(self, up_to=None):
        return self.complex.cohomology_dims(up_to=up_to)

    def filtration(self):
        """Standard filtration transferred to the relative subalgebra."""
        w = self.ambient
        amb_fc = w.filtration()
        chains = []
        for q in range(w.top + 1):
            space = self.spaces[q]
            incl = Matrix(list(space.vectors()),
                          ncols=len(w.basis[q])).transpose() if space.dim else \
                Matrix.zeros(len(w.basis[q]), 0)
            chain = []
            for k in range(len(amb_fc.filtration[q])):
                fk = amb_fc.F(q, k)
                chain.append(preimage(incl, fk) if space.dim else Subspace.zero(0))
            while len(chain) > 1 and chain[-1].dim == 0:
                chain.pop()
            chains.append(chain)
        return FilteredComplex(self.complex, chains)


def relative_weyl(g, h_sub, cap):
    return RelativeWeyl(g, h_sub, cap)


def relative_page_check(rw):
    """E_1^{p,q} versus H^q(g, h; S^{p/2} g*) (odd p vanishes)."""
    fc = rw.filtration()
    e1 = page(fc, 1)
    coad = st.dual_module(st.adjoint_module(rw.g))
    cells = []
    ok = True
    for p in range(0, rw.cap + 1):
        for q in range(0, rw.cap + 1 - p):
            got = e1.dim(p, q)
            if p % 2 == 1:
                want = 0
            else:
                mod = st.sym_power_module(coad, p // 2)
                rel = ce_mod.relative_complex(rw.g, rw.h_sub, mod,
                                              max_degree=min(q + 1, rw.g.dim))
                dims = rel.complex.cohomology_dims()
                want = dims[q] if q < len(dims) else 0
            cells.append(((p, q), got, want))
            ok = ok and got == want
    return {"ok": ok, "cells": cells}


# ---------------------------------------------------------------------------
# Truncated Weyl algebras
# ---------------------------------------------------------------------------

def quotient_complex(cx, subs):
    """Quotient of a complex by a d-stable subcomplex, with class bases."""
    comps = []
    for n in range(cx.top + 1):
        comps.append(complement_in(subs[n], Subspace.full(cx.dims[n])))
    d = []
    for n in range(cx.top):
        basis = [list(v) for v in comps[n + 1]] + \
                [list(v) for v in subs[n + 1].vectors()]
        cols = []
        for v in comps[n]:
            img = cx.d_out(n).mulvec(v)
            coeff = coordinates(basis, img)
            if coeff is None:
                raise ValidationError("not-d-stable", witness=(n,))
            cols.append(list(coeff[:len(comps[n + 1])]))
        d.append(Matrix(cols, ncols=len(comps[n + 1])).transpose() if cols
                 else Matrix.zeros(len(comps[n + 1]), 0))
    return CochainComplex([len(c) for c in comps], d), comps


def truncated_weyl(w, n_trunc, target_dims=None):
    """Quotient by F^{2 n_trunc + 1}; reports dims, cohomology, and an
    optional dimension comparison against a supplied finite target model."""
    if isinstance(w, RelativeWeyl):
        amb = w.ambient
        subs = []
        for q in range(amb.top + 1):
            space = w.spaces[q]
            fk = _f_level_subspace(amb, q, 2 * n_trunc + 1)
            if space.dim == 0:
                subs.append(Subspace.zero(0))
                continue
            incl = Matrix(list(space.vectors()), ncols=len(amb.basis[q])).transpose()
            subs.append(preimage(incl, fk))
        cx = w.complex
    else:
        subs = [_f_level_subspace(w, q, 2 * n_trunc + 1)
                for q in range(w.top + 1)]
        cx = w.complex
    quot, _ = quotient_complex(cx, subs)
    h_dims = quot.cohomology_dims()
    report = {"dims": quot.dims, "cohomology": h_dims}
    if target_dims is not None:
        pad = max(len(h_dims), len(target_dims))
        lhs = tuple(h_dims) + (0,) * (pad - len(h_dims))
        rhs = tuple(target_dims) + (0,) * (pad - len(target_dims))
        report["target"] = rhs
        report["cohomology_match"] = lhs == rhs
    return quot, report


def _f_level_subspace(w, q, k):
    dim_q = len(w.basis[q])
    vecs = []
    for i, (i_t, m) in enumerate(w.basis[q]):
        if 2 * sum(m) >= k:
            v = [Q0] * dim_q
            v[i] = Q1
            vecs.append(v)
    return Subspace(dim_q, vecs)


def lemma51_generator_count(gbar_dim=1):
    """Upper-bound generator count for the n = 1 relative cochain model.

    Monomials t^{q1} Psi_1^{r1} with q1 + r1 <= 1, tensored with
    Lambda^{q0} Gbar* (x) S^{q1} Gbar*; contributes in degree
    2 r1 + q0 + 2 q1.
    """
    counts = {}
    for r1 in range(0, 2):
        for q1 in range(0, 2 - r1):
            for q0 in range(0, gbar_dim + 1):
                from math import comb
                mult = comb(gbar_dim, q0)
                deg = 2 * r1 + q0 + 2 * q1
                counts[deg] = counts.get(deg, 0) + mult
    return counts
