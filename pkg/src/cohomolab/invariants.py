"""gl_n invariant theory on tensor modules: the permutation tensors c_sigma,
the alternating relation at k = n + 1, brute-force invariant dimensions by
exact nullspace computation, and the Psi_r elements.

A tensor in V'^{(x)k} (x) V^{(x)l} is addressed by a mixed-radix multi-index
with the V-slots (covector arguments beta) before the V'-slots (vector
arguments alpha); gl_n acts by the matrix units on V-slots and by minus the
transposed units on V'-slots.  Invariance is always decided by the exact
nullspace, never symbolically, so these computations double as oracles for
the statements they realise.
"""

import itertools
from fractions import Fraction

from .errors import CapExceeded, DimensionMismatch
from .exactlin import Matrix, Subspace, Q0, Q1, kernel, rank, vstack

INVARIANT_DIM_CAP = 4096


class TensorSpace:
    """V'^{(x)k} (x) V^{(x)l} over gl_n with its action matrices.

    Index layout: (v_1..v_l, w_1..w_k) flattened mixed-radix base n, V-slots
    first.  slot_kinds records "V" or "V'" per position.
    """

    def __init__(self, n, k, l):
        self.n = n
        self.k = k
        self.l = l
        self.slots = ["V"] * l + ["V'"] * k
        self.dim = n ** (k + l)
        if self.dim > INVARIANT_DIM_CAP:
            raise CapExceeded("tensor space cap",
                              "dim %d > %d" % (self.dim, INVARIANT_DIM_CAP))

    def index(self, multi):
        pos = 0
        for x in multi:
            pos = pos * self.n + x
        return pos

    def multis(self):
        return itertools.product(range(self.n), repeat=len(self.slots))

    def action_matrix(self, p, q):
        """pi(e_pq): sum over slots of E_pq on V-slots, -E_qp on V'-slots."""
        rows = [[Q0] * self.dim for _ in range(self.dim)]
        for multi in self.multis():
            col = self.index(multi)
            for s, kind in enumerate(self.slots):
                x = multi[s]
                if kind == "V":
                    # E_pq e_x = delta_{qx} e_p
                    if x == q:
                        new = multi[:s] + (p,) + multi[s + 1:]
                        rows[self.index(new)][col] += Q1
                else:
                    # on V': -(E_pq)^T = -E_qp acting on covector basis
                    if x == p:
                        new = multi[:s] + (q,) + multi[s + 1:]
                        rows[self.index(new)][col] -= Q1
        return Matrix(rows, ncols=self.dim)

    def all_actions(self):
        return [self.action_matrix(p, q)
                for p in range(self.n) for q in range(self.n)]

    def invariants(self):
        mats = [m for m in self.all_actions() if not m.is_zero()]
        if not mats:
            return Subspace.full(self.dim)
        return kernel(vstack(mats))


def c_sigma(sigma, n, max_k=4, max_n=3):
    """The permutation tensor: on basis arguments,
    c_sigma(alpha_1..alpha_k; beta_1..beta_k) = prod_i beta_i(alpha_sigma(i))."""
    k = len(sigma)
    if k > max_k or n > max_n:
        raise CapExceeded("c_sigma caps", "k <= %d, n <= %d" % (max_k, max_n))
    space = TensorSpace(n, k, k)
    vec = [Q0] * space.dim
    # multi = (b_1..b_k  [V-slots, the beta arguments], a_1..a_k [V'-slots])
    for multi in space.multis():
        b = multi[:k]
        a = multi[k:]
        if all(b[i] == a[sigma[i]] for i in range(k)):
            vec[space.index(multi)] = Q1
    return space, vec


def invariant_dim(n, k, l):
    """dim Inv(V'^{(x)k} (x) V^{(x)l}) by exact joint-nullspace computation."""
    return TensorSpace(n, k, l).invariants().dim


def is_invariant(space, vec):
    return all(all(x == 0 for x in m.mulvec(vec)) for m in space.all_actions())


def relation_check(n):
    """sum_{sigma in S_{n+1}} sgn(sigma) c_sigma = 0 coordinatewise; and for
    k <= n the c_sigma are linearly independent (rank = k!)."""
    if n > 3:
        raise CapExceeded("relation cap", "n <= 3")
    k = n + 1
    space = TensorSpace(n, k, k)
    total = [Q0] * space.dim
    for sigma in itertools.permutations(range(k)):
        _, vec = c_sigma(sigma, n)
        sgn = _perm_sign(sigma)
        total = [x + sgn * y for x, y in zip(total, vec)]
    relation_holds = all(x == 0 for x in total)
    independence = {}
    for kk in range(1, n + 1):
        vecs = [c_sigma(sigma, n)[1]
                for sigma in itertools.permutations(range(kk))]
        got = rank(Matrix(vecs, ncols=n ** (2 * kk)))
        independence[kk] = (got, len(vecs), got == len(vecs))
    return {"relation_holds": relation_holds,
            "independence": independence,
            "ok": relation_holds and all(v[2] for v in independence.values())}


def _perm_sign(p):
    sgn = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


# ---------------------------------------------------------------------------
# Psi_r
# ---------------------------------------------------------------------------

class PsiSpace:
    """Lambda^r V' (x) Lambda^r (S^2 V (x) V'): arguments are
    alpha_1..alpha_r (vectors) and groups (beta^1_i, beta^2_i, alpha_i) for
    i = r+1..2r (two covectors and a vector per group).

    Index layout: (a_1..a_r, then per group c1_i, c2_i, a_i), base n.
    """

    def __init__(self, r, n):
        if r > 2 or n > 2:
            raise CapExceeded("psi caps", "r <= 2, n <= 2")
        self.r = r
        self.n = n
        self.slots = ["V'"] * r
        for _ in range(r):
            self.slots += ["V", "V", "V'"]  # beta1, beta2 (covector args -> V slots), alpha
        self.dim = n ** len(self.slots)

    def index(self, multi):
        pos = 0
        for x in multi:
            pos = pos * self.n + x
        return pos

    def multis(self):
        return itertools.product(range(self.n), repeat=len(self.slots))

    def action_matrix(self, p, q):
        rows = [[Q0] * self.dim for _ in range(self.dim)]
        for multi in self.multis():
            col = self.index(multi)
            for s, kind in enumerate(self.slots):
                x = multi[s]
                if kind == "V":
                    if x == q:
                        new = multi[:s] + (p,) + multi[s + 1:]
                        rows[self.index(new)][col] += Q1
                else:
                    if x == p:
                        new = multi[:s] + (q,) + multi[s + 1:]
                        rows[self.index(new)][col] -= Q1
        return Matrix(rows, ncols=self.dim)

    def all_actions(self):
        return [self.action_matrix(p, q)
                for p in range(self.n) for q in range(self.n)]


def psi_r(r, n):
    """The invariant element Psi_r as a coordinate tensor.

    Psi_r = sum over sigma, tau in S_r and nu_1..nu_r in S_2 of
    sgn(sigma) sgn(tau) prod_j beta^{nu_j(1)}_{r+tau(j)}(alpha_{sigma(j)})
    beta^{nu_j(2)}_{r+tau(j)}(alpha_{r+tau(j-1)}),  tau(0) = tau(r).

    (The printed display indexes the beta groups as r+1..2r; the structurally
    coherent reading with that group indexing is implemented.)
    """
    space = PsiSpace(r, n)
    vec = [Q0] * space.dim
    for multi in space.multis():
        a = multi[:r]
        groups = [multi[r + 3 * i: r + 3 * i + 3] for i in range(r)]
        total = Q0
        for sigma in itertools.permutations(range(r)):
            ss = _perm_sign(sigma)
            for tau in itertools.permutations(range(r)):
                ts = _perm_sign(tau)
                for nus in itertools.product((0, 1), repeat=r):
                    prod_ok = True
                    for j in range(r):
                        g = groups[tau[j]]
                        beta1 = g[nus[j]]
                        beta2 = g[1 - nus[j]]
                        alpha2_index = tau[j - 1] if j >= 1 else tau[r - 1]
                        alpha2 = groups[alpha2_index][2]
                        if beta1 != a[sigma[j]] or beta2 != alpha2:
                            prod_ok = False
                            break
                    if prod_ok:
                        total += ss * ts
        vec[space.index(multi)] = total
    invariant = all(all(x == 0 for x in m.mulvec(vec))
                    for m in space.all_actions())
    return space, vec, invariant


def psi_symmetry_checks(r, n):
    """(i) antisymmetry in the alpha block; (ii) antisymmetry under swapping
    whole groups; plus symmetry in beta^1 <-> beta^2 within a group."""
    space, vec, _ = psi_r(r, n)
    report = {"ok": True}
    if r < 2:
        report["note"] = "permutation checks need r >= 2"
        # beta symmetry still meaningful for r = 1
    # beta1 <-> beta2 of the first group
    swapped = [Q0] * space.dim
    for multi in space.multis():
        g0 = space.index(multi)
        m2 = list(multi)
        m2[r], m2[r + 1] = m2[r + 1], m2[r]
        swapped[g0] = vec[space.index(tuple(m2))]
    report["beta_symmetric"] = swapped == vec
    report["ok"] = report["ok"] and report["beta_symmetric"]
    if r >= 2:
        # (i) alpha_1 <-> alpha_2
        sw = [Q0] * space.dim
        for multi in space.multis():
            m2 = (multi[1], multi[0]) + multi[2:]
            sw[space.index(multi)] = vec[space.index(m2)]
        report["alpha_antisymmetric"] = sw == [-x for x in vec]
        # (ii) swap group 1 and group 2 blocks
        sw = [Q0] * space.dim
        for multi in space.multis():
            m2 = multi[:r] + multi[r + 3: r + 6] + multi[r: r + 3]
            sw[space.index(multi)] = vec[space.index(m2)]
        report["group_antisymmetric"] = sw == [-x for x in vec]
        report["ok"] = (report["ok"] and report["alpha_antisymmetric"]
                        and report["group_antisymmetric"])
    return report
