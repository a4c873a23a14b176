"""Gerstenhaber-algebra checking, Schouten extensions, the Moyal star
product on polynomial phase space, Maurer-Cartan verification with one-step
perturbative extension, and first-order associative deformations.

Sign conventions: the graded Jacobi identity is the three-term cyclic sum
with prefactors (-1)^{(|a|+1)(|c|+1)}, and the Leibniz compatibility is

    [a . b ^ c] = [a . b] ^ c + (-1)^{(|a|+1)|b|} b ^ [a . c]

(the exponent (|a|+1)|b|; the Schouten extension of a Lie bracket passes all
axioms under this reading, which is the criterion used to fix it).
"""

import itertools
from fractions import Fraction
from math import factorial

from .errors import CapExceeded, DimensionMismatch, ValidationError
from .exactlin import Matrix, Subspace, Q0, Q1, image, kernel, solve
from . import hochschild as hoch
from . import structures as st


class GradedBracketAlgebra:
    """Finite graded algebra with wedge and bracket tensors and optional d.

    wedge[i][j] and bracket[i][j] are coefficient vectors over the basis;
    differential (if present) is a matrix raising degree by one.
    """

    def __init__(self, degrees, wedge, bracket, differential=None):
        self.degrees = tuple(degrees)
        self.dim = len(self.degrees)
        self.wedge = wedge
        self.bracket = bracket
        self.d = differential
        if self.dim > 32:
            raise CapExceeded("graded bracket algebra cap", "dim <= 32")

    def deg(self, i):
        return self.degrees[i]

    def wedge_vec(self, u, v):
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                for k, c in enumerate(self.wedge[i][j]):
                    if c != 0:
                        out[k] += a * b * c
        return out

    def bracket_vec(self, u, v):
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                for k, c in enumerate(self.bracket[i][j]):
                    if c != 0:
                        out[k] += a * b * c
        return out

    def basis_vec(self, i):
        return [Q1 if j == i else Q0 for j in range(self.dim)]


def gerstenhaber_check(alg):
    """Exhaustive axiom check on basis triples; failures carry witnesses."""
    n = alg.dim
    report = {"ok": True, "failures": []}

    def fail(tag, witness):
        report["ok"] = False
        report["failures"].append((tag, witness))

    for i in range(n):
        for j in range(n):
            # graded commutativity of wedge
            lhs = alg.wedge[j][i]
            sgn = (-1) ** (alg.deg(i) * alg.deg(j))
            rhs = [sgn * x for x in alg.wedge[i][j]]
            if list(lhs) != rhs:
                fail("wedge-graded-commutative", (i, j))
            # degree bookkeeping
            for k, c in enumerate(alg.wedge[i][j]):
                if c != 0 and alg.deg(k) != alg.deg(i) + alg.deg(j):
                    fail("wedge-degree", (i, j, k))
            for k, c in enumerate(alg.bracket[i][j]):
                if c != 0 and alg.deg(k) != alg.deg(i) + alg.deg(j) - 1:
                    fail("bracket-degree", (i, j, k))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = alg.wedge_vec(alg.wedge[i][j], alg.basis_vec(k))
                right = alg.wedge_vec(alg.basis_vec(i), alg.wedge[j][k])
                if left != right:
                    fail("wedge-associative", (i, j, k))
                # graded Jacobi, cyclic with (-1)^{(|a|+1)(|c|+1)}
                total = [Q0] * n
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    sgn = (-1) ** ((alg.deg(a) + 1) * (alg.deg(c) + 1))
                    term = alg.bracket_vec(alg.bracket[a][b], alg.basis_vec(c))
                    total = [x + sgn * y for x, y in zip(total, term)]
                if any(x != 0 for x in total):
                    fail("graded-jacobi", (i, j, k))
                # Leibniz compatibility
                lhs = alg.bracket_vec(alg.basis_vec(i), alg.wedge[j][k])
                rhs = alg.wedge_vec(alg.bracket[i][j], alg.basis_vec(k))
                sgn = (-1) ** ((alg.deg(i) + 1) * alg.deg(j))
                term = alg.wedge_vec(alg.basis_vec(j), alg.bracket[i][k])
                rhs = [x + sgn * y for x, y in zip(rhs, term)]
                if lhs != rhs:
                    fail("leibniz", (i, j, k))
    if alg.d is not None:
        dd = alg.d * alg.d
        if not dd.is_zero():
            fail("d-squared", None)
        for i in range(n):
            for j in range(n):
                lhs = alg.d.mulvec(alg.wedge[i][j])
                rhs = alg.wedge_vec(alg.d.mulvec(alg.basis_vec(i)),
                                    alg.basis_vec(j))
                sgn = (-1) ** alg.deg(i)
                term = alg.wedge_vec(alg.basis_vec(i),
                                     alg.d.mulvec(alg.basis_vec(j)))
                rhs = [x + sgn * y for x, y in zip(rhs, term)]
                if list(lhs) != rhs:
                    fail("d-wedge-leibniz", (i, j))
                lhs = alg.d.mulvec(alg.bracket[i][j])
                rhs = alg.bracket_vec(alg.d.mulvec(alg.basis_vec(i)),
                                      alg.basis_vec(j))
                sgn = (-1) ** (alg.deg(i) + 1)
                term = alg.bracket_vec(alg.basis_vec(i),
                                       alg.d.mulvec(alg.basis_vec(j)))
                rhs = [x + sgn * y for x, y in zip(rhs, term)]
                if list(lhs) != rhs:
                    fail("d-bracket-leibniz", (i, j))
    return report


# ---------------------------------------------------------------------------
# Schouten extension
# ---------------------------------------------------------------------------

def schouten_extend(g):
    """Lambda^* g with the Schouten bracket extending the Lie bracket.

    Built from the generators by the Leibniz axiom in the second slot and
    graded antisymmetry [a.b] = -(-1)^{(|a|+1)(|b|+1)} [b.a] in the first;
    the result passes gerstenhaber_check.
    """
    if g.dim > 4:
        raise CapExceeded("schouten cap", "dim <= 4")
    n = g.dim
    basis = [tuple(c) for k in range(n + 1)
             for c in itertools.combinations(range(n), k)]
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    degrees = [len(b) for b in basis]

    def wedge_mono(s, t):
        if set(s) & set(t):
            return None
        inv = sum(1 for x in s for y in t if y < x)
        return ((-1) ** inv, tuple(sorted(s + t)))

    wedge = [[[Q0] * dim for _ in range(dim)] for _ in range(dim)]
    for i, s in enumerate(basis):
        for j, t in enumerate(basis):
            r = wedge_mono(s, t)
            if r is not None:
                sgn, merged = r
                wedge[i][j][index[merged]] = Fraction(sgn)

    memo = {}

    def wedge_elem(e1, e2):
        out = {}
        for s, a in e1.items():
            for t, b in e2.items():
                r = wedge_mono(s, t)
                if r is None:
                    continue
                sgn, merged = r
                out[merged] = out.get(merged, Q0) + sgn * a * b
        return {k: v for k, v in out.items() if v != 0}

    def sch(s, t):
        key = (s, t)
        if key in memo:
            return memo[key]
        if len(s) == 0 or len(t) == 0:
            out = {}
        elif len(s) == 1 and len(t) == 1:
            out = {(k,): c for k, c in g.bracket(s[0], t[0]).items()}
        elif len(t) > 1:
            # [s . t0 ^ rest] = [s . t0] ^ rest + (-1)^{(|s|+1)} t0 ^ [s . rest]
            t0, rest = (t[0],), t[1:]
            out = wedge_elem(sch(s, t0), {rest: Q1})
            sgn = (-1) ** ((len(s) + 1) * 1)
            for k, v in wedge_elem({t0: Q1}, sch(s, rest)).items():
                out[k] = out.get(k, Q0) + sgn * v
            out = {k: v for k, v in out.items() if v != 0}
        else:
            # extend in the first argument by graded antisymmetry
            sgn = -((-1) ** ((len(s) + 1) * (len(t) + 1)))
            out = {k: sgn * v for k, v in sch(t, s).items()}
        memo[key] = out
        return out

    bracket = [[[Q0] * dim for _ in range(dim)] for _ in range(dim)]
    for i, s in enumerate(basis):
        for j, t in enumerate(basis):
            for k, v in sch(s, t).items():
                bracket[i][j][index[k]] = v
    alg = GradedBracketAlgebra(degrees, wedge, bracket)
    alg.basis = basis
    return alg


# ---------------------------------------------------------------------------
# Moyal star product on polynomials in p_1..p_n, q_1..q_n
# ---------------------------------------------------------------------------

class PhaseSpace:
    """Exact polynomial phase space with caps on total degree and eps order."""

    def __init__(self, n, deg_cap=8, eps_cap=None):
        self.n = n
        self.deg_cap = deg_cap
        self.eps_cap = eps_cap

    def zero(self):
        return {}

    def monomial(self, p_exps, q_exps, eps=0, coeff=1):
        key = (eps, tuple(p_exps), tuple(q_exps))
        self._check_degree(key)
        return {key: Fraction(coeff)}

    def _check_degree(self, key):
        _, pe, qe = key
        if sum(pe) + sum(qe) > self.deg_cap:
            raise CapExceeded("phase-space degree cap",
                              "degree %d > %d" % (sum(pe) + sum(qe), self.deg_cap))

    def degree(self, f):
        return max((sum(pe) + sum(qe) for (_e, pe, qe) in f), default=0)

    def add(self, f, g, scale=1):
        out = dict(f)
        for k, v in g.items():
            out[k] = out.get(k, Q0) + Fraction(scale) * v
            if out[k] == 0:
                del out[k]
        return out

    def mul(self, f, g):
        if self.degree(f) + self.degree(g) > self.deg_cap:
            raise CapExceeded("phase-space degree cap",
                              "product degree %d > %d"
                              % (self.degree(f) + self.degree(g), self.deg_cap))
        out = {}
        for (e1, p1, q1), a in f.items():
            for (e2, p2, q2), b in g.items():
                e = e1 + e2
                if self.eps_cap is not None and e > self.eps_cap:
                    continue
                key = (e, tuple(x + y for x, y in zip(p1, p2)),
                       tuple(x + y for x, y in zip(q1, q2)))
                out[key] = out.get(key, Q0) + a * b
                if out[key] == 0:
                    del out[key]
        return out

    def _diff(self, f, which, i):
        out = {}
        for (e, pe, qe), c in f.items():
            exps = pe if which == "p" else qe
            if exps[i] == 0:
                continue
            new = list(exps)
            new[i] -= 1
            key = (e, tuple(new), qe) if which == "p" else (e, pe, tuple(new))
            out[key] = out.get(key, Q0) + c * exps[i]
        return out

    def _alpha(self, pairs):
        """Apply the Poisson bivector to a tensor {(key_f, key_g): coeff}."""
        out = {}
        for (kf, kg), c in pairs.items():
            f1 = {kf: c}
            g1 = {kg: Q1}
            for i in range(self.n):
                for (df, dg, sgn) in ((self._diff(f1, "p", i),
                                       self._diff(g1, "q", i), Fraction(1, 2)),
                                      (self._diff(f1, "q", i),
                                       self._diff(g1, "p", i), Fraction(-1, 2))):
                    for kf2, a in df.items():
                        for kg2, b in dg.items():
                            key = (kf2, kg2)
                            out[key] = out.get(key, Q0) + sgn * a * b
                            if out[key] == 0:
                                del out[key]
        return out

    def moyal(self, f, g):
        """f * g = m(exp(eps alpha)(f (x) g)), exact (the series terminates);
        eps orders beyond eps_cap are dropped exactly at the cap."""
        if self.degree(f) + self.degree(g) > self.deg_cap:
            raise CapExceeded("phase-space degree cap",
                              "product degree %d > %d"
                              % (self.degree(f) + self.degree(g), self.deg_cap))
        pairs = {}
        for kf, a in f.items():
            for kg, b in g.items():
                pairs[(kf, kg)] = pairs.get((kf, kg), Q0) + a * b
        out = {}
        k = 0
        while pairs:
            scale = Fraction(1, factorial(k))
            for (kf, kg), c in pairs.items():
                e = kf[0] + kg[0] + k
                if self.eps_cap is not None and e > self.eps_cap:
                    continue
                key = (e, tuple(x + y for x, y in zip(kf[1], kg[1])),
                       tuple(x + y for x, y in zip(kf[2], kg[2])))
                out[key] = out.get(key, Q0) + scale * c
                if out[key] == 0:
                    del out[key]
            pairs = self._alpha(pairs)
            k += 1
            if k > 2 * self.deg_cap + 2:
                raise ValidationError("moyal-nontermination")
        return out

    def poisson(self, f, g):
        """{f, g}: the eps^1 coefficient of the star commutator (f, g eps-free)."""
        if any(k[0] != 0 for k in list(f) + list(g)):
            raise ValidationError("poisson-needs-eps-free-input")
        comm = self.add(self.moyal(f, g), self.moyal(g, f), scale=-1)
        out = {}
        for (e, pe, qe), c in comm.items():
            if e == 1:
                out[(0, pe, qe)] = c
        return out

    def poisson_direct(self, f, g):
        """sum_i (d_p f d_q g - d_q f d_p g), the classical formula."""
        out = {}
        for i in range(self.n):
            for (sgn, a, b) in ((1, self._diff(f, "p", i), self._diff(g, "q", i)),
                                (-1, self._diff(f, "q", i), self._diff(g, "p", i))):
                prod = self.mul(a, b)
                out = self.add(out, prod, scale=sgn)
        return out


def moyal_associativity(n, mono_deg, eps_cap=None, deg_cap=None):
    """(f*g)*h = f*(g*h) for every monomial triple of degree <= mono_deg."""
    space = PhaseSpace(n, deg_cap=deg_cap if deg_cap else 3 * mono_deg + 2,
                       eps_cap=eps_cap)
    mons = []
    for total in range(mono_deg + 1):
        for p_part in itertools.product(range(total + 1), repeat=n):
            for q_part in itertools.product(range(total + 1), repeat=n):
                if sum(p_part) + sum(q_part) == total:
                    mons.append((p_part, q_part))
    checked = 0
    for (p1, q1), (p2, q2), (p3, q3) in itertools.product(mons, repeat=3):
        f = space.monomial(p1, q1)
        g = space.monomial(p2, q2)
        h = space.monomial(p3, q3)
        lhs = space.moyal(space.moyal(f, g), h)
        rhs = space.moyal(f, space.moyal(g, h))
        if lhs != rhs:
            return {"ok": False, "witness": ((p1, q1), (p2, q2), (p3, q3)),
                    "checked": checked}
        checked += 1
    return {"ok": True, "checked": checked}


# ---------------------------------------------------------------------------
# Maurer-Cartan
# ---------------------------------------------------------------------------

def maurer_cartan_check(alg, zeta):
    """d zeta + (1/2) [zeta . zeta] = 0, exactly."""
    if alg.d is None:
        raise DimensionMismatch("needs a differential")
    br = alg.bracket_vec(zeta, zeta)
    total = [x + Fraction(1, 2) * y for x, y in zip(alg.d.mulvec(zeta), br)]
    return all(x == 0 for x in total)


def perturbative_extend(alg, zeta1):
    """Solve d zeta2 = -(1/2)[zeta1 . zeta1].

    zeta1 must be d-closed (reported otherwise).  Returns
    ("solution", zeta2) with a canonical particular solution, or
    ("obstruction", rep) with the d-closed obstruction representative.
    """
    if alg.d is None:
        raise DimensionMismatch("needs a differential")
    if any(x != 0 for x in alg.d.mulvec(zeta1)):
        raise ValidationError("leading-term-not-closed")
    rhs = [Fraction(-1, 2) * x for x in alg.bracket_vec(zeta1, zeta1)]
    sol = solve(alg.d, rhs)
    if sol is not None:
        return ("solution", list(sol))
    # canonical obstruction representative: reduce rhs against im(d)
    im = image(alg.d)
    red = list(rhs)
    for row in im.basis.rows:
        piv = next(j for j, x in enumerate(row) if x != 0)
        if red[piv] != 0:
            c = red[piv]
            red = [x - c * y for x, y in zip(red, row)]
    if any(x != 0 for x in alg.d.mulvec(red)):
        raise ValidationError("obstruction-not-closed")
    return ("obstruction", red)


# ---------------------------------------------------------------------------
# First-order deformation of an associative product
# ---------------------------------------------------------------------------

def first_order_deformation(a, f):
    """Deform a o b = ab + t f(a,b); report how far associativity persists.

    order = 0: fails at t^1 (witness triple);
    order = 1: holds through t^1 but fails at t^2;
    order = "exact": the deformed product is associative for every t.
    Cross-checked: order >= 1 iff d_Hoch f = 0.  When f is a coboundary the
    deformation is flagged as trivial up to isomorphism.
    """
    d = a.dim
    order1_defect = None
    order2_defect = None
    for i, j, k in itertools.product(range(d), repeat=3):
        fij = hoch.evaluate(a, f, 2, (i, j))
        fjk = hoch.evaluate(a, f, 2, (j, k))
        t1 = list(a.mul(fij, a._basis_vec(k)))
        for m, c in enumerate(a.mul_basis(i, j)):
            if c != 0:
                v = hoch.evaluate(a, f, 2, (m, k))
                t1 = [x + c * y for x, y in zip(t1, v)]
        for m, c in enumerate(a.mul_basis(j, k)):
            if c != 0:
                v = hoch.evaluate(a, f, 2, (i, m))
                t1 = [x - c * y for x, y in zip(t1, v)]
        t1 = [x - y for x, y in zip(t1, a.mul(a._basis_vec(i), fjk))]
        if any(x != 0 for x in t1) and order1_defect is None:
            order1_defect = (i, j, k)
        # t^2 term: f(f(a,b), c) - f(a, f(b,c))
        t2 = [Q0] * d
        for m, c in enumerate(fij):
            if c != 0:
                v = hoch.evaluate(a, f, 2, (m, k))
                t2 = [x + c * y for x, y in zip(t2, v)]
        for m, c in enumerate(fjk):
            if c != 0:
                v = hoch.evaluate(a, f, 2, (i, m))
                t2 = [x - c * y for x, y in zip(t2, v)]
        if any(x != 0 for x in t2) and order2_defect is None:
            order2_defect = (i, j, k)
    cocycle = all(x == 0 for x in hoch.d_hoch(a, f, 2))
    if cocycle != (order1_defect is None):
        raise ValidationError("deformation-criteria-disagree")
    if order1_defect is not None:
        order = 0
    elif order2_defect is not None:
        order = 1
    else:
        order = "exact"
    d1 = hoch.d_hoch_matrix(a, 1)
    trivial = solve(d1, f) is not None
    return {"order": order, "witness": order1_defect or order2_defect,
            "cocycle": cocycle, "trivial_up_to_iso": trivial}
