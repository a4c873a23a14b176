"""Truncated q-series machinery: symmetric/exterior power series S_q and
Lambda_q, Todd-type characteristic classes over nilpotent Chern roots, the
Chern character tower, elliptic-genus prototype products, Patterson-Selberg
and Ruelle spectral functions, and the q-product identity probe.

Two coefficient backends sit behind one series interface: exact polynomials
in nilpotent Chern roots (Fraction coefficients) for the class identities,
and complex floats for the transcendental spectral evaluations.  A NilPoly
with zero generators is a plain scalar, so the scalar case needs no special
casing.
"""

import cmath
import itertools
import math
from fractions import Fraction

from .errors import CapExceeded, DimensionMismatch, ValidationError


def _coerce(a, b):
    if isinstance(a, complex) or isinstance(b, complex):
        fa = complex(float(a)) if isinstance(a, Fraction) else complex(a)
        fb = complex(float(b)) if isinstance(b, Fraction) else complex(b)
        return fa, fb
    return a, b


def _mulc(a, b):
    a, b = _coerce(a, b)
    return a * b


def _addc(a, b):
    a, b = _coerce(a, b)
    return a + b


class NilPoly:
    """Polynomial in nilpotent generators x_1..x_m, truncated at order N
    (monomials of total degree >= N vanish)."""

    def __init__(self, nvars, order, terms=None):
        self.nvars = nvars
        self.order = order
        self.terms = {}
        for k, v in (terms or {}).items():
            if sum(k) < order and v != 0:
                self.terms[tuple(k)] = v

    @classmethod
    def const(cls, nvars, order, c):
        return cls(nvars, order, {tuple([0] * nvars): c})

    @classmethod
    def gen(cls, nvars, order, j, scale=1):
        e = tuple(1 if i == j else 0 for i in range(nvars))
        return cls(nvars, order, {e: Fraction(scale) if not isinstance(scale, complex) else scale})

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get(tuple([0] * self.nvars), 0)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k, 0)
            s = _addc(cur, v)
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return NilPoly(self.nvars, self.order, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return NilPoly(self.nvars, self.order,
                       {k: _mulc(v, c) for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if sum(k) >= self.order:
                    continue
                cur = out.get(k, 0)
                s = _addc(cur, _mulc(v1, v2))
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return NilPoly(self.nvars, self.order, out)

    def inverse(self):
        """Inverse of a unit (nonzero constant term) via the geometric series."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ValidationError("nilpoly-not-a-unit")
        inv0 = Fraction(1) / c0 if isinstance(c0, Fraction) else 1.0 / c0
        n = self - NilPoly.const(self.nvars, self.order, c0)  # nilpotent part
        out = NilPoly.const(self.nvars, self.order, inv0)
        power = NilPoly.const(self.nvars, self.order, 1 if isinstance(c0, Fraction) else complex(1))
        for k in range(1, self.order):
            power = power * n
            if power.is_zero():
                break
            coef = _mulc((-1) ** k, _pow_scalar(inv0, k + 1))
            out = out + power.scale(coef)
        return out

    def __eq__(self, other):
        return (isinstance(other, NilPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def close_to(self, other, tol=1e-9):
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a = self.terms.get(k, 0)
            b = other.terms.get(k, 0)
            a, b = _coerce(a, b)
            if abs(complex(a) - complex(b)) > tol:
                return False
        return True

    def __repr__(self):
        return "NilPoly(%r)" % (self.terms,)


def _pow_scalar(c, k):
    out = c
    for _ in range(k - 1):
        out = _mulc(out, c)
    return out


def nil_exp(nvars, order, exps, scale=1):
    """exp(scale * sum_j exps_j x_j), truncated at the nilpotency order."""
    lin = NilPoly(nvars, order, {})
    for j, e in enumerate(exps):
        if e:
            lin = lin + NilPoly.gen(nvars, order, j, scale=e)
    lin = lin.scale(scale)
    out = NilPoly.const(nvars, order, Fraction(1) if not _has_complex(lin) else complex(1))
    power = out
    for k in range(1, order):
        power = power * lin
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, math.factorial(k)))
    return out


def _has_complex(p):
    return any(isinstance(v, complex) for v in p.terms.values())


class TruncatedSeries:
    """Power series in q (exponents are multiples of 1/step) truncated so
    that only q-powers <= K are retained; coefficients are NilPoly."""

    def __init__(self, nvars, order, cap, coeffs=None, step=1):
        self.nvars = nvars
        self.order = order
        self.cap = cap          # max exponent numerator (in units of 1/step)
        self.step = step
        self.coeffs = [NilPoly(nvars, order, {}) for _ in range(cap + 1)]
        if coeffs:
            for i, c in enumerate(coeffs[:cap + 1]):
                self.coeffs[i] = c

    @classmethod
    def one(cls, nvars, order, cap, step=1):
        s = cls(nvars, order, cap, step=step)
        s.coeffs[0] = NilPoly.const(nvars, order, Fraction(1))
        return s

    def _compat(self, other):
        if (self.nvars, self.order, self.cap, self.step) != \
                (other.nvars, other.order, other.cap, other.step):
            raise DimensionMismatch("series parameters differ")

    def __add__(self, other):
        self._compat(other)
        out = TruncatedSeries(self.nvars, self.order, self.cap, step=self.step)
        out.coeffs = [a + b for a, b in zip(self.coeffs, other.coeffs)]
        return out

    def __sub__(self, other):
        self._compat(other)
        out = TruncatedSeries(self.nvars, self.order, self.cap, step=self.step)
        out.coeffs = [a - b for a, b in zip(self.coeffs, other.coeffs)]
        return out

    def __mul__(self, other):
        self._compat(other)
        out = TruncatedSeries(self.nvars, self.order, self.cap, step=self.step)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.cap:
                    break
                if b.is_zero():
                    continue
                out.coeffs[i + j] = out.coeffs[i + j] + a * b
        return out

    def inverse(self):
        c0 = self.coeffs[0]
        inv0 = c0.inverse()
        out = TruncatedSeries(self.nvars, self.order, self.cap, step=self.step)
        out.coeffs[0] = inv0
        for k in range(1, self.cap + 1):
            acc = NilPoly(self.nvars, self.order, {})
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out.coeffs[k - j]
            out.coeffs[k] = acc.scale(-1) * inv0
        return out

    def substitute_power(self, n):
        """q -> q^n (exponent reindexing)."""
        out = TruncatedSeries(self.nvars, self.order, self.cap, step=self.step)
        for i, c in enumerate(self.coeffs):
            if i * n > self.cap:
                break
            out.coeffs[i * n] = c
        return out

    def rescale_step(self, new_step):
        """Reinterpret on a finer exponent lattice (cap scales along)."""
        if new_step % self.step:
            raise DimensionMismatch("incompatible steps")
        f = new_step // self.step
        out = TruncatedSeries(self.nvars, self.order, self.cap * f, step=new_step)
        for i, c in enumerate(self.coeffs):
            out.coeffs[i * f] = c
        return out

    def is_one(self):
        if not self.coeffs[0] == NilPoly.const(self.nvars, self.order, Fraction(1)):
            return False
        return all(c.is_zero() for c in self.coeffs[1:])

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.cap == other.cap and self.step == other.step
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def close_to(self, other, tol=1e-9):
        return all(a.close_to(b, tol) for a, b in zip(self.coeffs, other.coeffs))


class BundleRoots:
    """Formal Chern roots; complexified bundles contribute pairs +-x_j."""

    def __init__(self, nvars, order, root_exps, complexified=False):
        self.nvars = nvars
        self.order = order
        self.root_exps = [tuple(e) for e in root_exps]
        self.complexified = complexified

    @classmethod
    def standard(cls, m, order, complexified=False):
        roots = [tuple(1 if i == j else 0 for i in range(m)) for j in range(m)]
        return cls(m, order, roots, complexified=complexified)

    def signed_roots(self):
        out = []
        for e in self.root_exps:
            out.append(tuple(e))
            if self.complexified:
                out.append(tuple(-x for x in e))
        return out


# ---------------------------------------------------------------------------
# S_q / Lambda_q
# ---------------------------------------------------------------------------

def s_q(roots, z, cap, step=1):
    """prod_j (1 - z q e^{x_j})^{-1} as a truncated series."""
    out = TruncatedSeries.one(roots.nvars, roots.order, cap, step=step)
    for e in roots.signed_roots():
        factor = TruncatedSeries(roots.nvars, roots.order, cap, step=step)
        ex = nil_exp(roots.nvars, roots.order, e)
        power = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        zc = z
        zpow = 1
        for r in range(0, cap // step + 1):
            factor.coeffs[r * step] = power.scale(zpow)
            power = power * ex
            zpow = _mulc(zpow, zc)
        out = out * factor
    return out


def lambda_q(roots, z, cap, step=1):
    """prod_j (1 + z q e^{x_j})."""
    out = TruncatedSeries.one(roots.nvars, roots.order, cap, step=step)
    for e in roots.signed_roots():
        factor = TruncatedSeries(roots.nvars, roots.order, cap, step=step)
        factor.coeffs[0] = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        if step <= cap:
            factor.coeffs[step] = nil_exp(roots.nvars, roots.order, e).scale(z)
        out = out * factor
    return out


def sym_character(roots, r):
    """h_r(e^{x_1}, ..): the character of Sym^r, by multiset enumeration."""
    sr = roots.signed_roots()
    out = NilPoly(roots.nvars, roots.order, {})
    for combo in itertools.combinations_with_replacement(range(len(sr)), r):
        term = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        for j in combo:
            term = term * nil_exp(roots.nvars, roots.order, sr[j])
        out = out + term
    return out


def alt_character(roots, r):
    """e_r(e^{x_1}, ..): the character of Alt^r."""
    sr = roots.signed_roots()
    out = NilPoly(roots.nvars, roots.order, {})
    for combo in itertools.combinations(range(len(sr)), r):
        term = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        for j in combo:
            term = term * nil_exp(roots.nvars, roots.order, sr[j])
        out = out + term
    return out


def series_inverse_identities(roots, cap):
    """(S_q E)(Lambda_{-q} E) = 1 and (Lambda_q E)(S_{-q} E) = 1 through cap."""
    s = s_q(roots, Fraction(1), cap)
    lam_neg = lambda_q(roots, Fraction(-1), cap)
    first = (s * lam_neg).is_one()
    lam = lambda_q(roots, Fraction(1), cap)
    s_neg = s_q(roots, Fraction(-1), cap)
    second = (lam * s_neg).is_one()
    return {"s_times_lambda_minus": first, "lambda_times_s_minus": second,
            "ok": first and second}


# ---------------------------------------------------------------------------
# Characteristic classes
# ---------------------------------------------------------------------------

def todd(roots):
    """prod_j x_j / (1 - e^{-x_j}) as an exact truncated class."""
    if roots.order > 6 + 1:
        raise CapExceeded("todd nilpotency cap", "order <= 7")
    out = NilPoly.const(roots.nvars, roots.order, Fraction(1))
    for e in roots.signed_roots():
        # (1 - e^{-x})/x = sum_{d>=0} (-1)^d x^d / (d+1)!
        h = NilPoly(roots.nvars, roots.order, {})
        lin = NilPoly(roots.nvars, roots.order, {})
        for j, c in enumerate(e):
            if c:
                lin = lin + NilPoly.gen(roots.nvars, roots.order, j, scale=c)
        power = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        for d in range(0, roots.order):
            h = h + power.scale(Fraction((-1) ** d, math.factorial(d + 1)))
            power = power * lin
            if power.is_zero():
                break
        out = out * h.inverse()
    return out


def todd_dual(roots):
    """prod_j (-x_j) / (1 - e^{x_j})."""
    out = NilPoly.const(roots.nvars, roots.order, Fraction(1))
    for e in roots.signed_roots():
        lin = NilPoly(roots.nvars, roots.order, {})
        for j, c in enumerate(e):
            if c:
                lin = lin + NilPoly.gen(roots.nvars, roots.order, j, scale=c)
        # (1 - e^{x})/(-x) = sum_{d>=0} x^d/(d+1)!
        h = NilPoly(roots.nvars, roots.order, {})
        power = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        for d in range(0, roots.order):
            h = h + power.scale(Fraction(1, math.factorial(d + 1)))
            power = power * lin
            if power.is_zero():
                break
        out = out * h.inverse()
    return out


def u_theta(roots, theta):
    """prod_j [(1 - e^{-x_j - i theta})/(1 - e^{-i theta})]^{-1} (complex)."""
    w = cmath.exp(-1j * theta)
    if abs(1 - w) < 1e-12:
        raise ValidationError("u-theta-pole", detail="theta = 0 mod 2 pi")
    out = NilPoly.const(roots.nvars, roots.order, complex(1))
    for e in roots.signed_roots():
        em = nil_exp(roots.nvars, roots.order, e, scale=-1)  # e^{-x}
        num = NilPoly.const(roots.nvars, roots.order, complex(1)) - em.scale(w)
        factor = num.scale(1.0 / (1 - w))
        out = out * factor.inverse()
    return out


def u_theta_ratio_identity(roots, theta, tol=1e-9):
    """[ch Lambda_{-1}(N(theta))*]^{-1} = U^theta / (1 - e^{-i theta})^m."""
    w = cmath.exp(-1j * theta)
    m = len(roots.signed_roots())
    prod = NilPoly.const(roots.nvars, roots.order, complex(1))
    for e in roots.signed_roots():
        em = nil_exp(roots.nvars, roots.order, e, scale=-1)
        prod = prod * (NilPoly.const(roots.nvars, roots.order, complex(1))
                       - em.scale(w))
    lhs = prod.inverse()
    rhs = u_theta(roots, theta).scale((1 - w) ** (-m))
    return lhs.close_to(rhs, tol)


def chern_tower(roots, cap):
    """ch of the S_{q^n} tower: prod_j prod_n [(1-q^n e^{x_j})(1-q^n e^{-x_j})]^{-1}."""
    if not roots.complexified:
        raise DimensionMismatch("chern tower expects a complexified bundle")
    out = TruncatedSeries.one(roots.nvars, roots.order, cap)
    one = NilPoly.const(roots.nvars, roots.order, Fraction(1))
    for e in roots.signed_roots():
        ex = nil_exp(roots.nvars, roots.order, e)
        for n in range(1, cap + 1):
            factor = TruncatedSeries.one(roots.nvars, roots.order, cap)
            factor.coeffs[n] = ex.scale(-1)
            out = out * factor.inverse()
    return out


def chern_tower_via_iterated_s(roots, cap):
    """Independent construction: product over n of S_q(E^C) at q -> q^n."""
    out = TruncatedSeries.one(roots.nvars, roots.order, cap)
    base = s_q(roots, Fraction(1), cap)
    for n in range(1, cap + 1):
        out = out * base.substitute_power(n)
    return out


# ---------------------------------------------------------------------------
# Elliptic genus prototypes
# ---------------------------------------------------------------------------

def elliptic_prototype(p_roots, q_roots, sigma, xi, lam, zeta, cap,
                       s_lattice="Z+", l_lattice="Z+"):
    """One of the four prototype products

        (x)_{n in L1} S_{sigma q^n}((xi P)^C) (x)_{n in L2}
        Lambda_{lam q^n}((zeta Q)^C)

    with each lattice either Z+ (n = 1, 2, ...) or Z+/2 (n = 1/2, 1, ...).
    Half-integer lattices are carried on a doubled internal exponent grid.
    """
    step = 2 if "2" in (s_lattice + l_lattice).replace("Z+", "") or \
        s_lattice == "Z+/2" or l_lattice == "Z+/2" else 1
    cap_i = cap * step
    out = TruncatedSeries.one(p_roots.nvars, p_roots.order, cap_i, step=step)

    def lattice_exponents(kind):
        if kind == "Z+":
            return [n * step for n in range(1, cap + 1)]
        if kind == "Z+/2":
            return list(range(1, cap_i + 1)) if step == 2 else None
        raise DimensionMismatch("unknown lattice %r" % kind)

    for n_exp in lattice_exponents(s_lattice):
        factor = _s_factor(p_roots, _mulc(sigma, xi), n_exp, cap_i, step)
        out = out * factor
    for n_exp in lattice_exponents(l_lattice):
        factor = _l_factor(q_roots, _mulc(lam, zeta), n_exp, cap_i, step)
        out = out * factor
    return out


def _s_factor(roots, z, n_exp, cap, step):
    out = TruncatedSeries.one(roots.nvars, roots.order, cap, step=step)
    for e in roots.signed_roots():
        ex = nil_exp(roots.nvars, roots.order, e)
        factor = TruncatedSeries(roots.nvars, roots.order, cap, step=step)
        power = NilPoly.const(roots.nvars, roots.order, Fraction(1))
        zpow = 1
        r = 0
        while r * n_exp <= cap:
            factor.coeffs[r * n_exp] = power.scale(zpow)
            power = power * ex
            zpow = _mulc(zpow, z)
            r += 1
        out = out * factor
    return out


def _l_factor(roots, z, n_exp, cap, step):
    out = TruncatedSeries.one(roots.nvars, roots.order, cap, step=step)
    for e in roots.signed_roots():
        factor = TruncatedSeries.one(roots.nvars, roots.order, cap, step=step)
        if n_exp <= cap:
            factor.coeffs[n_exp] = nil_exp(roots.nvars, roots.order, e).scale(z)
        out = out * factor
    return out


# ---------------------------------------------------------------------------
# Spectral functions
# ---------------------------------------------------------------------------

class SpectralParams:
    """tau in the upper half plane, a lattice offset, and truncation."""

    def __init__(self, tau, ell=1, eps=0.0, cap=30):
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValidationError("tau-not-in-upper-half-plane")
        self.tau = tau
        self.ell = ell
        self.eps = eps
        self.cap = cap
        self.q = cmath.exp(2j * cmath.pi * tau)
        self.t = tau.real / tau.imag
        self.xi = ell + eps

    def alpha_beta(self, convention):
        if convention == "a2pi":
            return 2 * math.pi * self.tau.imag, 2 * math.pi * self.tau.real
        if convention == "a4pi":
            return 4 * math.pi * self.tau.imag, 2 * math.pi * self.tau.real
        raise DimensionMismatch("unknown convention %r" % convention)


def patterson_selberg(s, alpha, beta, cap):
    """Z(s) = prod_{k1,k2 >= 0} [1 - e^{i beta k1} e^{-i beta k2}
    e^{-(k1+k2+s) alpha}], truncated at k1 + k2 <= cap, with a tail bound."""
    s = complex(s)
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise ValidationError("divergent-parameters", detail="Re alpha <= 0")
    base = abs(cmath.exp(-s * alpha)) * abs(cmath.exp(-alpha)) ** 0
    if abs(cmath.exp(-(0 + s) * alpha)) >= 1:
        raise ValidationError("divergent-parameters",
                              detail="leading factor does not decay")
    log_z = 0.0 + 0.0j
    for n in range(0, cap + 1):
        for k1 in range(0, n + 1):
            k2 = n - k1
            term = cmath.exp(1j * beta * k1) * cmath.exp(-1j * beta * k2) \
                * cmath.exp(-(k1 + k2 + s) * alpha)
            log_z += cmath.log(1 - term)
    r = abs(cmath.exp(-alpha))
    lead = abs(cmath.exp(-(cap + 1 + s.real) * alpha.real))
    tail = (cap + 2) * lead / max(1e-300, (1 - r) ** 2)
    return {"value": cmath.exp(log_z), "tail_estimate": tail, "cap": cap}


def ruelle(s, alpha, beta, cap, dim_x=3):
    """R(s) = prod_{p=0}^{dim X - 1} Z(p + s)^{(-1)^p}."""
    out = complex(1)
    for p in range(dim_x):
        z = patterson_selberg(s + p, alpha, beta, cap)["value"]
        out = out * z if p % 2 == 0 else out / z
    return out


def ruelle_two_factor(s, alpha, beta, cap):
    """The Z(s)/Z(s+1) candidate reading."""
    z0 = patterson_selberg(s, alpha, beta, cap)["value"]
    z1 = patterson_selberg(s + 1, alpha, beta, cap)["value"]
    return z0 / z1


def q_product_lhs(params):
    """prod_{n=ell}^{cap} (1 - q^{n + eps})."""
    out = complex(1)
    for n in range(params.ell, params.cap + 1):
        out *= 1 - params.q ** (n + params.eps)
    return out


CONVENTIONS = ("a2pi:three-factor", "a2pi:two-factor",
               "a4pi:three-factor", "a4pi:two-factor")


def qproduct_probe(params, conventions=CONVENTIONS):
    """Residuals |LHS - RHS| of the q-product identity under each candidate
    (alpha, beta) and Ruelle-form convention.  No convention is asserted as
    correct; the table is the deliverable."""
    lhs = q_product_lhs(params)
    s = params.xi * (1 - 1j * params.t)
    rows = {}
    for conv in conventions:
        ab, form = conv.split(":")
        alpha, beta = params.alpha_beta(ab)
        if form == "three-factor":
            rhs = ruelle(s, alpha, beta, params.cap)
        else:
            rhs = ruelle_two_factor(s, alpha, beta, params.cap)
        rows[conv] = {"lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs)}
    return rows


def first_factor_check(params, tol=1e-12):
    """Under (alpha, beta) = (2 pi Im tau, 2 pi Re tau) the (0,0) lattice
    factor of Z(s) at s = xi (1 - i t) equals the n = ell factor of the LHS."""
    alpha, beta = params.alpha_beta("a2pi")
    s = params.xi * (1 - 1j * params.t)
    z_factor = 1 - cmath.exp(-s * alpha)
    lhs_factor = 1 - params.q ** (params.ell + params.eps)
    return abs(z_factor - lhs_factor) <= tol
