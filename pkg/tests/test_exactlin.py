import random
from fractions import Fraction

import pytest

from cohomolab.exactlin import (
    Matrix, Subspace, annihilator, apply_to_subspace, complement_in,
    coordinates, hstack, image, kernel, preimage, quotient_dim, rank, solve,
    subspace_intersect, subspace_sum, vstack,
)
from cohomolab.errors import DimensionMismatch


def rand_matrix(rng, r, c, lo=-4, hi=4):
    return Matrix([[Fraction(rng.randint(lo, hi)) for _ in range(c)]
                   for _ in range(r)], ncols=c)


def test_rank_identity_and_zero():
    assert rank(Matrix.identity(2)) == 2
    assert rank(Matrix.zeros(3, 4)) == 0


def test_rank_dependent_rows():
    # [[1,2],[2,4]] row-reduces to a single pivot
    assert rank(Matrix([[1, 2], [2, 4]])) == 1


def test_kernel_single_equation():
    k = kernel(Matrix([[1, 1]]))
    assert k.dim == 1
    assert k.contains([1, -1])


def test_kernel_identity_and_zero_image():
    assert kernel(Matrix.identity(3)).dim == 0
    assert image(Matrix.zeros(3, 2)).dim == 0


def test_axes_sum_intersect_quotient():
    x = Subspace(3, [[1, 0, 0]])
    y = Subspace(3, [[0, 1, 0]])
    xy = subspace_sum(x, y)
    assert xy.dim == 2
    yz = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    meet = subspace_intersect(xy, yz)
    assert meet == y
    assert quotient_dim(Subspace.full(3), y) == 2
    with pytest.raises(DimensionMismatch):
        quotient_dim(y, x)


def test_preimage():
    m = Matrix([[1, 0, 0], [0, 1, 0]])
    v = Subspace(2, [[1, 0]])
    pre = preimage(m, v)
    # {x : (x1, x2) in span(e1)} = {x2 = 0}
    assert pre.dim == 2
    assert pre.contains([1, 0, 0]) and pre.contains([0, 0, 5])
    assert not pre.contains([0, 1, 0])


def test_canonical_form_is_representation_independent():
    a = Subspace(3, [[1, 1, 0], [0, 0, 1]])
    b = Subspace(3, [[2, 2, 2], [-1, -1, 3]])
    assert a == b
    assert a.basis.rows == b.basis.rows


def test_rank_transpose_and_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(60):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, r, c)
        assert rank(m) == rank(m.transpose())
        assert kernel(m).dim + rank(m) == c


def test_dimension_formula_random():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 5)
        u = Subspace(n, [[rng.randint(-3, 3) for _ in range(n)]
                         for _ in range(rng.randint(0, n))])
        v = Subspace(n, [[rng.randint(-3, 3) for _ in range(n)]
                         for _ in range(rng.randint(0, n))])
        s = subspace_sum(u, v)
        i = subspace_intersect(u, v)
        assert s.dim == u.dim + v.dim - i.dim
        assert u.contains_subspace(i) and v.contains_subspace(i)
        assert s.contains_subspace(u) and s.contains_subspace(v)


def test_annihilator_describes_subspace():
    u = Subspace(4, [[1, 2, 0, 0], [0, 0, 1, -1]])
    n = annihilator(u)
    for v in u.vectors():
        assert all(x == 0 for x in n.mulvec(v))
    assert kernel(n) == u


def test_solve_and_coordinates():
    m = Matrix([[1, 2], [3, 4]])
    x = solve(m, [5, 6])
    assert m.mulvec(x) == (Fraction(5), Fraction(6))
    assert solve(Matrix([[1, 1], [1, 1]]), [0, 1]) is None
    coeffs = coordinates([[1, 0, 0], [1, 1, 0]], [3, 2, 0])
    assert coeffs == (Fraction(1), Fraction(2))
    assert coordinates([[1, 0, 0]], [0, 1, 0]) is None


def test_complement_and_apply():
    u = Subspace.full(3)
    v = Subspace(3, [[1, 0, 0]])
    extra = complement_in(v, u)
    assert len(extra) == 2
    assert subspace_sum(v, Subspace(3, extra)) == u
    m = Matrix([[1, 0, 0], [0, 2, 0]])
    assert apply_to_subspace(m, v) == Subspace(2, [[1, 0]])


def test_stacking():
    a = Matrix([[1, 2]])
    b = Matrix([[3, 4]])
    assert vstack([a, b]).rows == ((Fraction(1), Fraction(2)), (Fraction(3), Fraction(4)))
    assert hstack([a, b]).rows == ((Fraction(1), Fraction(2), Fraction(3), Fraction(4)),)


def test_bareiss_handles_fractions_exactly():
    m = Matrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 5), Fraction(2, 7)]])
    assert rank(m) == 2
    big = Matrix([[Fraction(10**12 + 1), 10**12], [1, 1]])
    assert rank(big) == 2
