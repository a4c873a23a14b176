import random
from fractions import Fraction

import pytest

from cohomolab import ce, structures as st, weyl as wy
from cohomolab.errors import CapExceeded
from cohomolab.exactlin import Subspace


def test_weyl_abelian1_koszul():
    w = wy.weyl(st.abelian(1), 2)
    # d2 restricted to Lambda^1 is the identity onto S^1
    deg1 = w.basis[1]
    assert deg1 == [((0,), (0,))]
    d = w.d[1 - 1] if False else w.d[1]
    # degree 1 basis is the single exterior generator; its differential is s_0
    col = [w.d[1][r, 0] for r in range(w.d[1].nrows)]
    tgt = w.basis[2]
    s0 = tgt.index(((), (1,)))
    assert col[s0] == 1 and sum(1 for x in col if x != 0) == 1
    rep = wy.acyclicity(w)
    assert rep["ok"], rep


def test_weyl_d2_bijection_on_generators():
    g = st.sl2()
    w = wy.weyl(g, 2)
    # d2 of each exterior generator is exactly the matching symmetric generator
    for a in range(3):
        src = w.index[1][((a,), (0, 0, 0))]
        ea = tuple(1 if k == a else 0 for k in range(3))
        tgt = w.index[2][((), ea)]
        col = [w.d2[1][r, src] for r in range(w.d2[1].nrows)]
        assert col[tgt] == 1
        assert sum(1 for x in col if x != 0) == 1


def test_weyl_identities_sl2():
    w = wy.weyl(st.sl2(), 2)  # identities validated in the constructor
    ok, witness = w.leibniz_check(random.Random(7), samples=40)
    assert ok, witness


def test_weyl_acyclicity():
    for h, cap in ((st.abelian(2), 3), (st.sl2(), 2), (st.abelian(1), 3)):
        rep = wy.acyclicity(wy.weyl(h, cap))
        assert rep["ok"], (h.dim, rep)
        assert rep["rows"][0]["dim"] == 1


def test_weyl_caps():
    with pytest.raises(CapExceeded):
        wy.weyl(st.abelian(5), 2)
    with pytest.raises(CapExceeded):
        wy.weyl(st.abelian(1), 7)


def test_filtration_d_stable():
    w = wy.weyl(st.sl2(), 2)
    w.filtration()  # validates decreasing, exhaustive, d-stable


def test_page_check_abelian1():
    w = wy.weyl(st.abelian(1), 3)
    rep = wy.weyl_page_check(w)
    assert rep["ok"], rep["cells"]
    cells = dict((pq, (got, want)) for pq, got, want in rep["cells"])
    # EW_1^{2,q} = H^q(h; h*) has dims (1,1) for the 1-dim abelian algebra
    assert cells[(2, 0)][0] == 1
    assert cells[(2, 1)][0] == 1
    # odd p cells vanish
    assert all(got == 0 for (p, q), got, want in rep["cells"] if p % 2 == 1)


def test_page_check_abelian2_and_sl2():
    assert wy.weyl_page_check(wy.weyl(st.abelian(2), 2))["ok"]
    rep = wy.weyl_page_check(wy.weyl(st.sl2(), 2))
    assert rep["ok"], rep["cells"]
    cells = dict((pq, (got, want)) for pq, got, want in rep["cells"])
    # p = 2: H^q(sl2; coadjoint) = 0 for q <= 1 (Whitehead)
    assert cells[(2, 0)][0] == 0


def test_abutment_acyclic():
    from cohomolab import spectral as sp
    w = wy.weyl(st.abelian(1), 3)
    fc = w.filtration()
    ab = sp.abutment(fc)
    assert ab["ok"]
    # within the safe window the abutment is zero in positive degrees
    for row in ab["rows"]:
        if 1 <= row["degree"] <= w.cap:
            assert row["h_dim"] == 0


def test_relative_weyl_sl2_sl2():
    rw = wy.relative_weyl(st.sl2(), Subspace.full(3), 4)
    dims = rw.dims()
    # [S^p sl2*]^{sl2} for p = 0..4 -> 1, 0, 1, 0, 1 (powers of the Casimir)
    assert [dims[2 * p] for p in range(5)] == [1, 0, 1, 0, 1]
    assert all(dims[q] == 0 for q in range(1, len(dims), 2))
    # complex coincides with its cohomology
    assert list(rw.cohomology_dims()) == list(dims)


def test_relative_weyl_gl1():
    g = st.gl(1)
    rw = wy.relative_weyl(g, Subspace.full(1), 3)
    dims = rw.dims()
    assert [dims[2 * p] for p in range(4)] == [1, 1, 1, 1]


def test_relative_weyl_h_zero_is_absolute():
    g = st.sl2()
    rw = wy.relative_weyl(g, Subspace.zero(3), 2)
    assert list(rw.dims()) == [len(b) for b in rw.ambient.basis]


def test_relative_page_check_small():
    g = st.two_dim_nonabelian()
    rw = wy.relative_weyl(g, Subspace(2, [[0, 1]]), 2)
    rep = wy.relative_page_check(rw)
    assert rep["ok"], rep["cells"]


def test_truncated_weyl_gl1_theorem_dims():
    w = wy.weyl(st.gl(1), 1)
    quot, rep = wy.truncated_weyl(w, 1, target_dims=(1, 0, 0, 1))
    assert rep["dims"] == (1, 1, 1, 1)
    assert rep["cohomology"] == (1, 0, 0, 1)
    assert rep["cohomology_match"]
    assert rep["cohomology"][0] == 1  # H^0 = base field


def test_truncated_quotient_dsquared():
    w = wy.weyl(st.sl2(), 2)
    quot, rep = wy.truncated_weyl(w, 1)
    quot.check_dsquared()


def test_truncated_relative_lemma51_counts():
    # g = gl(1) + Gbar (abelian, dim 1), h = gl(1): compare the truncated
    # relative Weyl dims per degree with the generator-count model
    g = st.abelian(2)
    h = Subspace(2, [[1, 0]])
    rw = wy.relative_weyl(g, h, 1)
    quot, rep = wy.truncated_weyl(rw, 1)
    counts = wy.lemma51_generator_count(gbar_dim=1)
    for deg in range(4):
        assert rep["dims"][deg] == counts.get(deg, 0), (deg, rep["dims"], counts)
    assert rep["dims"][:3] == (1, 1, 2)
    assert rep["cohomology"][0] == 1


def test_weyl_dims_smoke():
    w = wy.weyl(st.abelian(2), 2)
    # W^q = sum_{i+2j=q} C(2,i) * dim S^j(2)
    assert len(w.basis[0]) == 1
    assert len(w.basis[1]) == 2
    assert len(w.basis[2]) == 1 + 2  # Lambda^2 + S^1
    assert len(w.basis[3]) == 2 * 2  # Lambda^1 (x) S^1
