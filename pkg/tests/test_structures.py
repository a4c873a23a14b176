import itertools
import random
from fractions import Fraction

import pytest

from cohomolab.errors import ValidationError
from cohomolab.exactlin import Matrix
from cohomolab import structures as st


def test_sl2_valid():
    g = st.sl2()
    assert g.dim == 3
    assert g.bracket(0, 1) == {1: Fraction(2)}
    assert g.bracket(1, 0) == {1: Fraction(-2)}


def test_abelian_valid():
    g = st.abelian(4)
    assert g.dim == 4 and not g.brackets


def test_antisymmetry_violation_reported():
    with pytest.raises(ValidationError) as e:
        st.lie_from_constants(2, [(0, 1, {0: 1}), (1, 0, {0: 1})])
    assert e.value.kind == "antisymmetry"


def test_jacobi_violation_reports_witness():
    # [e0,[e1,e2]] + [e1,[e2,e0]] + [e2,[e0,e1]] = -e0 here
    with pytest.raises(ValidationError) as e:
        st.lie_from_constants(3, [(0, 1, {2: 1}), (0, 2, {2: 1}), (1, 2, {0: 1})])
    assert e.value.kind == "jacobi"
    assert len(e.value.witness) == 4


def test_gl_constructions():
    g1 = st.gl(1)
    assert g1.dim == 1 and not g1.brackets
    g2 = st.gl(2)
    assert g2.dim == 4
    g2.check_jacobi()
    g3 = st.gl(3)
    assert g3.dim == 9


def test_witt_bracket_window():
    w = st.WittWindow(5)
    assert st.witt_bracket(1, -1, w) == (Fraction(2), 0)
    assert st.witt_bracket(2, 2, w) == (Fraction(0), 4)
    assert st.witt_bracket(4, 3, w) is st.OUT_OF_WINDOW
    with pytest.raises(ValidationError):
        st.witt_bracket(6, 0, w)


def test_virasoro_bracket_values():
    (vf, central) = st.virasoro_bracket((2, 0), (-2, 0))
    assert vf == (Fraction(4), 0)
    assert central == Fraction(1, 2)
    (vf, central) = st.virasoro_bracket((1, 3), (-1, 7))
    assert vf == (Fraction(2), 0)
    assert central == 0


def test_virasoro_jacobi_with_central_terms():
    # [[a,b],c] + cyclic: vector-field part is Witt Jacobi; central part is the
    # cocycle identity.  Both must vanish for all index triples with |k| <= 8.
    for a, b, c in itertools.product(range(-8, 9), repeat=3):
        coeff = {}
        central = Fraction(0)
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
            n = x + y
            coeff[n + z] = coeff.get(n + z, Fraction(0)) + Fraction(x - y) * (n - z)
            central += Fraction(x - y) * st.virasoro_omega(n, z)
        assert all(v == 0 for v in coeff.values())
        assert central == 0


def test_semidirect_trivial_w_is_gbar():
    w = st.abelian(0) if False else st.LieAlgebra(0, {})
    gbar = st.sl2()
    p = st.base_field()
    g = st.semidirect(w, gbar, p, [])
    assert g.dim == 3
    assert g.bracket(0, 1) == gbar.bracket(0, 1)


def test_semidirect_euler_action():
    w = st.gl(1)
    p = st.truncated_poly(1, 2)  # k[z]/(z^3)
    euler = Matrix([[0, 0, 0], [0, 1, 0], [0, 0, 2]])
    gbar = st.gl(1)
    g = st.semidirect(w, gbar, p, [euler])
    assert g.dim == 1 + 3
    g.check_jacobi()


def test_semidirect_rejects_non_derivation():
    w = st.gl(1)
    p = st.truncated_poly(1, 2)
    bad = Matrix([[0, 0, 0], [0, 1, 0], [1, 0, 2]])
    with pytest.raises(ValidationError) as e:
        st.semidirect(w, st.gl(1), p, [bad])
    assert e.value.kind == "action-not-derivation"


def test_l_filtration_dims():
    dims = [st.l_filtration(1, 3, k).dim for k in (-1, 0, 1, 2)]
    assert dims == [4, 3, 2, 1]


def test_l_filtration_checker():
    rep = st.l_filtration_check(1, 3)
    assert rep["gl_iso"] is True
    assert all(ok for _, ok in rep["bracket_inclusions"])
    rep2 = st.l_filtration_check(2, 2)
    assert rep2["gl_iso"] is True


def test_dual_numbers():
    a = st.dual_numbers()
    assert a.dim == 2
    assert a.mul((0, 1), (0, 1)) == (Fraction(0), Fraction(0))  # x^2 = 0


def test_truncated_poly_grading():
    a = st.truncated_poly(2, 3)
    assert a.dim == 10
    assert a.grading is not None


def test_matrix_algebra_and_commutator_lie():
    m2 = st.matrix_algebra(2)
    lie = st.commutator_lie(m2)
    lie.check_jacobi()
    # should agree with gl(2)
    g2 = st.gl(2)
    for i in range(4):
        for j in range(4):
            assert lie.bracket(i, j) == g2.bracket(i, j)


def test_gl2_of_dual_numbers():
    g = st.gl_n_of(2, st.dual_numbers())
    assert g.dim == 8
    g.check_jacobi()


def test_commutator_lie_random_assoc_passes_jacobi():
    # any valid associative algebra gives a Lie algebra automatically
    rng = random.Random(3)
    for _ in range(5):
        n = rng.randint(1, 3)
        a = st.truncated_poly(n, rng.randint(1, 2))
        st.commutator_lie(a).check_jacobi()


def test_e_lambda_tensor_law():
    g = st.gl(2)
    e1 = st.e_lambda(2, Fraction(1, 2), g)
    e2 = st.e_lambda(2, Fraction(3, 2), g)
    t = st.tensor_module(e1, e2)
    e3 = st.e_lambda(2, Fraction(2), g)
    assert [m.rows for m in t.action] == [m.rows for m in e3.action]


def test_module_axiom_checked_exhaustively():
    g = st.sl2()
    st.sl2_natural(g).check_module()
    st.sl2_irrep(3, g).check_module()
    st.adjoint_module(g).check_module()
    st.dual_module(st.adjoint_module(g)).check_module()
    m = st.sl2_natural(g)
    st.tensor_module(m, m).check_module()
    st.ext_power_module(st.adjoint_module(g), 2).check_module()
    st.sym_power_module(m, 4).check_module()


def test_module_axiom_violation_detected():
    g = st.sl2()
    bad = [Matrix.identity(2), Matrix.zeros(2, 2), Matrix.zeros(2, 2)]
    with pytest.raises(ValidationError):
        st.LieModule(g, bad)


def test_json_roundtrip_algebra():
    g = st.sl2()
    data = st.algebra_to_json(g)
    g2 = st.algebra_from_json(data)
    assert g2.dim == 3
    for i in range(3):
        for j in range(3):
            assert g.bracket(i, j) == g2.bracket(i, j)


def test_json_roundtrip_module_and_assoc():
    g = st.sl2()
    m = st.sl2_natural(g)
    m2 = st.module_from_json(st.module_to_json(m), g)
    assert [a.rows for a in m.action] == [a.rows for a in m2.action]
    a = st.dual_numbers()
    a2 = st.assoc_from_json(st.assoc_to_json(a))
    assert a2.mult == a.mult and a2.grading == a.grading


def test_rational_strings_reject_decimals():
    with pytest.raises(ValidationError):
        st.frac("0.5")
