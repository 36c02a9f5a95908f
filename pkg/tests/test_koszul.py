import pytest

from conftest import COLLINEAR, FP1, FP3, hyper
from oracles import milnor_dim, smooth_coefficient

from koszulpole.forms import differential, exterior_d, wedge
from koszulpole.koszul import (
    DimTable,
    FactorProductMismatch,
    Hypersurface,
    NotStabilized,
    analyze,
    exterior_d_matrix,
    form_to_relation,
    form_to_vector,
    genus_formula_holds,
    koszul_hn_dim_direct,
    koszul_matrix,
    milnor_dims,
    relation_to_form,
    smooth_series,
    syzygy_space,
    thm5_basis,
    thm5_h,
    vector_to_form,
)
from koszulpole.linalg import Solver
from koszulpole.parse import parse_poly
from koszulpole.poly import RingCtx, gradient


def test_smooth_series_examples():
    assert smooth_series(2, 4, 6).dims == [1, 3, 6, 7, 6, 3, 1]
    assert smooth_series(2, 3, 3).dims == [1, 3, 3, 1]
    for n in (1, 2, 3):
        for N in (2, 3, 5):
            s = smooth_series(n, N, (n + 1) * (N - 2) + 2)
            assert s.dims[0] == 1
            assert s.dims[1] == (n + 1 if N > 2 else 0)
            assert s.dims == [smooth_coefficient(n, N, k) for k in range(len(s.dims))]


def test_milnor_dims_against_oracle():
    for text in ("x^4+y^4+z^4", FP1, COLLINEAR, "x^2*y^2+x*z^3+y*z^3"):
        hs = hyper(text)
        table = milnor_dims(hs)
        for k in range(table.bound + 1):
            assert table.dims[k] == milnor_dim(hs.f.terms, 3, hs.N, k)


def test_milnor_dims_published_series():
    assert milnor_dims(hyper(FP1)).dims[:8] == [1, 3, 6, 7, 6, 5, 5, 5]
    t = milnor_dims(hyper(FP3))
    assert t.dims[:15] == [1, 3, 6, 10, 15, 21, 25, 27, 27, 25, 21, 15, 12, 11, 11]
    assert (t.tail, t.tail_from) == (11, 13)


def test_milnor_dims_exact_mode_matches():
    hs = hyper(FP1)
    assert milnor_dims(hs, solver=Solver("exact")).dims == milnor_dims(hs).dims


def test_not_stabilized_for_non_isolated():
    # a double line: the singular locus is a whole curve
    with pytest.raises(NotStabilized):
        milnor_dims(hyper("x^2*y^2"))


def test_dimtable_access():
    t = DimTable([1, 3, 4, 4], 4, 2)
    assert t[-1] == 0 and t[2] == 4 and t[50] == 4
    assert t.series() == "1,3,4,4 tail=4 from=2"


def test_analyze_degree_2p_example():
    rep = analyze(hyper("z^4*(x^3+y^3)+x^7+y^7"))
    assert (rep.ct, rep.mdr, rep.st, rep.tau) == (10, 5, 14, 8)


def test_analyze_one_node_has_ct_equal_st_equal_T():
    rep = analyze(hyper("y^2*z-x^3-x^2*z"))
    assert rep.ct == rep.st == rep.T == 3
    assert rep.tau == 1


def test_analyze_independent_of_a_variable():
    rep = analyze(hyper("x^3+y^3"))
    assert (rep.mdr, rep.ct, rep.st) == (0, 1, 2)


def test_analyze_smooth():
    rep = analyze(hyper("x^4+y^4+z^4"))
    assert rep.tau == 0 and rep.ct is None and rep.mdr is None
    assert rep.milnor.dims == rep.smooth.dims


def test_analyze_threshold_law_and_euler():
    for text in (FP1, COLLINEAR, "x^2*y^3+z^5"):
        hs = hyper(text)
        rep = analyze(hs)
        assert rep.ct == rep.mdr + hs.N - 2
        assert hs.N - 2 <= rep.ct <= hs.T
        assert rep.st <= hs.T + 1
        for j in range(2 * hs.N + 1):
            assert koszul_hn_dim_direct(hs, j) == rep.hn[j]


def test_hn_direct_examples():
    assert koszul_hn_dim_direct(hyper(FP1), 4) == 2
    assert koszul_hn_dim_direct(hyper(COLLINEAR), 5) == 2
    nodal = hyper("x*y*z*(x+y+z)")
    assert all(koszul_hn_dim_direct(nodal, j) == 0 for j in range(4))


def test_syzygy_examples():
    hs = hyper("x^2*y^3+z^5")
    sb = syzygy_space(hs, 1)
    assert sb.quotient_dim == 1
    rel = form_to_relation(sb.representatives[0])
    ratio = rel[0].terms[(1, 0, 0)] / 3
    assert rel[1].terms[(0, 1, 0)] == -2 * ratio
    nodal = hyper("x*y*z*(x+y+z)")
    assert syzygy_space(nodal, 0).quotient_dim == 0
    assert syzygy_space(nodal, 1).quotient_dim == 0
    smooth = hyper("x^3+y^3+z^3")
    assert all(syzygy_space(smooth, m).quotient_dim == 0 for m in range(smooth.T - 1))


def test_syzygy_representatives_are_cycles():
    hs = hyper(COLLINEAR)
    df = differential(hs.f)
    for rep in syzygy_space(hs, 2).representatives:
        assert wedge(df, rep).is_zero()


def test_relation_form_roundtrip():
    ctx = RingCtx(3)
    coeffs = [parse_poly(t, ctx) for t in ("x^2", "x*y-z^2", "3*y*z")]
    form = relation_to_form(ctx, coeffs)
    assert form_to_relation(form) == coeffs
    f = parse_poly("x^4+y^4+z^4", ctx)
    combo = sum((a * g for a, g in zip(coeffs, gradient(f))), ctx.zero(5))
    (comp,) = [h for _, h in wedge(differential(f), form).items()]
    assert comp == combo


def test_thm5_basis_collinear_quartic():
    hs = hyper(COLLINEAR, factors=("x", "x^3+y^3+z^3"))
    basis = thm5_basis(hs)
    assert basis.quotient_dim == 1
    ctx = hs.f.ctx
    expected = vector_to_form(ctx, 2, 4, form_to_vector(basis.representatives[0]))
    assert basis.representatives[0] == expected
    (gamma,) = basis.representatives
    assert dict(gamma.components) == {
        (0, 1): parse_poly("-3*y^2", ctx),
        (0, 2): parse_poly("-3*z^2", ctx),
    }
    assert thm5_h(hs)[0].is_zero()


def test_thm5_basis_three_components():
    hs = hyper("x*y*(x+y+z)", factors=("x", "y", "x+y+z"))
    assert thm5_basis(hs).quotient_dim == 2
    hs = hyper("x*(y^2-x*z)*(x^2+y^2-z^2+x*y)", factors=("x", "y^2-x*z", "x^2+y^2-z^2+x*y"))
    assert thm5_basis(hs).quotient_dim == 2


def test_factor_product_mismatch():
    with pytest.raises(FactorProductMismatch):
        hyper(COLLINEAR, factors=("x", "x^3+y^3"))
    with pytest.raises(FactorProductMismatch):
        hyper("x^2*y", factors=("x", "x", "y"))


def test_genus_formula_for_nodal_curve():
    ctx = RingCtx(3)
    f = parse_poly(COLLINEAR, ctx)
    hs = Hypersurface(f, (parse_poly("x", ctx), parse_poly("x^3+y^3+z^3", ctx)), (0, 1))
    assert genus_formula_holds(hs, analyze(hs))


def test_koszul_and_d_matrices_agree_with_forms():
    ctx = RingCtx(3)
    f = parse_poly(FP1, ctx)
    df = differential(f)
    for p, j in ((1, 3), (2, 5), (0, 2)):
        K = koszul_matrix(f, p, j)
        D = exterior_d_matrix(ctx, p, j)
        for c in range(0, K.cols, max(1, K.cols // 7)):
            w = vector_to_form(ctx, p, j, {c: 1})
            assert form_to_vector(wedge(df, w)) == K.apply({c: 1})
            assert form_to_vector(exterior_d(w)) == D.apply({c: 1})
