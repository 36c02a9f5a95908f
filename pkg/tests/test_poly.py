from fractions import Fraction

import pytest

from koszulpole.fields import GF
from koszulpole.linalg import DEFAULT_PRIMES
from koszulpole.parse import NotHomogeneous, PolySyntaxError, UnknownVariable, parse_poly
from koszulpole.poly import (
    ContextMismatch,
    NotExactDivision,
    RingCtx,
    WrongArity,
    ZeroPoint,
    dim_S,
    divide_exact,
    evaluate,
    gradient,
    hessian,
    jac3,
    linear_substitution,
    monomial_basis,
    partial,
    product,
    reduce_poly,
    render,
)


def P(text, nvars=3):
    return parse_poly(text, RingCtx(nvars))


def test_default_variable_names():
    assert RingCtx(3).varnames == ("x", "y", "z")
    assert RingCtx(4).varnames == ("x", "y", "z", "w")
    assert RingCtx(5).varnames == ("x0", "x1", "x2", "x3", "x4")
    with pytest.raises(ValueError):
        RingCtx(2, ("a", "a"))


def test_parse_fermat_quartic():
    f = P("x^4+y^4+z^4")
    assert f.degree == 4
    assert len(f.terms) == 3


def test_parse_expands_products():
    f = P("x*(x^2*y+x*y^2+z^3)")
    assert f == P("x^3*y + x^2*y^2 + x*z^3")
    assert f.degree == 4


def test_parse_errors():
    with pytest.raises(NotHomogeneous) as exc:
        P("x^2+y^3")
    assert exc.value.degrees == (2, 3)
    with pytest.raises(UnknownVariable):
        P("x^2+q^2")
    with pytest.raises(PolySyntaxError) as exc:
        P("x^2+*y")
    assert exc.value.position == 4
    with pytest.raises(PolySyntaxError):
        P("(x+y")


def test_parse_implicit_multiplication_and_rationals():
    assert P("2x y") == P("2*x*y")
    assert P("-(x+y)^2") == P("-x^2-2*x*y-y^2")
    f = P("3/2*x^2 - 1/3*y*z")
    assert f.terms[(2, 0, 0)] == Fraction(3, 2)


def test_zero_polynomial():
    z = P("x - x")
    assert z.is_zero()
    assert render(z) == "0"


def test_partials():
    assert partial(P("x^2*y"), 0) == P("2*x*y")
    assert partial(P("x^4+y^4+z^4"), 2) == P("4*z^3")
    # Euler: sum x_i f_i = N f
    f = P("x^3*y+x^2*y^2+x*z^3")
    ctx = f.ctx
    euler = sum((ctx.var(i) * g for i, g in enumerate(gradient(f))), ctx.zero(4))
    assert euler == f.scale(4)


def test_arithmetic_and_context_checks():
    f, g = P("x+y"), P("x-y")
    assert f * g == P("x^2-y^2")
    assert f**3 == P("(x+y)^3")
    with pytest.raises(ContextMismatch):
        f + P("x", 4)
    with pytest.raises(ValueError):
        f + P("x^2")


def test_divide_exact():
    f = P("x^3 - y^3")
    assert divide_exact(f, P("x - y")) == P("x^2+x*y+y^2")
    with pytest.raises(NotExactDivision):
        divide_exact(f, P("x + y"))


def test_hessian_examples():
    f = P("z*y^2 - x^3 - x^2*z")
    assert hessian(f, (0, 0, 1)) == [[-2, 0, 0], [0, 2, 0], [0, 0, 0]]
    assert hessian(P("x^2+y^2+z^2"), (3, -1, 2)) == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    assert hessian(P("x^4"), (0, 1, 0)) == [[0] * 3 for _ in range(3)]
    with pytest.raises(ZeroPoint):
        hessian(f, (0, 0, 0))


def test_jac3():
    x, y, z = (P(v) for v in "xyz")
    assert jac3(x, y, z) == RingCtx(3).const(1)
    assert jac3(x, y, x).is_zero()
    assert jac3(P("x^2"), P("y^2"), P("z^2")) == P("8*x*y*z")
    with pytest.raises(WrongArity):
        jac3(P("x", 4), P("y", 4), P("z", 4))


def test_monomial_basis():
    assert len(monomial_basis(RingCtx(3), 2)) == 6
    assert monomial_basis(RingCtx(4), 0) == ((0, 0, 0, 0),)
    b = monomial_basis(RingCtx(3), 3)
    assert len(b) == 10 and b[0] == (3, 0, 0)
    assert dim_S(3, 5) == 21


def test_evaluate_and_reduce():
    f = P("x^2*y - 1/2*z^3")
    assert evaluate(f, (1, 2, 2)) == -2
    p = DEFAULT_PRIMES[0]
    g = reduce_poly(f, GF(p))
    assert evaluate(g, (1, 2, 2)) == p - 2


def test_linear_substitution():
    f = P("x^2 - y*z")
    # x -> x + y, y -> y, z -> z
    g = linear_substitution(f, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert g == P("(x+y)^2 - y*z")


def test_product_and_render_roundtrip():
    ctx = RingCtx(3)
    f = product([P("x"), P("y-z"), P("x+2*z")], ctx)
    assert f.degree == 3
    assert parse_poly(render(f), ctx) == f
