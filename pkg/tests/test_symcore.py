from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import COORDS, polynomial_exprs, smooth_exprs
from walkerry.parse import parse_expr
from walkerry.symcore import (
    EPS,
    Antideriv,
    Const,
    Coord,
    DomainError,
    Opaque,
    Param,
    Params,
    SubstitutionError,
    UnboundSymbol,
    X,
    Y,
    Z,
    antideriv,
    coord,
    diff,
    evaluate,
    exp,
    integrate,
    is_structural_zero,
    opaque,
    render,
    simplify,
    substitute,
    substitute_functions,
)
from walkerry.verify import RandomFunction

x, y, z = coord(X), coord(Y), coord(Z)
beta, mu = Param("beta"), Param("mu")


def p(text):
    return parse_expr(text)


# -- coordinates -----------------------------------------------------------


def test_coord_index_bijection():
    assert [c.index for c in Coord] == [1, 2, 3]
    for c in Coord:
        assert Coord.from_index(c.index) is c
        assert Coord.from_symbol(c.symbol) is c
    assert Coord.from_symbol("y") is Y


# -- differentiation -------------------------------------------------------


def test_power_rule():
    assert diff(x**2, X) == simplify(2 * x)


def test_diff_exponential_with_opaque_rate():
    F = opaque("F", Z)
    e = exp(x * F / beta)
    assert simplify(diff(e, X) - F / beta * e) == Const(0)


def test_diff_antiderivative_returns_integrand():
    E = opaque("E", Y)
    assert diff(antideriv(E, Y, 0), Y) == E


def test_opaque_derivative_orders_and_non_arguments():
    a = opaque("a", Y, Z)
    d = diff(diff(a, Y), Z)
    assert isinstance(d, Opaque) and d.orders == (0, 1, 1)
    assert diff(a, X) == Const(0)


def test_antiderivative_in_other_variable_differentiates_under_integral():
    a = opaque("a", Y, Z)
    e = integrate(a, Y)
    assert simplify(diff(e, Z) - antideriv(diff(a, Z), Y, 0)) == Const(0)


@given(smooth_exprs(), smooth_exprs(), st.sampled_from(COORDS))
def test_linearity(e1, e2, v):
    lhs = diff(3 * e1 - Fraction(1, 2) * e2, v)
    rhs = 3 * diff(e1, v) - Fraction(1, 2) * diff(e2, v)
    assert simplify(lhs - rhs) == Const(0)


@given(smooth_exprs(), smooth_exprs(), st.sampled_from(COORDS))
def test_product_rule(e1, e2, v):
    assert simplify(diff(e1 * e2, v) - e1 * diff(e2, v) - e2 * diff(e1, v)) == Const(0)


@given(smooth_exprs(), st.sampled_from(COORDS), st.sampled_from(COORDS))
def test_mixed_partials_commute(e, u, v):
    assert simplify(diff(diff(e, u), v) - diff(diff(e, v), u)) == Const(0)


# -- simplification ----------------------------------------------------------


def test_sign_symbol_rules():
    assert simplify(EPS * EPS) == Const(1)
    assert simplify(1 / EPS) == EPS
    assert simplify(EPS**3) == EPS


def test_scalar_curvature_reduction():
    f = opaque("f", X, Y, Z)
    f11 = diff(f, X, 2)
    e = (-f) * 0 + EPS * 0 + 2 * (1 * (Const(1) / 2 * f11))
    assert simplify(e) == f11


def test_additive_identity_and_flattening():
    assert simplify(x + 0) == x
    s = simplify((x + y) + (z + x))
    assert s == simplify(2 * x + y + z)


def test_pythagorean_identity():
    u = 2 * y + z
    assert simplify(p("sin(2*y + z)^2 + cos(2*y + z)^2")) == Const(1)
    assert simplify(exp(u) * exp(-u)) == Const(1)


def test_radicals_fold():
    assert simplify(p("2^(1/2)*8^(1/2)")) == Const(4)
    assert simplify(p("2^(1/2)*2^(1/2)")) == Const(2)


def test_rational_function_cancellation():
    assert simplify(p("(x^2 - y^2)/(x - y) - x - y")) == Const(0)
    assert simplify(p("eps*(a1*z + a2)^(-1)*(a1*z + a2)")) == EPS


@given(smooth_exprs(max_terms=4))
def test_simplify_idempotent(e):
    s = simplify(e)
    assert simplify(s) == s


@given(polynomial_exprs())
def test_structural_zero_of_difference(e):
    assert is_structural_zero(e - e)


# -- substitution ------------------------------------------------------------


def test_substitute_mu_two_beta():
    S = opaque("S", X, Y, Z)
    e = (-beta + mu / 2) * S
    assert substitute(e, {mu: 2 * beta}) == Const(0)


def test_substitute_coordinate_and_opaque():
    assert substitute(x + y, {X: Const(0)}) == y
    a, b = opaque("a", Y, Z), opaque("b", Y, Z)
    assert substitute(x * a + b, {a: Const(0)}) == b


def test_substitute_function_applies_derivative_markers():
    a = opaque("a", Y, Z)
    e = diff(a, Y, 2)
    assert substitute_functions(e, {"a": y**3 * z}) == simplify(6 * y * z)


def test_substitute_moving_a_differentiation_variable_fails():
    e = diff(opaque("a", Y, Z), Y)
    with pytest.raises(SubstitutionError):
        substitute(e, {Y: x + 1})
    with pytest.raises(SubstitutionError):
        substitute(antideriv(y * z, Y, 0), {Y: Const(2)})


# -- evaluation ----------------------------------------------------------------


def test_evaluate_walker_function():
    assert evaluate(p("y*z*exp(-x)"), {"x": 0, "y": 1, "z": 2}) == 2.0


def test_evaluate_antiderivative_by_quadrature():
    value = evaluate(Antideriv(exp(y), Y, Fraction(0)), {"y": 1.0})
    assert abs(value - (math.e - 1)) < 1e-9


def test_evaluate_errors():
    with pytest.raises(DomainError):
        evaluate(1 / x, {"x": 0.0})
    with pytest.raises(DomainError):
        evaluate(p("log(x)"), {"x": -1.0})
    with pytest.raises(UnboundSymbol):
        evaluate(beta * x, {"x": 1.0})


@given(smooth_exprs(), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_substitution_commutes_with_evaluation(e, a, b, c):
    import numpy as np

    rng = np.random.default_rng(3)
    fns = {}

    def lookup(node, point):
        fn = fns.setdefault(node.name, RandomFunction(node.args, rng))
        return fn.value(node.orders, point)

    m = {Y: x * z + 1}
    point = {X: a, Y: b, Z: c}
    moved = dict(point)
    moved[Y] = a * c + 1
    try:
        lhs = evaluate(substitute(e, m), point, functions=lookup)
    except SubstitutionError:
        return  # opaque functions of y cannot have y moved
    rhs = evaluate(e, moved, functions=lookup)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)) * 100


@given(smooth_exprs(allow_opaque=False), st.sampled_from(COORDS))
def test_derivative_matches_central_difference(e, v):
    import numpy as np

    rng = np.random.default_rng(11)
    for _ in range(4):
        pt = dict(zip(COORDS, rng.uniform(-1, 1, 3)))
        exact = evaluate(diff(e, v), pt)
        h = 1e-5
        up, dn = dict(pt), dict(pt)
        up[v] += h
        dn[v] -= h
        approx = (evaluate(e, up) - evaluate(e, dn)) / (2 * h)
        assert abs(exact - approx) <= 1e-6 * (1 + abs(exact))


# -- integration ----------------------------------------------------------------


def test_closed_form_polynomial_exponential_integral():
    e = integrate(y * exp(2 * y), Y)
    assert not any(isinstance(n, Antideriv) for n in _nodes(e))
    assert simplify(diff(e, Y) - y * exp(2 * y)) == Const(0)
    assert substitute(e, {Y: Const(0)}) == Const(0)


def test_non_elementary_integral_stays_antiderivative():
    e = integrate(exp(y**2), Y)
    assert isinstance(e, Antideriv)


def _nodes(e):
    from walkerry.symcore import walk

    return list(walk(e))


# -- rendering and parameters ---------------------------------------------------


def test_render_reparses():
    for text in ["y*z*exp(-x)", "-x^2 + 3/4*y", "D(a(y,z), y, 2) - INT(exp(y^2), y, 0)", "eps*(a1*z + a2)^(-1)"]:
        e = p(text)
        assert p(render(e)) == e


def test_params_validation():
    P = Params.of(beta=1, lam=0, mu=2, epsilon=-1)
    assert P.epsilon == Const(-1)
    assert Params().epsilon == EPS
    with pytest.raises(ValueError):
        Params.of(epsilon=0)
    with pytest.raises(ValueError):
        Params(epsilon=Param("e"))
