from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from walkerry.parse import ParseError, parse_expr
from walkerry.scenario import SchemaError, parse_scenario, scenario_to_json
from walkerry.symcore import (
    EPS,
    Antideriv,
    Apply,
    Const,
    Coordinate,
    Opaque,
    Param,
    Power,
    Product,
    X,
    Y,
    Z,
    coord,
    diff,
    evaluate,
    opaque,
    simplify,
)

x, y, z = coord(X), coord(Y), coord(Z)


def test_walker_function_tree():
    e = parse_expr("y*z*exp(-x)")
    assert isinstance(e, Product)
    assert set(e.factors) == {y, z, Apply("exp", simplify(-x))}


def test_precedence_sum_of_product():
    raw = parse_expr("a+b*c", canonical=False)
    assert simplify(raw) == simplify(Param("a") + Param("b") * Param("c"))
    assert parse_expr("a + b*c") != parse_expr("(a + b)*c")


def test_power_is_right_associative_and_binds_tighter_than_product():
    assert parse_expr("2^3^2") == Const(512)
    assert parse_expr("2*x^2") == simplify(2 * x**2)


def test_unary_minus_binds_tightest():
    # -x^2 is (-x)^2 in this grammar; write -1*x^2 for the negated square
    assert parse_expr("-x^2") == simplify(x**2)
    assert parse_expr("-1*x^2") == simplify(-(x**2))
    assert parse_expr("a - b - c") == simplify(Param("a") - Param("b") - Param("c"))


def test_implicit_multiplication():
    assert parse_expr("2x y") == simplify(2 * x * y)
    assert parse_expr("2(x + 1)") == simplify(2 * x + 2)


def test_syntax_error_offset_and_expected():
    with pytest.raises(ParseError) as info:
        parse_expr("x+*y")
    assert info.value.offset == 2
    assert "number" in info.value.expected and "identifier" in info.value.expected


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse_expr("x + β + y")
    assert info.value.offset == 4  # the first byte of the unrecognised character


@pytest.mark.parametrize(
    "text",
    ["", "(", "x +", "f(x,", "D(x)", "D(x, q)", "INT(x, y)", "INT(x, y, z)", "x^y", "exp", "f(x, x)", "1/0", "3)"],
)
def test_invalid_inputs(text):
    with pytest.raises(ParseError):
        parse_expr(text)


def test_operators():
    assert parse_expr("D(x^3, x, 2)") == simplify(6 * x)
    a = opaque("a", Y, Z)
    assert parse_expr("D(a(y,z), z)") == diff(a, Z)
    e = parse_expr("INT(exp(y^2), y, 0)")
    assert isinstance(e, Antideriv) and e.var == Y
    assert parse_expr("eps") == EPS
    assert isinstance(parse_expr("R(z)"), Opaque)
    assert isinstance(parse_expr("3/4"), Const)
    assert isinstance(parse_expr("x^(1/2)"), Power)
    assert isinstance(parse_expr("beta"), Param)
    assert parse_expr("z", canonical=False) == Coordinate(Z)


# -- fuzzing -------------------------------------------------------------------

_leaves = st.sampled_from(["x", "y", "z", "a", "2", "3/4", "1"])


def _binary(children):
    return st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]}{t[1]}{t[2]})")


def _unary(children):
    return st.one_of(
        children.map(lambda c: f"(-{c})"),
        children.map(lambda c: f"exp(({c})/4)"),
        children.map(lambda c: f"sin({c})"),
        children.map(lambda c: f"cos({c})"),
        st.tuples(children, st.integers(0, 3)).map(lambda t: f"(({t[0]})^{t[1]})"),
    )


sentences = st.recursive(_leaves, lambda ch: st.one_of(_binary(ch), _unary(ch)), max_leaves=8)


@given(sentences, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_valid_sentences_parse_to_the_right_tree(text, vx, vy, vz, va):
    e = parse_expr(text)
    got = evaluate(e, {"x": vx, "y": vy, "z": vz}, {"a": va})
    py = text.replace("^", "**")
    want = eval(py, {"exp": math.exp, "sin": math.sin, "cos": math.cos, "x": vx, "y": vy, "z": vz, "a": va})
    assert math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-9)


@given(st.text(alphabet="xyz ab+-*/^(),0123456789D", max_size=14))
def test_arbitrary_text_parses_or_raises_parse_error(text):
    try:
        parse_expr(text)
    except ParseError as exc:
        assert 0 <= exc.offset <= len(text.encode())


# -- scenario documents ------------------------------------------------------------

E1_DOC = """{
  "name": "ex-E1", "epsilon": 1, "beta": "1", "lambda": "1", "mu": "2",
  "f": "(1 + lambda)/mu*x^2",
  "field": {"vector": ["x*(1 - 2*beta/mu)", "y/eps", "0"]},
  "checks": ["ry"]
}"""


def test_parse_scenario_e1():
    sc = parse_scenario(E1_DOC.encode())
    lam, mu = Param("lambda"), Param("mu")
    assert sc.f == simplify((1 + lam) / mu * x**2)
    assert sc.metric().f == simplify(x**2)
    assert sc.sampling.count == 64 and sc.sampling.seed == 42
    assert parse_scenario(scenario_to_json(sc)) == sc


def test_scenario_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        parse_scenario(E1_DOC.replace('"epsilon": 1', '"epsilon": 0'))


def test_scenario_rejects_unknown_key():
    with pytest.raises(SchemaError):
        parse_scenario(E1_DOC.replace('"name"', '"gamma": "1", "name"'))


def test_scenario_rejects_missing_key_and_bad_json():
    with pytest.raises(SchemaError):
        parse_scenario(E1_DOC.replace('"checks": ["ry"]', '"sampling": {}'))
    with pytest.raises(SchemaError):
        parse_scenario(b"{not json")
    with pytest.raises(SchemaError):
        parse_scenario(b"\xff\xfe")


def test_trace_check_requires_concrete_mu():
    doc = """{"name": "t", "epsilon": 1, "beta": "free", "lambda": "0", "mu": "free",
              "f": "y*z*exp(-x)", "field": {"gradient": "exp(x + z)"}, "checks": ["trace"]}"""
    with pytest.raises(ValueError):
        parse_scenario(doc)


def test_check_field_compatibility_and_sampling_validation():
    doc = E1_DOC.replace('"checks": ["ry"]', '"checks": ["gradient_ry"]')
    with pytest.raises(ValueError):
        parse_scenario(doc)
    doc = E1_DOC.replace('"checks": ["ry"]', '"checks": ["ry"], "sampling": {"count": 0}')
    with pytest.raises(ValueError):
        parse_scenario(doc)
    doc = E1_DOC.replace('"checks": ["ry"]', '"checks": ["ry"], "sampling": {"range": [1, -1]}')
    with pytest.raises(ValueError):
        parse_scenario(doc)


def test_scenario_expression_errors_are_parse_errors():
    with pytest.raises(ParseError):
        parse_scenario(E1_DOC.replace("(1 + lambda)/mu*x^2", "x+*y"))
