import math

import numpy as np
import pytest

from fgeom.errors import EvalDomainError, ExprSyntaxError
from fgeom.exprlang import (
    BinOp,
    Call,
    Const,
    ExprMap,
    Neg,
    Var,
    eval_value,
    free_vars,
    parse,
    to_source,
)


def test_parse_precedence_and_associativity():
    assert parse("1+2*3") == BinOp("+", Const(1.0), BinOp("*", Const(2.0), Const(3.0)))
    assert parse("1-2-3") == BinOp("-", BinOp("-", Const(1.0), Const(2.0)), Const(3.0))
    # ^ is right associative and binds tighter than unary minus
    assert parse("2^3^2") == BinOp("^", Const(2.0), BinOp("^", Const(3.0), Const(2.0)))
    assert parse("-x^2") == Neg(BinOp("^", Var("x"), Const(2.0)))
    assert eval_value(parse("-2^2"), {}) == -4.0
    assert eval_value(parse("2^3^2"), {}) == 512.0


def test_parse_functions_and_scientific_notation():
    assert parse("sin(x)") == Call("sin", Var("x"))
    assert eval_value(parse("1.5e-3+2E+1"), {}) == pytest.approx(0.0015 + 20.0)


def test_syntax_error_carries_location_and_expectation():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2*+3")
    assert err.value.line == 1
    assert err.value.column == 3

    with pytest.raises(ExprSyntaxError) as err:
        parse("sin(x")
    assert ")" in err.value.expected

    with pytest.raises(ExprSyntaxError):
        parse("foo(x)")

    with pytest.raises(ExprSyntaxError):
        parse("1 + ")


def test_unbound_variable_reported_at_evaluation():
    expr = parse("x+y")
    with pytest.raises(EvalDomainError):
        eval_value(expr, {"x": 1.0})


def test_domain_errors_name_the_subexpression():
    with pytest.raises(EvalDomainError) as err:
        eval_value(parse("log(x-2)"), {"x": 1.0})
    assert "log" in str(err.value)
    with pytest.raises(EvalDomainError):
        eval_value(parse("sqrt(-1+x)"), {"x": 0.0})
    with pytest.raises(EvalDomainError):
        eval_value(parse("1/(x-1)"), {"x": 1.0})


VARS = ("x", "y", "z")


def random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Var(VARS[rng.integers(3)])
        return Const(float(rng.uniform(0.0, 5.0)))
    kind = rng.integers(7)
    if kind == 0:
        return Neg(random_tree(rng, depth - 1))
    if kind == 1:
        return Call(("sin", "cos", "exp")[rng.integers(3)], random_tree(rng, depth - 1))
    if kind == 2:
        return BinOp("^", random_tree(rng, depth - 1), Const(float(rng.integers(0, 4))))
    op = ("+", "-", "*", "/")[rng.integers(4)]
    return BinOp(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))


def test_printer_round_trips_500_random_trees():
    rng = np.random.default_rng(23)
    for _ in range(500):
        tree = random_tree(rng, 5)
        assert parse(to_source(tree)) == tree


def test_eval_matches_python_arithmetic():
    rng = np.random.default_rng(5)
    point = {"x": 0.7, "y": -0.4, "z": 1.3}
    cases = [
        ("x*y+z", 0.7 * -0.4 + 1.3),
        ("sin(x)*cos(y)-exp(z/2)", math.sin(0.7) * math.cos(-0.4) - math.exp(0.65)),
        ("(x+y)^3", (0.3) ** 3),
        ("sqrt(z)*log(z)", math.sqrt(1.3) * math.log(1.3)),
    ]
    for src, expected in cases:
        assert eval_value(parse(src), point) == pytest.approx(expected, abs=1e-12)
    del rng


def test_free_vars_and_expr_map():
    assert free_vars(parse("sin(x)*y+2")) == {"x", "y"}
    m = ExprMap(("u", "v"), ["u^2+v", "cos(u)"])
    vals = m.values([2.0, 3.0])
    assert vals[0] == pytest.approx(7.0)
    assert vals[1] == pytest.approx(math.cos(2.0))
    with pytest.raises(EvalDomainError):
        ExprMap(("u",), ["u+w"])
