# SPDX-License-Identifier: MIT
import pytest
import sympy

from src.main.app.core.expr import F, jet_symbol, normalize, symbol, t, u, unknown_function, x
from src.main.app.core.parser import parse, render
from src.main.app.exception import ExprParseException, ParseErrorCode

a, b, c = (symbol(s) for s in "abc")


def test_precedence():
    assert parse("-2^2") == -4
    assert parse("2^3^2") == 512
    assert parse("a/b/c") == a / (b * c)
    assert parse("a - b - c") == a - b - c
    assert parse("(a + b)*c") == (a + b) * c


def test_decimals_are_exact():
    assert parse("0.25") == sympy.Rational(1, 4)


def test_jets_and_calls():
    assert parse("u_xx + 2*u^3") == jet_symbol(2, 0) + 2 * u**3
    assert parse("exp(a*u) + log(u)") == sympy.exp(a * u) + sympy.log(u)


def test_primed_unknown_function():
    assert parse("f''(u)") == sympy.Derivative(F(u), (u, 2))


def test_subscripted_unknown_function():
    p = unknown_function("p")
    assert parse("p_xu(x,t,u)") == sympy.Derivative(p(x, t, u), x, u)


def test_total_derivative_calls():
    assert parse("dx(u^2)") == 2 * u * jet_symbol(1, 0)
    assert parse("dt(u_x)") == jet_symbol(1, 1)
    assert normalize(parse("d2x(f(u))") - parse("f''(u)*u_x^2 + f'(u)*u_xx")) == 0


@pytest.mark.parametrize(
    "text, code",
    [
        ("1 +", ParseErrorCode.SYNTAX_ERROR),
        ("a $ b", ParseErrorCode.SYNTAX_ERROR),
        ("(a + b", ParseErrorCode.SYNTAX_ERROR),
        ("u_q", ParseErrorCode.UNKNOWN_SYMBOL),
        ("sin(x)", ParseErrorCode.UNKNOWN_SYMBOL),
        ("a''(u)", ParseErrorCode.UNKNOWN_SYMBOL),
    ],
)
def test_parse_errors(text, code):
    with pytest.raises(ExprParseException) as exc:
        parse(text)
    assert exc.value.code == code


def test_syntax_error_position():
    with pytest.raises(ExprParseException) as exc:
        parse("a + * b")
    assert exc.value.position == 4


@pytest.mark.parametrize(
    "text",
    [
        "d*(a*u + b)^n + u + c",
        "d*log(a*u + b) + u",
        "exp(a*u)/2 - 1/(u + 1)",
        "u_tt - u_xx + f''(u)*u_x^2 + f'(u)*u_xx + u_xxxx",
        "x^(1/2)*t^(-3/2)",
    ],
)
def test_render_parses_back(text):
    e = parse(text)
    assert normalize(parse(render(e)) - e) == 0


def test_render_uses_grammar_operators():
    assert render(u**2) == "u^2"
    assert render(sympy.Derivative(F(u), (u, 2))) == "f''(u)"
    assert render(t ** sympy.Rational(1, 2)) == "t^(1/2)"
