# SPDX-License-Identifier: MIT
"""
Text form of expressions.

Grammar (precedence low to high): ``+ -`` (left), ``* /`` (left), unary ``-``,
``^`` (right). Atoms are exact decimal numbers, identifiers, parenthesized
expressions and calls. Recognized calls are ``exp``, ``log``, the total
derivatives ``dx``, ``dt``, ``d2x``, and unknown functions written with primes
(``f''(u)``) or with a subscript naming the differentiated arguments
(``p_xu(x,t,u)``). Any other call is an unknown symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import sympy
from sympy.core.function import AppliedUndef
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from src.main.app.core.expr import (
    UNKNOWN_FUNCTION_NAMES,
    Expr,
    canonical_symbol,
    symbol,
    symbol_class,
    unknown_function,
)
from src.main.app.exception import ExprParseException, ParseErrorCode

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),'])|(?P<bad>\S))"
)

ELEMENTARY_CALLS = ("exp", "log")
DERIVATIVE_CALLS = ("dx", "dt", "d2x")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        kind = m.lastgroup
        if kind is None:
            continue
        if kind == "bad":
            raise ExprParseException(
                ParseErrorCode.SYNTAX_ERROR,
                f"Unexpected character {m.group(kind)!r}",
                m.start(kind),
            )
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
    tokens.append(Token("eof", "", len(text)))
    return tokens


# (left binding power, right binding power)
_INFIX = {"+": (10, 11), "-": (10, 11), "*": (20, 21), "/": (20, 21), "^": (31, 30)}
_PREFIX_BP = 25


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text:
            raise self.error(f"Expected {text!r}", token)
        return token

    def error(self, message: str, token: Token) -> ExprParseException:
        found = token.text or "end of input"
        return ExprParseException(
            ParseErrorCode.SYNTAX_ERROR, f"{message}, found {found!r}", token.pos
        )

    def parse(self) -> Expr:
        result = self.parse_expr(0)
        token = self.peek()
        if token.kind != "eof":
            raise self.error("Unexpected token", token)
        return result

    def parse_expr(self, min_bp: int) -> Expr:
        left = self.parse_prefix()
        while True:
            token = self.peek()
            if token.kind != "op" or token.text not in _INFIX:
                break
            lbp, rbp = _INFIX[token.text]
            if lbp < min_bp:
                break
            self.advance()
            right = self.parse_expr(rbp)
            left = _combine(token.text, left, right)
        return left

    def parse_prefix(self) -> Expr:
        token = self.advance()
        if token.kind == "num":
            return sympy.Rational(token.text)
        if token.text == "-":
            return -self.parse_expr(_PREFIX_BP)
        if token.text == "+":
            return self.parse_expr(_PREFIX_BP)
        if token.text == "(":
            inner = self.parse_expr(0)
            self.expect(")")
            return inner
        if token.kind == "ident":
            return self.parse_identifier(token)
        raise self.error("Expected an operand", token)

    def parse_arguments(self) -> list[Expr]:
        self.expect("(")
        args = [self.parse_expr(0)]
        while self.peek().text == ",":
            self.advance()
            args.append(self.parse_expr(0))
        self.expect(")")
        return args

    def parse_identifier(self, token: Token) -> Expr:
        name = token.text
        primes = 0
        while self.peek().text == "'":
            self.advance()
            primes += 1
        if primes:
            if name not in UNKNOWN_FUNCTION_NAMES or self.peek().text != "(":
                raise ExprParseException(
                    ParseErrorCode.UNKNOWN_SYMBOL,
                    f"Primes are only allowed on unknown functions: {name}",
                    token.pos,
                )
            args = self.parse_arguments()
            return _primed_call(name, args, primes, token)
        if self.peek().text == "(":
            args = self.parse_arguments()
            return _call(name, args, token)
        try:
            symbol_class(name)
        except ExprParseException as exc:
            raise ExprParseException(exc.code, exc.message, token.pos) from exc
        return canonical_symbol(name)


def _combine(op: str, left: Expr, right: Expr) -> Expr:
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        return left / right
    return left**right


def _primed_call(name: str, args: list[Expr], primes: int, token: Token) -> Expr:
    if len(args) != 1 or not isinstance(args[0], sympy.Symbol):
        raise ExprParseException(
            ParseErrorCode.SYNTAX_ERROR,
            f"{name}{chr(39) * primes} takes a single symbol argument",
            token.pos,
        )
    (arg,) = args
    return sympy.Derivative(unknown_function(name)(arg), (arg, primes))


def _call(name: str, args: list[Expr], token: Token) -> Expr:
    from src.main.app.core.jet import total_derivative

    if name in ELEMENTARY_CALLS or name in DERIVATIVE_CALLS:
        if len(args) != 1:
            raise ExprParseException(
                ParseErrorCode.SYNTAX_ERROR, f"{name} takes one argument", token.pos
            )
        (arg,) = args
        if name == "exp":
            return sympy.exp(arg)
        if name == "log":
            return sympy.log(arg)
        if name == "dx":
            return total_derivative(arg, "x")
        if name == "dt":
            return total_derivative(arg, "t")
        return total_derivative(total_derivative(arg, "x"), "x")

    base, _, subscript = name.partition("_")
    if base not in UNKNOWN_FUNCTION_NAMES:
        raise ExprParseException(
            ParseErrorCode.UNKNOWN_SYMBOL, f"Unknown function {name!r}", token.pos
        )
    applied = unknown_function(base)(*args)
    if not subscript:
        return applied
    by_name = {str(a): a for a in args if isinstance(a, sympy.Symbol)}
    try:
        variables = [by_name[letter] for letter in subscript]
    except KeyError as exc:
        raise ExprParseException(
            ParseErrorCode.UNKNOWN_SYMBOL,
            f"Subscript of {name} must name symbol arguments",
            token.pos,
        ) from exc
    return sympy.Derivative(applied, *variables)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression."""
    return Parser(text).parse()


class GrammarPrinter(StrPrinter):
    """Prints expressions in the grammar ``parse`` accepts."""

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.as_base_exp()
        if exponent == -1:
            return "1/" + self.parenthesize(base, PRECEDENCE["Pow"], strict=True)
        b = self.parenthesize(base, PRECEDENCE["Pow"], strict=True)
        if isinstance(exponent, (sympy.Integer, sympy.Symbol)) and not exponent.is_negative:
            return f"{b}^{self._print(exponent)}"
        return f"{b}^({self._print(exponent)})"

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"

    def _print_Derivative(self, expr):
        inner = expr.expr
        if not isinstance(inner, AppliedUndef):
            raise ValueError(f"No text form for derivative of {inner}")
        name = inner.func.__name__
        args = ",".join(self._print(a) for a in inner.args)
        counts = expr.variable_count
        if len(inner.args) == 1:
            total = sum(int(n) for _, n in counts)
            return f"{name}{chr(39) * total}({args})"
        subscript = "".join(str(v) * int(n) for v, n in counts)
        return f"{name}_{subscript}({args})"

    def _print_Dummy(self, expr):
        return expr.name


def render(e: Expr) -> str:
    """Text form of ``e``; ``parse(render(e))`` equals ``e`` after normalization."""
    return GrammarPrinter().doprint(sympy.sympify(e))


def parse_symbol(name: str) -> sympy.Symbol:
    """Parse a bare identifier, e.g. a CLI parameter name."""
    symbol_class(name)
    return symbol(name)


__all__ = ["GrammarPrinter", "Parser", "parse", "parse_symbol", "render"]
