# SPDX-License-Identifier: MIT
"""
Total derivatives and prolongation on the jet space of u(x, t).

D_x = ∂x + Σ u_{J,x} ∂/∂u_J and likewise for t. Prolongation coefficients follow
η^{J,x} = D_x η^J - (D_x p) u_{J,x} - (D_x q) u_{J,t}.
"""

from __future__ import annotations

from collections.abc import Iterable

import sympy
from fastlib.logging import logger

from src.main.app.config import get_jet_config
from src.main.app.core.expr import (
    Expr,
    jet_index,
    jet_symbol,
    jets_of,
    symbol,
    t,
    x,
)
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.field_model import ProlongedField, VectorField

MAX_PROLONG_ORDER = 4

GENERATOR_BASIS = (symbol("dx"), symbol("dt"), symbol("du"))


def _direction(direction: str | sympy.Symbol) -> tuple[sympy.Symbol, int]:
    name = str(direction)
    if name == "x":
        return x, 0
    if name == "t":
        return t, 1
    raise ValueError(f"Total derivative direction must be x or t, got {name}")


def total_derivative(e: Expr, direction: str | sympy.Symbol) -> Expr:
    """D_x or D_t of ``e``, raising jet indices by one."""
    var, axis = _direction(direction)
    max_order = get_jet_config().max_order
    e = sympy.sympify(e)
    result = sympy.diff(e, var)
    for s in sorted(e.free_symbols, key=lambda s: s.name):
        index = jet_index(s)
        if index is None:
            continue
        i, j = index
        if i + j + 1 > max_order:
            raise AnalysisException(
                AnalysisErrorCode.JET_ORDER_OVERFLOW,
                f"D_{var} of {s.name} exceeds order {max_order}",
            )
        raised = jet_symbol(i + 1, j) if axis == 0 else jet_symbol(i, j + 1)
        result += raised * sympy.diff(e, s)
    return result


def total_derivative_n(e: Expr, nx: int = 0, nt: int = 0) -> Expr:
    for _ in range(nx):
        e = total_derivative(e, "x")
    for _ in range(nt):
        e = total_derivative(e, "t")
    return e


def multi_indices(order: int) -> list[tuple[int, int]]:
    return [(i, n - i) for n in range(order + 1) for i in range(n, -1, -1)]


def _ancestors(indices: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    needed: set[tuple[int, int]] = set()
    for i, j in indices:
        while (i, j) not in needed:
            needed.add((i, j))
            if j > 0:
                j -= 1
            elif i > 0:
                i -= 1
    return needed


def prolong(
    field: VectorField,
    order: int,
    method: str = "recursive",
    only: Iterable[tuple[int, int]] | None = None,
) -> ProlongedField:
    """
    Prolongation coefficients η^J for |J| <= order.

    ``only`` restricts the result to the given multi-indices (and whatever the
    recursion needs to reach them).
    """
    if not 0 <= order <= MAX_PROLONG_ORDER:
        raise AnalysisException(
            AnalysisErrorCode.ORDER_OUT_OF_RANGE, f"order={order}"
        )
    wanted = [J for J in multi_indices(order) if only is None or J in set(only)]
    if method == "characteristic":
        eta = _prolong_characteristic(field, wanted)
    elif method == "recursive":
        eta = _prolong_recursive(field, _ancestors(wanted) | {(0, 0)})
    else:
        raise ValueError(f"Unknown prolongation method: {method}")
    logger.debug(f"Prolonged to order {order} ({len(eta)} coefficients)")
    return ProlongedField(field, order, {J: eta[J] for J in multi_indices(order) if J in eta})


def _prolong_recursive(
    field: VectorField, needed: set[tuple[int, int]]
) -> dict[tuple[int, int], Expr]:
    p, q = field.p, field.q
    dp = {"x": total_derivative(p, "x"), "t": total_derivative(p, "t")}
    dq = {"x": total_derivative(q, "x"), "t": total_derivative(q, "t")}
    eta: dict[tuple[int, int], Expr] = {(0, 0): field.r}
    for i, j in sorted(needed, key=lambda J: (sum(J), -J[0])):
        if (i, j) == (0, 0):
            continue
        if j > 0:
            prev, d = (i, j - 1), "t"
        else:
            prev, d = (i - 1, j), "x"
        pi, pj = prev
        value = (
            total_derivative(eta[prev], d)
            - dp[d] * jet_symbol(pi + 1, pj)
            - dq[d] * jet_symbol(pi, pj + 1)
        )
        eta[(i, j)] = sympy.expand(value)
    return eta


def _prolong_characteristic(
    field: VectorField, wanted: list[tuple[int, int]]
) -> dict[tuple[int, int], Expr]:
    characteristic = field.characteristic()
    eta = {}
    for i, j in wanted:
        value = (
            total_derivative_n(characteristic, i, j)
            + field.p * jet_symbol(i + 1, j)
            + field.q * jet_symbol(i, j + 1)
        )
        eta[(i, j)] = sympy.expand(value)
    return eta


def apply_prolonged(prolonged: ProlongedField, e: Expr) -> Expr:
    """pr V (e) = p e_x + q e_t + Σ η^J ∂e/∂u_J."""
    e = sympy.sympify(e)
    base = prolonged.base
    result = base.p * sympy.diff(e, x) + base.q * sympy.diff(e, t)
    for s in jets_of(e):
        J = jet_index(s)
        if J not in prolonged.eta:
            raise AnalysisException(
                AnalysisErrorCode.ORDER_OUT_OF_RANGE,
                f"{s.name} is beyond the prolongation order {prolonged.order}",
            )
        result += prolonged.eta[J] * sympy.diff(e, s)
    return sympy.expand(result)


def parse_generator(text: str) -> VectorField:
    """Parse ``p*dx + q*dt + r*du`` into a vector field."""
    from src.main.app.core.parser import parse
    from src.main.app.exception import ExprParseException, ParseErrorCode

    e = sympy.expand(parse(text))
    dx, dt, du = GENERATOR_BASIS
    coefficients = [e.coeff(b) for b in GENERATOR_BASIS]
    remainder = sympy.expand(e - sum(c * b for c, b in zip(coefficients, GENERATOR_BASIS)))
    if remainder != 0 or any(c.has(dx, dt, du) for c in coefficients):
        raise ExprParseException(
            ParseErrorCode.SYNTAX_ERROR,
            f"Generator must be linear in dx, dt, du: {text}",
        )
    return VectorField(*coefficients)


def render_generator(field: VectorField) -> str:
    from src.main.app.core.parser import render

    parts = []
    for coefficient, basis in zip(field.components(), GENERATOR_BASIS):
        if coefficient == 0:
            continue
        if coefficient == 1:
            parts.append(str(basis))
        else:
            parts.append(f"({render(coefficient)})*{basis}")
    return " + ".join(parts) if parts else "0"
