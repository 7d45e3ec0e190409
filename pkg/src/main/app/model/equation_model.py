# SPDX-License-Identifier: MIT
"""Nonlinearity and determining system data models"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import sympy
from sympy.core.function import UndefinedFunction

from src.main.app.core.expr import (
    F,
    Expr,
    instantiate_functions,
    jets_of,
    u,
    unknown_functions_of,
)
from src.main.app.enums.enum import Method
from src.main.app.exception import AnalysisErrorCode, AnalysisException


@dataclass(frozen=True)
class FSpec:
    """The nonlinearity f: either the unknown function f(u) or an expression in u."""

    expr: Expr | None = None

    def __post_init__(self) -> None:
        if self.expr is None:
            return
        value = sympy.sympify(self.expr)
        if value.has(F):
            if value != F(u):
                raise AnalysisException(
                    AnalysisErrorCode.INVALID_FAMILY,
                    f"the unknown nonlinearity must appear alone as f(u): {value}",
                )
            object.__setattr__(self, "expr", None)
            return
        bad = [s.name for s in value.free_symbols if s.name in ("x", "t", "z")]
        if bad or jets_of(value, min_order=1) or unknown_functions_of(value):
            raise AnalysisException(
                AnalysisErrorCode.INVALID_FAMILY,
                f"f must depend on u and parameters only: {value}",
            )
        object.__setattr__(self, "expr", value)

    @property
    def is_symbolic(self) -> bool:
        return self.expr is None

    def applied(self, arg: Expr = u) -> Expr:
        if self.expr is None:
            return F(arg)
        return self.expr.xreplace({u: arg})

    def instantiate(self, e: Expr) -> Expr:
        """Replace f and its derivatives in ``e`` by the concrete nonlinearity."""
        if self.expr is None:
            return e
        return instantiate_functions(e, {F: sympy.Lambda(u, self.expr)})

    def render(self) -> str:
        from src.main.app.core.parser import render

        return "f(u)" if self.expr is None else render(self.expr)


@dataclass
class DeterminingSystem:
    """
    Coefficients of the free jet monomials of the symmetry condition.

    Attributes:
        method: classical or nonclassical
        f: the nonlinearity the system was built for
        equations: one expression per jet monomial, each required to vanish
        basis: the jet monomial each equation is the coefficient of
        unknowns: the unknown functions of (x, t, u) being solved for
        fixed: components fixed by normalization (q = 1 for nonclassical)
    """

    method: Method
    f: FSpec
    equations: list[Expr]
    basis: list[Expr]
    unknowns: tuple[UndefinedFunction, ...]
    fixed: dict[str, Expr] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.equations)
