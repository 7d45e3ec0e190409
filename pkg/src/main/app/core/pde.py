# SPDX-License-Identifier: MIT
"""The generalized Boussinesq equation u_tt - u_xx + (f(u) + u_xx)_xx = 0."""

from __future__ import annotations

from functools import lru_cache

import sympy

from src.main.app.core.expr import Expr, jet_symbol
from src.main.app.model.equation_model import FSpec

BOUSSINESQ_TEXT = "u_tt - u_xx + d2x(f(u) + u_xx)"

U_TT = jet_symbol(0, 2)
U_XXXX = jet_symbol(4, 0)


@lru_cache(maxsize=1)
def _symbolic_lhs() -> Expr:
    from src.main.app.core.parser import parse

    return sympy.expand(parse(BOUSSINESQ_TEXT))


def boussinesq(f: FSpec | None = None) -> Expr:
    """Left-hand side of the equation with f left symbolic or instantiated."""
    lhs = _symbolic_lhs()
    if f is None or f.is_symbolic:
        return lhs
    return sympy.expand(f.instantiate(lhs))


def solved_for_utt(f: FSpec | None = None) -> Expr:
    """u_tt = u_xx - (f(u))_xx - u_xxxx as a right-hand side."""
    return sympy.expand(U_TT - boussinesq(f))
