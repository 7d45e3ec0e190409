# SPDX-License-Identifier: MIT
"""Similarity reduction data model"""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from src.main.app.core.expr import Expr, substitute, unknown_function
from src.main.app.core.similarity import H
from src.main.app.enums.enum import ReductionKind
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily


@dataclass
class Reduction:
    """
    An invariant z(x, t), an ansatz u = U(x, t, h(z)) and the ODE for h.

    Attributes:
        invariant: z as an expression in x and t
        ansatz: u in terms of x, t and the symbol h standing for h(z)
        ode: the reduced equation, monic in h'''' and free of x and t
        separation_factor: power of t divided out of the substituted equation
        integrated: twice-integrated travelling wave form with constants k1, k2
    """

    kind: ReductionKind
    f: FSpec
    invariant: Expr
    ansatz: Expr
    ode: Expr | None = None
    separation_factor: Expr = sympy.Integer(1)
    family: FFamily | None = None
    speed: Expr | None = None
    integrated: Expr | None = None

    def ansatz_applied(self) -> Expr:
        """The ansatz with h written as the function h(z(x, t))."""
        return substitute(self.ansatz, {H[0]: unknown_function("h")(self.invariant)})
