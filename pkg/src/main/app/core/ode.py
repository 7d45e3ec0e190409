# SPDX-License-Identifier: MIT
"""Quasi-linear ODEs as first-order systems for numerical integration."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np
import sympy
from sympy.core.function import AppliedUndef

from src.main.app.core.expr import Expr, z
from src.main.app.core.similarity import H, z_derivative
from src.main.app.exception import AnalysisErrorCode, AnalysisException


def top_order(ode: Expr, jets: Sequence[sympy.Symbol] = H) -> int:
    present = [k for k, s in enumerate(jets) if ode.has(s)]
    if not present:
        raise AnalysisException(AnalysisErrorCode.UNBOUND_SYMBOL, "ODE has no unknown")
    return max(present)


def make_monic(ode: Expr, jets: Sequence[sympy.Symbol] = H) -> Expr:
    """Divide by the coefficient of the highest derivative."""
    top = jets[top_order(ode, jets)]
    coefficient = sympy.diff(ode, top)
    if coefficient.has(top):
        raise AnalysisException(
            AnalysisErrorCode.SEPARATION_FAILURE, f"ODE is not linear in {top}"
        )
    return sympy.expand(ode / coefficient)


class OdeSystem:
    """
    y = (h, h', ..., h^(m-1)), y' = (h', ..., h^(m)) with h^(m) solved from the ODE.

    ``extend`` also returns h^(m), h^(m+1), ... obtained by differentiating the
    solved form along solutions.
    """

    def __init__(
        self,
        ode: Expr,
        var: sympy.Symbol = z,
        jets: Sequence[sympy.Symbol] = H,
        extra_orders: int = 4,
    ):
        self.var = var
        self.jets = tuple(jets)
        self.order = top_order(ode, self.jets)
        monic = make_monic(ode, self.jets)
        allowed = {var, *self.jets[: self.order + 1]}
        unbound = sorted(s.name for s in monic.free_symbols if s not in allowed)
        unbound += sorted(str(a.func) for a in monic.atoms(AppliedUndef))
        if unbound:
            raise AnalysisException(
                AnalysisErrorCode.UNBOUND_PARAMETER, f"ODE has unbound symbols {unbound}"
            )
        self.ode = monic
        state = self.jets[: self.order]
        top = self.jets[self.order]
        solved = sympy.expand(top - monic)
        self.higher: list[Expr] = [solved]
        for _ in range(extra_orders):
            nxt = z_derivative(self.higher[-1], self.jets, var).xreplace({top: solved})
            self.higher.append(sympy.expand(nxt))
        args = (var, *state)
        self._higher_fns: list[Callable[..., float]] = [
            sympy.lambdify(args, e, modules="math") for e in self.higher
        ]

    def rhs(self, s: float, y: np.ndarray) -> np.ndarray:
        out = np.empty(self.order)
        out[:-1] = y[1:]
        out[-1] = self._higher_fns[0](s, *y)
        return out

    def extend(self, s: float, y: Sequence[float], upto: int) -> list[float]:
        """h, h', ..., h^(upto) at s given the state y."""
        values = [float(v) for v in y[: self.order]]
        k = 0
        while len(values) <= upto:
            if k >= len(self._higher_fns):
                raise AnalysisException(
                    AnalysisErrorCode.JET_ORDER_OVERFLOW, f"derivative {upto} not prepared"
                )
            values.append(float(self._higher_fns[k](s, *y[: self.order])))
            k += 1
        return values[: upto + 1]
