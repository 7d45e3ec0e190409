# SPDX-License-Identifier: MIT
"""Vector field data model"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import sympy

from src.main.app.core.expr import Expr, jet_symbol, jets_of, t, u, unknown_function, x
from src.main.app.exception import AnalysisErrorCode, AnalysisException

P = unknown_function("p")
Q = unknown_function("q")
R = unknown_function("r")


@dataclass(frozen=True)
class VectorField:
    """V = p ∂x + q ∂t + r ∂u with coefficients depending on (x, t, u) only."""

    p: Expr
    q: Expr
    r: Expr

    def __post_init__(self) -> None:
        for name in ("p", "q", "r"):
            value = sympy.sympify(getattr(self, name))
            if jets_of(value, min_order=1):
                raise AnalysisException(
                    AnalysisErrorCode.UNBOUND_SYMBOL,
                    f"Coefficient {name} depends on derivatives of u: {value}",
                )
            object.__setattr__(self, name, value)

    @classmethod
    def symbolic(cls, q_fixed: Expr | None = None) -> VectorField:
        q = Q(x, t, u) if q_fixed is None else q_fixed
        return cls(P(x, t, u), q, R(x, t, u))

    @classmethod
    def translation_x(cls) -> VectorField:
        return cls(1, 0, 0)

    @classmethod
    def translation_t(cls) -> VectorField:
        return cls(0, 1, 0)

    def components(self) -> tuple[Expr, Expr, Expr]:
        return self.p, self.q, self.r

    def characteristic(self) -> Expr:
        """Q = r - p u_x - q u_t."""
        return self.r - self.p * jet_symbol(1, 0) - self.q * jet_symbol(0, 1)

    def scale(self, factor: Expr) -> VectorField:
        return VectorField(*(sympy.expand(factor * c) for c in self.components()))

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(
            *(sympy.expand(a + b) for a, b in zip(self.components(), other.components()))
        )

    def is_zero(self) -> bool:
        return all(sympy.expand(c) == 0 for c in self.components())


@dataclass
class ProlongedField:
    """A vector field together with its prolongation coefficients η^J."""

    base: VectorField
    order: int
    eta: dict[tuple[int, int], Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class TimeJets:
    """
    Symbols standing for functions of t inside a candidate field.

    ``rules`` gives the t-derivative of each symbol; ``values`` evaluates all of
    them at a given t.
    """

    symbols: tuple[sympy.Symbol, ...]
    rules: dict[sympy.Symbol, Expr]
    values: Callable[[float], dict[sympy.Symbol, float]]
    t_range: tuple[float, float]

    def partial(self, e: Expr, var: sympy.Symbol) -> Expr:
        result = sympy.diff(e, var)
        if var == t:
            for s in self.symbols:
                result += self.rules[s] * sympy.diff(e, s)
        return result


@dataclass(frozen=True)
class Candidate:
    """A candidate symmetry; ``q is None`` means the nonclassical gauge q = 1."""

    p: Expr
    q: Expr | None
    r: Expr
    time_jets: TimeJets | None = None

    @classmethod
    def of(cls, field: VectorField) -> Candidate:
        return cls(field.p, field.q, field.r)

    def functions(self) -> dict:
        values = {P: self.p, R: self.r}
        if self.q is not None:
            values[Q] = self.q
        return values

    def partial(self, e: Expr, var: sympy.Symbol) -> Expr:
        if self.time_jets is None:
            return sympy.diff(e, var)
        return self.time_jets.partial(e, var)
