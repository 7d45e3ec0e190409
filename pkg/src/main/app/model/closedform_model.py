# SPDX-License-Identifier: MIT
"""Closed-form solution data models"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy

from src.main.app.core.expr import Expr, u, x
from src.main.app.enums.enum import FieldNormalization
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.field_model import Candidate, TimeJets
from src.main.app.model.sampled_model import SampledFunction

# time profile h(t) of the nonclassical fields with its t-derivatives, and the
# integral of h / h'^2
TIME_JETS = sympy.symbols("H H_t H_tt H_ttt H_tttt H_ttttt")
HT, HT_T = TIME_JETS[:2]
IT = sympy.Symbol("I_H")


@dataclass(frozen=True)
class QuadratureSolution:
    """
    Implicit travelling-wave profile

        z = -k4 + sign * sqrt(a m / 2) * integral_{h_ref}^{h} I(s)^(-1/2) ds,

    I(s) = -a m (k2 s + k3) - d (a s + b)^m with m = n + 1. For n = -1 the
    prefactor is sqrt(a / 2) and I(s) = -a (k2 s + k3) - d log(a s + b).
    Solutions satisfy h'' = -k2 - d (a h + b)^n.
    """

    n: float
    a: float
    b: float
    d: float
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    sign: int = 1
    h_ref: float = 0.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, "sign must be +1 or -1")
        if self.a == 0 or self.d == 0:
            raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, "a and d must be nonzero")
        if self.n in (0, 1):
            raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, f"n={self.n}")
        if self.prefactor_squared <= 0:
            raise AnalysisException(
                AnalysisErrorCode.INVALID_FAMILY,
                f"a (n + 1) / 2 = {self.prefactor_squared} is not positive",
            )

    @property
    def is_logarithmic(self) -> bool:
        return self.n == -1

    @property
    def prefactor_squared(self) -> float:
        if self.is_logarithmic:
            return self.a / 2
        return self.a * (self.n + 1) / 2

    @property
    def prefactor(self) -> float:
        return math.sqrt(self.prefactor_squared)

    def integrand(self, s):
        s = np.asarray(s, dtype=float)
        base = self.a * s + self.b
        with np.errstate(invalid="ignore", divide="ignore"):
            if self.is_logarithmic:
                return -self.a * (self.k2 * s + self.k3) - self.d * np.log(base)
            m = self.n + 1
            return -self.a * m * (self.k2 * s + self.k3) - self.d * np.power(base, m)

    def second_derivative(self, h: float) -> float:
        return -self.k2 - self.d * (self.a * h + self.b) ** self.n

    def slope(self, h: float) -> float:
        """h' at a point where the profile takes the value h."""
        value = float(self.integrand(h))
        return self.sign * math.sqrt(max(value, 0.0) / self.prefactor_squared)


@dataclass(frozen=True)
class WeierstrassParams:
    """Invariants of P with P'^2 = 4 P^3 - g2 P - g3."""

    g2: float
    g3: float


@dataclass(frozen=True)
class NonclassicalAnsatz:
    """
    Data of the nonclassical family for a quadratic nonlinearity
    f = d u^2 + b u (+ c): a time profile h(t) with h'^2 = k3 h^3 + k4,
    the constants k1, k2 and the base point of the integral of h / h'^2.
    """

    b: float
    d: float
    k1: float
    k2: float
    k3: float
    k4: float
    profile: SampledFunction
    t_base: float | None = None

    def __post_init__(self):
        if self.d == 0:
            raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, "d must be nonzero")


@dataclass(frozen=True)
class NonclassicalFields:
    """Explicit p(x, t) and r(x, t, u) of a nonclassical generator with q = 1."""

    p: Expr
    r: Expr
    time_jets: TimeJets
    normalization: FieldNormalization

    def candidate(self) -> Candidate:
        return Candidate(p=self.p, q=None, r=self.r, time_jets=self.time_jets)

    def _compile(self, e: Expr) -> Callable[..., float]:
        return sympy.lambdify((x, u, *self.time_jets.symbols), e, modules="math")

    @cached_property
    def _p_fn(self) -> Callable[..., float]:
        return self._compile(self.p)

    @cached_property
    def _r_fn(self) -> Callable[..., float]:
        return self._compile(self.r)

    def _jets_at(self, t_value: float) -> list[float]:
        jets = self.time_jets.values(t_value)
        return [jets[s] for s in self.time_jets.symbols]

    def p_at(self, x_value: float, t_value: float) -> float:
        return float(self._p_fn(x_value, 0.0, *self._jets_at(t_value)))

    def r_at(self, x_value: float, t_value: float, u_value: float) -> float:
        return float(self._r_fn(x_value, u_value, *self._jets_at(t_value)))
