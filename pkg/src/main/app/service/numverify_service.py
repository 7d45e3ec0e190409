# SPDX-License-Identifier: MIT
"""Numerical verification service"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping, Sequence

from src.main.app.core.expr import Expr
from src.main.app.core.integrate import Rhs
from src.main.app.core.ode import OdeSystem
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.model.reduction_model import Reduction
from src.main.app.model.sampled_model import SampledFunction
from src.main.app.schema.report_schema import Report

Point = tuple[float, float]
Field2 = Callable[[float, float], float]
Field3 = Callable[[float, float, float], float]


class NumverifyService(ABC):
    @abstractmethod
    def integrate_ode(
        self,
        rhs: Rhs | OdeSystem,
        y0: Sequence[float],
        span: tuple[float, float],
        tol: float | None = None,
    ) -> SampledFunction: ...

    @abstractmethod
    def pde_residual(
        self,
        u: Field2 | None,
        f: FSpec | FFamily | Expr,
        points: Sequence[Point],
        *,
        steps: tuple[float, float] | None = None,
        derivatives: Callable[[float, float], Mapping[str, float]] | None = None,
        tol: float | None = None,
        max_workers: int | None = None,
    ) -> Report: ...

    @abstractmethod
    def verify_reduction(
        self,
        reduction: Reduction,
        h: SampledFunction,
        grid: Sequence[Point],
        *,
        params: Mapping[str, float] | None = None,
        method: str = "symbolic",
        max_workers: int | None = None,
    ) -> Report: ...

    @abstractmethod
    def verify_surface_condition(
        self,
        p: Field2,
        r: Field3,
        u: Field2,
        points: Sequence[Point],
        *,
        tol: float | None = None,
    ) -> Report: ...

    @abstractmethod
    def build_invariant_solution(
        self, p: Field2, r: Field3, g: Callable[[float], float], t0: float
    ) -> Field2: ...
