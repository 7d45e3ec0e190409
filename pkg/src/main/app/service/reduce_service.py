# SPDX-License-Identifier: MIT
"""Similarity reduction service"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping

from src.main.app.core.expr import Expr
from src.main.app.core.ode import OdeSystem
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.model.reduction_model import Reduction
from src.main.app.schema.report_schema import Report


class ReduceService(ABC):
    @abstractmethod
    def travelling_wave(self, speed: Expr, f: FSpec | None = None) -> Reduction: ...

    @abstractmethod
    def scaling(self, family: FFamily) -> Reduction: ...

    @abstractmethod
    def derive_ode(self, reduction: Reduction, f: FSpec) -> Expr: ...

    @abstractmethod
    def table3_ode(self, i: int, params: Mapping[str, Expr] | None = None) -> Expr: ...

    @abstractmethod
    def check_table3(
        self, i: int, params: Mapping[str, Expr], *, seed: int | None = None
    ) -> Report: ...

    @abstractmethod
    def first_integral(self, n: int) -> tuple[Expr, Expr]: ...

    @abstractmethod
    def check_first_integral(
        self, ode: Expr, candidate: Expr, multiplier: Expr, *, seed: int | None = None
    ) -> Report: ...

    @abstractmethod
    def ode_system(
        self, reduction: Reduction, params: Mapping[str, float], *, integrated: bool = False
    ) -> OdeSystem: ...
