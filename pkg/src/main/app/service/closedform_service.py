# SPDX-License-Identifier: MIT
"""Closed-form solution service"""

from __future__ import annotations

from abc import ABC, abstractmethod

from src.main.app.enums.enum import FieldNormalization
from src.main.app.model.closedform_model import (
    NonclassicalAnsatz,
    NonclassicalFields,
    QuadratureSolution,
    WeierstrassParams,
)
from src.main.app.model.sampled_model import SampledFunction
from src.main.app.schema.report_schema import Report


class ClosedFormService(ABC):
    @abstractmethod
    def quadrature_relation(self, qs: QuadratureSolution, h: float) -> float: ...

    @abstractmethod
    def invert_quadrature(
        self, qs: QuadratureSolution, z: float, bracket: tuple[float, float]
    ) -> float: ...

    @abstractmethod
    def check_quadrature(
        self, qs: QuadratureSolution, h_end: float, *, points: int = 21
    ) -> Report: ...

    @abstractmethod
    def weierstrass(self, z: float, wp: WeierstrassParams) -> tuple[float, float]: ...

    @abstractmethod
    def weierstrass_params(self, qs: QuadratureSolution) -> WeierstrassParams: ...

    @abstractmethod
    def weierstrass_ode_check(
        self, wp: WeierstrassParams, z0: float, z1: float, *, points: int = 50
    ) -> Report: ...

    @abstractmethod
    def solve_h(
        self,
        k3: float,
        k4: float,
        t_span: tuple[float, float],
        h0: float,
        *,
        branch: int = 1,
        tol: float | None = None,
    ) -> SampledFunction: ...

    @abstractmethod
    def nonclassical_fields(
        self,
        na: NonclassicalAnsatz,
        normalization: FieldNormalization = FieldNormalization.COVARIANT,
    ) -> NonclassicalFields: ...
