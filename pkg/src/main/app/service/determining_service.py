# SPDX-License-Identifier: MIT
"""Determining system service"""

from __future__ import annotations

from abc import ABC, abstractmethod

from src.main.app.model.equation_model import DeterminingSystem, FSpec
from src.main.app.model.field_model import Candidate, VectorField
from src.main.app.schema.report_schema import Report


class DeterminingService(ABC):
    @abstractmethod
    def build_classical(self, f: FSpec) -> DeterminingSystem: ...

    @abstractmethod
    def build_nonclassical(self, f: FSpec) -> DeterminingSystem: ...

    @abstractmethod
    def residuals(
        self,
        system: DeterminingSystem,
        candidate: Candidate,
        *,
        trials: int | None = None,
        tol: float | None = None,
        seed: int | None = None,
        max_workers: int | None = None,
    ) -> Report: ...

    @abstractmethod
    def verify_generator(
        self, f: FSpec, field: VectorField, *, seed: int | None = None
    ) -> Report: ...

    @abstractmethod
    def normalize_generator(self, field: VectorField) -> Candidate: ...
