# SPDX-License-Identifier: MIT
"""Classification service"""

from __future__ import annotations

from abc import ABC, abstractmethod

from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import AnsatzSolution, Classification, FFamily
from src.main.app.model.field_model import VectorField


class ClassifyService(ABC):
    @abstractmethod
    def detect_family(self, f: FSpec) -> FFamily: ...

    @abstractmethod
    def generators_for(self, family: FFamily) -> list[tuple[str, VectorField]]: ...

    @abstractmethod
    def ansatz_solve(self, f: FSpec) -> AnsatzSolution: ...

    @abstractmethod
    def classify(self, f: FSpec, *, with_ansatz: bool = True) -> Classification: ...
