# SPDX-License-Identifier: MIT
"""Documents emitted by the analysis commands"""

from __future__ import annotations

from typing import Annotated, Any

from pydantic import BaseModel, Field

from src.main.app.schema.report_schema import SCHEMA_VERSION, Report


class _Document(BaseModel):
    schema_version: Annotated[int, Field(alias="schema")] = SCHEMA_VERSION

    model_config = {"populate_by_name": True}

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class DeterminingSystemDocument(_Document):
    method: str
    f: str
    equation_count: int
    equations: list[str]
    basis: list[str]
    metadata: dict[str, Any] = Field(default_factory=dict)
    passed: bool = True


class GeneratorEntry(BaseModel):
    name: str
    text: str


class ClassificationDocument(_Document):
    f: str
    family: str
    params: dict[str, str]
    generators: list[GeneratorEntry]
    ansatz_generators: list[GeneratorEntry] = Field(default_factory=list)
    spans_agree: bool | None = None
    notes: list[str] = Field(default_factory=list)
    passed: bool = True


class ReductionDocument(_Document):
    kind: str
    family: str
    invariant: str
    ansatz: str
    ode: str
    integrated: str | None = None
    separation_factor: str
    report: Report | None = None
    passed: bool = True


class SolveDocument(_Document):
    what: str
    parameters: dict[str, float]
    output: str | None = None
    points: int
    report: Report | None = None
    passed: bool = True
