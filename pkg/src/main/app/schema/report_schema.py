# SPDX-License-Identifier: MIT
"""Check report schema"""

from __future__ import annotations

from typing import Annotated, Any, Literal

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class CheckRow(BaseModel):
    """One checked item: an equation, a sample point or a comparison"""

    index: int
    label: str
    status: Annotated[
        Literal["exact", "numeric", "failed", "error"],
        Field(description="exact: vanished symbolically; numeric: sampled within tolerance"),
    ]
    residual: float = 0.0
    detail: str | None = None


class Report(BaseModel):
    """Verdict of a verification; ``passed`` implies ``max_residual <= tolerance``"""

    schema_version: Annotated[int, Field(alias="schema")] = SCHEMA_VERSION
    label: str
    passed: bool
    max_residual: float = 0.0
    tolerance: float
    seed: int | None = None
    rows: list[CheckRow] = Field(default_factory=list)
    sample_points: list[dict[str, float]] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)

    model_config = {"populate_by_name": True}

    @classmethod
    def from_rows(
        cls,
        label: str,
        rows: list[CheckRow],
        tolerance: float,
        **kwargs,
    ) -> Report:
        worst = max((row.residual for row in rows), default=0.0)
        passed = all(row.status in ("exact", "numeric") for row in rows) and worst <= tolerance
        return cls(
            label=label,
            passed=passed,
            max_residual=worst,
            tolerance=tolerance,
            rows=rows,
            **kwargs,
        )

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class ErrorDocument(BaseModel):
    schema_version: Annotated[int, Field(alias="schema")] = SCHEMA_VERSION
    command: str
    passed: Literal[False] = False
    error: dict

    model_config = {"populate_by_name": True}

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    @classmethod
    def from_exception(cls, command: str, exc: Any) -> ErrorDocument:
        error: dict[str, Any] = {"code": int(exc.code.code), "message": exc.message}
        if exc.details is not None:
            error["details"] = exc.details
        return cls(command=command, error=error)
