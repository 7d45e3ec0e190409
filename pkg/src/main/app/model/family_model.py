# SPDX-License-Identifier: MIT
"""Nonlinearity family data model"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy

from src.main.app.core.expr import Expr, u
from src.main.app.enums.enum import FamilyTag
from src.main.app.exception import AnalysisErrorCode, AnalysisException

PARAMETER_NAMES: dict[FamilyTag, tuple[str, ...]] = {
    FamilyTag.POWER: ("d", "a", "b", "n", "k", "c"),
    FamilyTag.LOG: ("d", "a", "b", "k", "c"),
    FamilyTag.EXP: ("d", "a", "b", "k", "c"),
    FamilyTag.QUADRATIC: ("d", "b", "c"),
    FamilyTag.ARBITRARY: (),
}


def _is_zero(value: Expr) -> bool:
    return sympy.sympify(value).is_zero is True


@dataclass(frozen=True)
class FFamily:
    """
    A recognised form of f.

    power: d (a u + b)^n + k u + c; log: d log(a u + b) + k u + c;
    exp: d exp(a u + b) + k u + c; quadratic: d u^2 + b u + c.
    """

    tag: FamilyTag
    params: dict[str, Expr] = field(default_factory=dict)
    source: Expr | None = None

    def __post_init__(self) -> None:
        names = PARAMETER_NAMES[self.tag]
        values = {name: sympy.sympify(self.params.get(name, 0)) for name in names}
        if self.tag != FamilyTag.ARBITRARY:
            if _is_zero(values["d"]):
                raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, "d must be nonzero")
            if "a" in values and _is_zero(values["a"]):
                raise AnalysisException(AnalysisErrorCode.INVALID_FAMILY, "a must be nonzero")
        if self.tag == FamilyTag.POWER:
            n = values["n"]
            if _is_zero(n) or _is_zero(n - 1):
                raise AnalysisException(
                    AnalysisErrorCode.INVALID_FAMILY, "n must differ from 0 and 1"
                )
        object.__setattr__(self, "params", values)

    @classmethod
    def power(cls, d=1, a=1, b=0, n=2, k=1, c=0) -> FFamily:
        return cls(FamilyTag.POWER, dict(d=d, a=a, b=b, n=n, k=k, c=c))

    @classmethod
    def log(cls, d=1, a=1, b=0, k=1, c=0) -> FFamily:
        return cls(FamilyTag.LOG, dict(d=d, a=a, b=b, k=k, c=c))

    @classmethod
    def exp(cls, d=1, a=1, b=0, k=1, c=0) -> FFamily:
        return cls(FamilyTag.EXP, dict(d=d, a=a, b=b, k=k, c=c))

    @classmethod
    def quadratic(cls, d=1, b=0, c=0) -> FFamily:
        return cls(FamilyTag.QUADRATIC, dict(d=d, b=b, c=c))

    def __getitem__(self, name: str) -> Expr:
        return self.params[name]

    def f_expr(self) -> Expr:
        p = self.params
        if self.tag == FamilyTag.POWER:
            core = p["d"] * (p["a"] * u + p["b"]) ** p["n"]
        elif self.tag == FamilyTag.LOG:
            core = p["d"] * sympy.log(p["a"] * u + p["b"])
        elif self.tag == FamilyTag.EXP:
            core = p["d"] * sympy.exp(p["a"] * u + p["b"])
        elif self.tag == FamilyTag.QUADRATIC:
            return p["d"] * u**2 + p["b"] * u + p["c"]
        else:
            if self.source is None:
                raise AnalysisException(
                    AnalysisErrorCode.INVALID_FAMILY, "Arbitrary family without source"
                )
            return self.source
        return core + p["k"] * u + p["c"]

    def as_power(self) -> FFamily:
        """A quadratic written as d (u + b')^2 + u + c' with b' = (b - 1)/(2d)."""
        if self.tag != FamilyTag.QUADRATIC:
            return self
        d, b, c = self.params["d"], self.params["b"], self.params["c"]
        shift = (b - 1) / (2 * d)
        return FFamily.power(d=d, a=1, b=shift, n=2, k=1, c=sympy.expand(c - d * shift**2))

    def substitution(self) -> tuple[sympy.Symbol, Expr] | None:
        """The variable w = a u + b together with u written through it."""
        if self.tag not in (FamilyTag.POWER, FamilyTag.LOG, FamilyTag.EXP):
            return None
        w = sympy.Symbol("w")
        return w, (w - self.params["b"]) / self.params["a"]

    def has_unit_linear_coefficient(self) -> bool:
        if self.tag == FamilyTag.QUADRATIC:
            return True
        if self.tag == FamilyTag.ARBITRARY:
            return False
        return sympy.simplify(self.params["k"] - 1) == 0


@dataclass
class AnsatzSolution:
    """Generators found by the affine ansatz, rows of the reduced echelon basis."""

    fields: list
    notes: list[str] = field(default_factory=list)


@dataclass
class Classification:
    family: FFamily
    generators: list[tuple[str, object]]
    ansatz: AnsatzSolution | None = None
    spans_agree: bool | None = None
