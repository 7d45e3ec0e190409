# SPDX-License-Identifier: MIT
"""Similarity reduction service implementation"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping

import sympy
from fastlib.logging import logger

from src.main.app.config import get_expr_config
from src.main.app.core.expr import Expr, equiv_check, normalize, ode_jets, symbol, t, x, z
from src.main.app.core.ode import OdeSystem, make_monic
from src.main.app.core.parser import render
from src.main.app.core.similarity import H, equation_on_ansatz, z_derivative, z_derivative_n
from src.main.app.enums.enum import FamilyTag, ReductionKind
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.model.reduction_model import Reduction
from src.main.app.schema.report_schema import CheckRow, Report
from src.main.app.service.reduce_service import ReduceService

G = ode_jets(10, "g")
K1, K2, K = symbol("k1"), symbol("k2"), symbol("k")

_FIRST_INTEGRALS = {
    2: (
        (z**3 / 4 + H[0] * K * z) * H[1] + H[0] * z**2 + z * H[3] - H[0] ** 2 * K / 2 - H[2],
        z,
    ),
    3: ((z**2 / 4 + H[0] ** 2 * K) * H[1] + 3 * H[0] * z / 4 + H[3], sympy.Integer(1)),
    -1: ((z**2 / 4 + K / H[0] ** 2) * H[1] - H[0] * z / 4 + H[3], sympy.Integer(1)),
}


def _params(values: Mapping[str, object] | None) -> dict[str, Expr]:
    return {name: sympy.sympify(value) for name, value in (values or {}).items()}


def _param(values: Mapping[str, Expr], name: str) -> Expr:
    return values.get(name, symbol(name))


def _family_for(i: int, values: Mapping[str, Expr]) -> FFamily:
    common = {name: _param(values, name) for name in ("d", "a", "b", "c")}
    if i == 1:
        return FFamily.power(n=_param(values, "n"), k=1, **common)
    if i == 2:
        return FFamily.log(k=1, **common)
    if i == 3:
        return FFamily.exp(k=1, **common)
    raise ValueError(f"Reduced equation index must be 1, 2 or 3, got {i}")


def _equivalence_row(label: str, lhs: Expr, rhs: Expr, seed: int | None):
    result = equiv_check(lhs, rhs, seed=seed)
    if result.exact:
        status = "exact"
    else:
        status = "numeric" if result.equivalent else "failed"
    row = CheckRow(
        index=0,
        label=label,
        status=status,
        residual=result.max_deviation,
        detail=None if result.failing_point is None else str(result.failing_point),
    )
    return row, result


def _expand_powers(e: Expr) -> Expr:
    """Split products inside powers until t appears only as t^e factors."""
    for _ in range(6):
        nxt = sympy.expand(sympy.powdenest(sympy.expand(e, force=True), force=True), force=True)
        if nxt == e:
            break
        e = nxt
    return e


class ReduceServiceImpl(ReduceService):
    def travelling_wave(self, speed: Expr, f: FSpec | None = None) -> Reduction:
        f = f or FSpec()
        speed = sympy.sympify(speed)
        reduction = Reduction(
            kind=ReductionKind.TRAVELLING_WAVE,
            f=f,
            invariant=x - speed * t,
            ansatz=H[0],
            speed=speed,
        )
        reduction.ode, reduction.separation_factor = self._derive(reduction, f)
        reduction.integrated = H[2] + (speed**2 - 1) * H[0] + f.applied(H[0]) - K1 * z - K2
        return reduction

    def scaling(self, family: FFamily) -> Reduction:
        family = family.as_power()
        p = family.params
        if family.tag == FamilyTag.POWER:
            ansatz = t ** (1 / (1 - p["n"])) * H[0] - p["b"] / p["a"]
        elif family.tag == FamilyTag.LOG:
            ansatz = t * H[0] - p["b"] / p["a"]
        elif family.tag == FamilyTag.EXP:
            ansatz = -sympy.log(t * H[0]) / p["a"]
        else:
            raise AnalysisException(
                AnalysisErrorCode.INVALID_FAMILY,
                f"No scaling reduction for the {family.tag.value} family",
            )
        f = FSpec(family.f_expr())
        reduction = Reduction(
            kind=ReductionKind.SCALING,
            f=f,
            invariant=x / sympy.sqrt(t),
            ansatz=ansatz,
            family=family,
        )
        reduction.ode, reduction.separation_factor = self._derive(reduction, f)
        return reduction

    def derive_ode(self, reduction: Reduction, f: FSpec) -> Expr:
        ode, _ = self._derive(reduction, f)
        return ode

    def _derive(self, reduction: Reduction, f: FSpec) -> tuple[Expr, Expr]:
        substituted = equation_on_ansatz(reduction.invariant, reduction.ansatz, f)
        if reduction.kind == ReductionKind.TRAVELLING_WAVE:
            back = {x: z + reduction.speed * t}
        else:
            back = {x: z * sympy.sqrt(t)}
        expanded = _expand_powers(substituted.xreplace(back))

        groups: dict[Expr, Expr] = defaultdict(lambda: sympy.Integer(0))
        for term in sympy.Add.make_args(expanded):
            coefficient, exponent = term.as_coeff_exponent(t)
            if coefficient.has(t):
                raise AnalysisException(
                    AnalysisErrorCode.SEPARATION_FAILURE, f"Term {term} is not a power of t"
                )
            groups[sympy.cancel(sympy.together(exponent))] += coefficient
        live = {}
        for exponent, coefficient in groups.items():
            value = normalize(coefficient)
            if value != 0:
                live[exponent] = value
        if len(live) != 1:
            raise AnalysisException(
                AnalysisErrorCode.SEPARATION_FAILURE,
                details={"t_exponents": sorted(str(e) for e in live)},
            )
        (exponent, ode), = live.items()
        logger.debug(f"{reduction.kind.value}: divided by t^({exponent})")
        return make_monic(ode), t**exponent

    def table3_ode(self, i: int, params: Mapping[str, Expr] | None = None) -> Expr:
        h0, h1, h2, _, h4 = H[:5]
        n, k, d = symbol("n"), K, symbol("d")
        if i == 1:
            ode = (
                h4
                + (z**2 / 4 + k * h0 ** (n - 1)) * h2
                + k * (n - 1) * h0 ** (n - 2) * h1**2
                + (z / (n - 1) + 3 * z / 4) * h1
                + n * h0 / (n - 1) ** 2
            )
        elif i == 2:
            ode = 4 * h0**2 * h4 + 4 * d * (h0 * h2 - h1**2) + h0**2 * (z**2 * h2 - z * h1)
        elif i == 3:
            g0, g1, _, g3 = G[:4]
            ode = (
                4 * g0 * g3
                + z**2 * g1**2
                + 2 * z**2
                - z * g0
                + K1 * z
                + K2
                - d * sympy.exp(-g1)
            )
        else:
            raise ValueError(f"Reduced equation index must be 1, 2 or 3, got {i}")
        values = _params(params)
        return ode.xreplace({symbol(name): value for name, value in values.items()})

    def check_table3(
        self, i: int, params: Mapping[str, Expr], *, seed: int | None = None
    ) -> Report:
        values = _params(params)
        family = _family_for(i, values)
        derived = self.scaling(family).ode
        if i == 1:
            p = family.params
            values = {**values, "k": p["n"] * p["d"] * p["a"] ** p["n"]}
        printed = self.table3_ode(i, values)
        jets = H
        if i == 3:
            # printed form is in g with h = exp(g'), integrated twice
            profile = sympy.exp(G[1])
            derived = derived.xreplace({H[j]: z_derivative_n(profile, j, G) for j in range(5)})
            printed = z_derivative_n(printed, 2, G)
            jets = G
        lhs, rhs = make_monic(derived, jets), make_monic(printed, jets)
        row, result = _equivalence_row(f"reduced equation {i}", lhs, rhs, seed)
        report = Report.from_rows(
            f"scaling reduction {i}",
            [row],
            get_expr_config().equiv_tol,
            seed=result.seed,
            sample_points=result.points[:5],
            notes=[f"derived: {render(lhs)} = 0", f"printed: {render(rhs)} = 0"],
        )
        logger.info(f"Reduced equation {i}: passed={report.passed}")
        return report

    def first_integral(self, n: int) -> tuple[Expr, Expr]:
        if n not in _FIRST_INTEGRALS:
            raise AnalysisException(
                AnalysisErrorCode.INVALID_FAMILY, f"No first integral recorded for n={n}"
            )
        return _FIRST_INTEGRALS[n]

    def check_first_integral(
        self, ode: Expr, candidate: Expr, multiplier: Expr, *, seed: int | None = None
    ) -> Report:
        row, result = _equivalence_row(
            "first integral", z_derivative(candidate), sympy.expand(multiplier * ode), seed
        )
        return Report.from_rows(
            "first integral",
            [row],
            get_expr_config().equiv_tol,
            seed=result.seed,
            sample_points=result.points[:5],
        )

    def ode_system(
        self,
        reduction: Reduction,
        params: Mapping[str, float],
        *,
        integrated: bool = False,
    ) -> OdeSystem:
        ode = reduction.integrated if integrated else reduction.ode
        if ode is None:
            raise AnalysisException(AnalysisErrorCode.UNBOUND_SYMBOL, "Reduction has no ODE")
        values = {symbol(name): sympy.sympify(value) for name, value in params.items()}
        return OdeSystem(reduction.f.instantiate(ode.xreplace(values)))
