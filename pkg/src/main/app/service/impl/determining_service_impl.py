# SPDX-License-Identifier: MIT
"""Determining system service implementation"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import sympy
from fastlib.logging import logger

from src.main.app.config import get_expr_config, get_numeric_config
from src.main.app.core.expr import (
    Expr,
    equiv_check,
    jet_index,
    jet_symbol,
    jets_of,
    node_count,
    normalize,
    parameters_of,
    substitute_unknowns,
    t,
    u,
    x,
)
from src.main.app.core.jet import apply_prolonged, prolong, total_derivative
from src.main.app.core.pde import U_XXXX, boussinesq, solved_for_utt
from src.main.app.enums.enum import Method
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.equation_model import DeterminingSystem, FSpec
from src.main.app.model.field_model import P, Q, R, Candidate, VectorField
from src.main.app.schema.report_schema import CheckRow, Report
from src.main.app.service.determining_service import DeterminingService

_EXACT_CANCEL_LIMIT = 4000


def _primitive(e: Expr) -> Expr:
    _, primitive = e.as_content_primitive()
    if primitive.could_extract_minus_sign():
        primitive = -primitive
    return primitive


def _degree(monomial: Expr) -> int:
    powers = monomial.as_powers_dict()
    return sum(int(e) for b, e in powers.items() if b != 1)


def split_on_jets(e: Expr, generators: list[sympy.Symbol]) -> tuple[list[Expr], list[Expr]]:
    """Group terms of an expanded expression by their monomial in ``generators``."""
    groups: dict[Expr, list[Expr]] = defaultdict(list)
    for term in sympy.Add.make_args(sympy.expand(e)):
        coefficient, monomial = term.as_independent(*generators, as_Add=False)
        groups[monomial].append(coefficient)
    equations: list[Expr] = []
    basis: list[Expr] = []
    seen: set[Expr] = set()
    for monomial in sorted(groups, key=lambda m: (_degree(m), str(m))):
        equation = normalize(sympy.Add(*groups[monomial]))
        if equation == 0:
            continue
        key = _primitive(equation)
        if key in seen:
            continue
        seen.add(key)
        equations.append(equation)
        basis.append(monomial)
    return equations, basis


def _eliminate(e: Expr, rules: dict) -> Expr:
    """Apply jet substitution rules until no ruled jet remains."""
    for _ in range(16):
        present = [s for s in e.free_symbols if s in rules]
        if not present:
            return sympy.expand(e)
        e = sympy.expand(e.xreplace({s: rules[s] for s in present}))
    raise AnalysisException(
        AnalysisErrorCode.EXPANSION_OVERFLOW, "Jet elimination did not terminate"
    )


def _principal_rules(rhs_utt: Expr, jets: list[sympy.Symbol]) -> dict:
    """u_{x^i t^j} for j >= 2 expressed through jets with at most one t."""
    rules: dict[sympy.Symbol, Expr] = {}

    def value(i: int, j: int) -> Expr:
        s = jet_symbol(i, j)
        if s not in rules:
            if j == 2:
                raw = rhs_utt
                for _ in range(i):
                    raw = total_derivative(raw, "x")
            else:
                raw = total_derivative(value(i, j - 1), "t")
            for needed in raw.free_symbols:
                index = jet_index(needed)
                if index and index[1] >= 2:
                    value(*index)
            rules[s] = raw
        return rules[s]

    for s in jets:
        i, j = jet_index(s)
        if j >= 2:
            value(i, j)
    return rules


def _surface_rules(p: Expr, r: Expr, jets: list[sympy.Symbol]) -> dict:
    """Consequences of u_t = r - p u_x expressed through x-derivatives only."""
    rules: dict[sympy.Symbol, Expr] = {}
    base = r - p * jet_symbol(1, 0)

    def value(i: int, j: int) -> Expr:
        s = jet_symbol(i, j)
        if s not in rules:
            if j == 1:
                raw = base
                for _ in range(i):
                    raw = total_derivative(raw, "x")
            else:
                raw = total_derivative(value(i, j - 1), "t")
                raw = _eliminate(raw, _surface_rules_for(raw, value))
            rules[s] = sympy.expand(raw)
        return rules[s]

    for s in jets:
        i, j = jet_index(s)
        if j >= 1:
            value(i, j)
    return rules


def _surface_rules_for(e: Expr, value) -> dict:
    rules = {}
    for s in e.free_symbols:
        index = jet_index(s)
        if index and index[1] >= 1:
            rules[s] = value(*index)
    return rules


def _leading_x_rules(rhs4: Expr, jets: list[sympy.Symbol]) -> dict:
    """u_xxxx and its x-derivatives on the equation, in terms of u_x .. u_xxx."""
    rules = {U_XXXX: rhs4}
    top = max((jet_index(s)[0] for s in jets), default=4)
    current = rhs4
    for i in range(5, top + 1):
        current = _eliminate(total_derivative(current, "x"), rules)
        rules[jet_symbol(i, 0)] = current
    return rules


@lru_cache(maxsize=1)
def _classical_symbolic() -> DeterminingSystem:
    field = VectorField.symbolic()
    lhs = boussinesq()
    needed = [jet_index(s) for s in jets_of(lhs)]
    prolonged = prolong(field, 4, only=needed)
    condition = apply_prolonged(prolonged, lhs)
    rules = _principal_rules(solved_for_utt(), jets_of(condition))
    reduced = _eliminate(condition, rules)
    equations, basis = split_on_jets(reduced, jets_of(reduced, min_order=1))
    logger.info(f"Classical determining system: {len(equations)} equations")
    return DeterminingSystem(
        method=Method.CLASSICAL,
        f=FSpec(),
        equations=equations,
        basis=basis,
        unknowns=(P, Q, R),
        metadata={
            "prolongation_order": 4,
            "elimination": "u_tt and its x-derivatives replaced through the equation",
            "eliminated": sorted(str(s) for s in rules),
            "free_jets": len(basis),
            "node_limit": get_expr_config().node_limit,
        },
    )


@lru_cache(maxsize=1)
def _nonclassical_symbolic() -> DeterminingSystem:
    p, r = P(x, t, u), R(x, t, u)
    field = VectorField(p, 1, r)
    lhs = boussinesq()
    needed = [jet_index(s) for s in jets_of(lhs)]
    prolonged = prolong(field, 4, only=needed)
    condition = apply_prolonged(prolonged, lhs)

    on_surface = _eliminate(condition, _surface_rules(p, r, jets_of(condition)))
    lhs_on_surface = _eliminate(lhs, _surface_rules(p, r, jets_of(lhs)))
    if sympy.diff(lhs_on_surface, U_XXXX) != 1:
        raise AnalysisException(
            AnalysisErrorCode.SEPARATION_FAILURE, "Equation is not solvable for u_xxxx"
        )
    rhs4 = sympy.expand(U_XXXX - lhs_on_surface)
    leading = _leading_x_rules(rhs4, jets_of(on_surface))
    reduced = _eliminate(on_surface, leading)
    equations, basis = split_on_jets(reduced, jets_of(reduced, min_order=1))
    logger.info(f"Nonclassical determining system: {len(equations)} equations")
    return DeterminingSystem(
        method=Method.NONCLASSICAL,
        f=FSpec(),
        equations=equations,
        basis=basis,
        unknowns=(P, R),
        fixed={"q": sympy.Integer(1)},
        metadata={
            "prolongation_order": 4,
            "elimination": "u_t on the surface u_t = r - p u_x, u_xxxx through the equation",
            "eliminated": sorted(str(s) for s in leading),
            "free_jets": len(basis),
            "node_limit": get_expr_config().node_limit,
        },
    )


def _instantiated(system: DeterminingSystem, f: FSpec) -> DeterminingSystem:
    if f.is_symbolic:
        return system
    equations: list[Expr] = []
    basis: list[Expr] = []
    seen: set[Expr] = set()
    for equation, monomial in zip(system.equations, system.basis):
        value = normalize(f.instantiate(equation))
        if value == 0:
            continue
        key = _primitive(value)
        if key in seen:
            continue
        seen.add(key)
        equations.append(value)
        basis.append(monomial)
    return DeterminingSystem(
        method=system.method,
        f=f,
        equations=equations,
        basis=basis,
        unknowns=system.unknowns,
        fixed=dict(system.fixed),
        metadata={**system.metadata, "free_jets": len(basis)},
    )


def _exactly_zero(value: Expr) -> bool:
    try:
        expanded = normalize(value)
    except AnalysisException:
        return False
    if expanded == 0:
        return True
    if node_count(expanded) > _EXACT_CANCEL_LIMIT:
        return False
    return sympy.cancel(sympy.together(expanded)) == 0


class DeterminingServiceImpl(DeterminingService):
    def build_classical(self, f: FSpec) -> DeterminingSystem:
        return _instantiated(_classical_symbolic(), f)

    def build_nonclassical(self, f: FSpec) -> DeterminingSystem:
        return _instantiated(_nonclassical_symbolic(), f)

    def residuals(
        self,
        system: DeterminingSystem,
        candidate: Candidate,
        *,
        trials: int | None = None,
        tol: float | None = None,
        seed: int | None = None,
        max_workers: int | None = None,
    ) -> Report:
        cfg = get_expr_config()
        if tol is None:
            # candidates built on a sampled time profile carry its integration error
            numeric = candidate.time_jets is not None
            tol = get_numeric_config().nonclassical_tol if numeric else cfg.equiv_tol
        seed = cfg.seed if seed is None else seed
        if system.method == Method.NONCLASSICAL and candidate.q is not None:
            if sympy.simplify(candidate.q - 1) != 0:
                raise AnalysisException(
                    AnalysisErrorCode.UNBOUND_SYMBOL,
                    "Nonclassical candidates are normalized to q = 1",
                )
        self._check_parameters(system, candidate)

        functions = candidate.functions()
        if system.method == Method.NONCLASSICAL:
            functions.pop(Q, None)
        boxes, derived, sample_also = self._sampling(candidate)

        def check(item: tuple[int, Expr]) -> tuple[CheckRow, list[dict[str, float]]]:
            index, equation = item
            label = str(system.basis[index])
            value = system.f.instantiate(
                substitute_unknowns(equation, functions, candidate.partial)
            )
            if _exactly_zero(value):
                return CheckRow(index=index, label=label, status="exact"), []
            result = equiv_check(
                value,
                sympy.Integer(0),
                trials=trials,
                tol=tol,
                seed=seed,
                boxes=boxes,
                derived=derived,
                exact_first=False,
                sample_also=sample_also,
            )
            status = "numeric" if result.equivalent else "failed"
            row = CheckRow(
                index=index,
                label=label,
                status=status,
                residual=result.max_deviation,
                detail=None if result.failing_point is None else str(result.failing_point),
            )
            return row, result.points

        items = list(enumerate(system.equations))
        if max_workers and max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                outcomes = list(pool.map(check, items))
        else:
            outcomes = [check(item) for item in items]

        rows = [row for row, _ in outcomes]
        worst_points: list[dict[str, float]] = []
        worst = -1.0
        for row, points in outcomes:
            if points and row.residual > worst:
                worst, worst_points = row.residual, points
        report = Report.from_rows(
            f"{system.method.value} residuals",
            rows,
            tol,
            seed=seed,
            sample_points=worst_points,
        )
        logger.info(
            f"Residuals of {len(rows)} equations: passed={report.passed}, "
            f"max={report.max_residual:.3e}"
        )
        return report

    def verify_generator(
        self, f: FSpec, field: VectorField, *, seed: int | None = None
    ) -> Report:
        return self.residuals(self.build_classical(f), Candidate.of(field), seed=seed)

    def normalize_generator(self, field: VectorField) -> Candidate:
        if field.q == 0:
            raise AnalysisException(
                AnalysisErrorCode.UNBOUND_SYMBOL, "Generator with q = 0 has no q = 1 form"
            )
        return Candidate(
            p=sympy.cancel(field.p / field.q), q=None, r=sympy.cancel(field.r / field.q)
        )

    @staticmethod
    def _check_parameters(system: DeterminingSystem, candidate: Candidate) -> None:
        allowed = set() if system.f.is_symbolic else set(parameters_of(system.f.expr))
        if candidate.time_jets is not None:
            allowed |= set(candidate.time_jets.symbols)
        for name, value in (("p", candidate.p), ("q", candidate.q), ("r", candidate.r)):
            if value is None:
                continue
            extra = [s for s in parameters_of(sympy.sympify(value)) if s not in allowed]
            if extra and not system.f.is_symbolic:
                raise AnalysisException(
                    AnalysisErrorCode.UNBOUND_PARAMETER,
                    f"{name} contains {sorted(s.name for s in extra)}",
                )

    @staticmethod
    def _sampling(candidate: Candidate):
        jets = candidate.time_jets
        if jets is None:
            return None, None, ()
        values_at = lru_cache(maxsize=512)(jets.values)

        def lookup(point, s):
            return values_at(point[t])[s]

        derived = {s: (lambda point, s=s: lookup(point, s)) for s in jets.symbols}
        return {"t": jets.t_range}, derived, (t,)
