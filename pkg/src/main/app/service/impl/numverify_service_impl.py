# SPDX-License-Identifier: MIT
"""Numerical verification service implementation"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor

import sympy
from fastlib.logging import logger

from src.main.app.config import get_numeric_config
from src.main.app.core.expr import Expr, symbol, t, u, x
from src.main.app.core.integrate import Rhs, flow, integrate
from src.main.app.core.ode import OdeSystem
from src.main.app.core.similarity import H, ansatz_derivatives
from src.main.app.exception import (
    AnalysisErrorCode,
    AnalysisException,
    NumericErrorCode,
    NumericException,
)
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.model.reduction_model import Reduction
from src.main.app.model.sampled_model import SampledFunction
from src.main.app.schema.report_schema import CheckRow, Report
from src.main.app.service.numverify_service import Field2, Field3, NumverifyService, Point
from src.main.app.utils.finite_difference import (
    derivative,
    first_derivative,
    fourth_derivative,
    second_derivative,
)

_JET_DEPTH = 4


def _nonlinearity(f: FSpec | FFamily | Expr) -> tuple[Callable, Callable]:
    """f'(u) and f''(u) as numeric callables."""
    if isinstance(f, FFamily):
        expr = f.f_expr()
    elif isinstance(f, FSpec):
        if f.is_symbolic:
            raise AnalysisException(
                AnalysisErrorCode.UNBOUND_SYMBOL, "Residuals need a concrete f"
            )
        expr = f.expr
    else:
        expr = sympy.sympify(f)
    extra = sorted(s.name for s in expr.free_symbols if s != u)
    if extra:
        raise AnalysisException(
            AnalysisErrorCode.UNBOUND_PARAMETER, f"f contains unbound symbols {extra}"
        )
    first = sympy.diff(expr, u)
    return (
        sympy.lambdify(u, first, modules="math"),
        sympy.lambdify(u, sympy.diff(first, u), modules="math"),
    )


def _check_bound(e: Expr, allowed: set, what: str) -> None:
    extra = sorted(s.name for s in e.free_symbols if s not in allowed)
    if extra:
        raise AnalysisException(
            AnalysisErrorCode.UNBOUND_PARAMETER, f"{what} contains unbound symbols {extra}"
        )


def _point_label(point: Point) -> str:
    return f"x={point[0]:.6g}, t={point[1]:.6g}"


def _rows_report(label: str, points, values, tol: float, **kwargs) -> Report:
    rows = [
        CheckRow(
            index=index,
            label=_point_label(point),
            status="numeric" if abs(value) <= tol else "failed",
            residual=abs(value),
        )
        for index, (point, value) in enumerate(zip(points, values))
    ]
    worst = max(range(len(rows)), key=lambda i: rows[i].residual, default=None)
    sample = [] if worst is None else [{"x": points[worst][0], "t": points[worst][1]}]
    return Report.from_rows(label, rows, tol, sample_points=sample, **kwargs)


class NumverifyServiceImpl(NumverifyService):
    def integrate_ode(
        self,
        rhs: Rhs | OdeSystem,
        y0: Sequence[float],
        span: tuple[float, float],
        tol: float | None = None,
    ) -> SampledFunction:
        return integrate(rhs, y0, span, tol)

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
    ) -> Report:
        """
        u_tt - u_xx + f''(u) u_x^2 + f'(u) u_xx + u_xxxx at each point.

        Derivatives come from ``derivatives`` when given, otherwise from central
        differences of ``u``.
        """
        cfg = get_numeric_config()
        tol = cfg.residual_tol if tol is None else tol
        f1, f2 = _nonlinearity(f)
        hx, ht = steps or (cfg.fd_step, cfg.fd_step)
        h4 = cfg.fd_step_fourth
        refine = cfg.richardson
        if derivatives is None and u is None:
            raise AnalysisException(AnalysisErrorCode.UNBOUND_SYMBOL, "No u to differentiate")

        def by_differences(x0: float, t0: float) -> dict[str, float]:
            def along_x(s: float) -> float:
                return u(s, t0)

            def along_t(s: float) -> float:
                return u(x0, s)

            return {
                "u": u(x0, t0),
                "u_x": derivative(first_derivative, along_x, x0, hx, refine),
                "u_xx": derivative(second_derivative, along_x, x0, hx, refine),
                "u_t": derivative(first_derivative, along_t, t0, ht, refine),
                "u_tt": derivative(second_derivative, along_t, t0, ht, refine),
                "u_xxxx": derivative(fourth_derivative, along_x, x0, h4, refine),
            }

        source = derivatives or by_differences

        def residual(point: Point) -> float:
            d = source(*point)
            try:
                return (
                    d["u_tt"]
                    - d["u_xx"]
                    + f2(d["u"]) * d["u_x"] ** 2
                    + f1(d["u"]) * d["u_xx"]
                    + d["u_xxxx"]
                )
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise NumericException(
                    NumericErrorCode.DOMAIN_VIOLATION, f"f' or f'' undefined at u={d['u']}"
                ) from exc

        points = [(float(a), float(b)) for a, b in points]
        if max_workers and max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                values = list(pool.map(residual, points))
        else:
            values = [residual(p) for p in points]

        notes = (
            ["derivatives: symbolic jets"]
            if derivatives is not None
            else [f"steps: hx={hx}, ht={ht}, h4={h4}, richardson={refine}"]
        )
        report = _rows_report("PDE residual", points, values, tol, notes=notes)
        logger.info(
            f"PDE residual over {len(points)} points: max {report.max_residual:.3e}"
        )
        return report

    def verify_reduction(
        self,
        reduction: Reduction,
        h: SampledFunction,
        grid: Sequence[Point],
        *,
        params: Mapping[str, float] | None = None,
        method: str = "symbolic",
        max_workers: int | None = None,
    ) -> Report:
        values = {symbol(name): sympy.sympify(v) for name, v in (params or {}).items()}
        invariant = reduction.invariant.xreplace(values)
        ansatz = reduction.ansatz.xreplace(values)
        if reduction.f.is_symbolic:
            raise AnalysisException(AnalysisErrorCode.UNBOUND_SYMBOL, "Reduction has symbolic f")
        f_expr = reduction.f.expr.xreplace(values)
        _check_bound(invariant, {x, t}, "invariant")

        z_of = sympy.lambdify((x, t), invariant, modules="math")
        lo, hi = h.span
        for point in grid:
            z_value = z_of(*point)
            if not lo <= z_value <= hi:
                raise NumericException(
                    NumericErrorCode.OUT_OF_SPAN,
                    f"z={z_value} at {_point_label(point)} outside [{lo}, {hi}]",
                    details={"z": z_value, "span": [lo, hi]},
                )

        if method == "symbolic":
            jets = H[: _JET_DEPTH + 1]
            exprs = ansatz_derivatives(invariant, ansatz)
            fns = {}
            for name, e in exprs.items():
                _check_bound(e, {x, t, *jets}, name)
                fns[name] = sympy.lambdify((x, t, *jets), e, modules="math")

            def derivatives(x0: float, t0: float) -> dict[str, float]:
                jet = h.jet(z_of(x0, t0), _JET_DEPTH)
                return {name: fn(x0, t0, *jet) for name, fn in fns.items()}

            report = self.pde_residual(
                None, f_expr, grid, derivatives=derivatives, max_workers=max_workers
            )
        elif method == "finite_difference":
            _check_bound(ansatz, {x, t, H[0]}, "ansatz")
            ansatz_fn = sympy.lambdify((x, t, H[0]), ansatz, modules="math")

            def u_of(x0: float, t0: float) -> float:
                return ansatz_fn(x0, t0, h(z_of(x0, t0)))

            report = self.pde_residual(u_of, f_expr, grid, max_workers=max_workers)
        else:
            raise ValueError(f"Unknown method {method!r}")
        report.label = f"{reduction.kind.value} reduction residual"
        return report

    def verify_surface_condition(
        self,
        p: Field2,
        r: Field3,
        u: Field2,
        points: Sequence[Point],
        *,
        tol: float | None = None,
    ) -> Report:
        """p u_x + u_t - r at each point, derivatives by central differences."""
        cfg = get_numeric_config()
        tol = cfg.surface_tol if tol is None else tol
        step = cfg.fd_step
        values = []
        points = [(float(a), float(b)) for a, b in points]
        for x0, t0 in points:
            u_x = derivative(first_derivative, lambda s: u(s, t0), x0, step, cfg.richardson)
            u_t = derivative(first_derivative, lambda s: u(x0, s), t0, step, cfg.richardson)
            values.append(p(x0, t0) * u_x + u_t - r(x0, t0, u(x0, t0)))
        report = _rows_report("invariant surface condition", points, values, tol)
        logger.info(f"Surface condition: max {report.max_residual:.3e}")
        return report

    def build_invariant_solution(
        self, p: Field2, r: Field3, g: Callable[[float], float], t0: float
    ) -> Field2:
        """
        u with p u_x + u_t = r and u(x, t0) = g(x), by characteristics:
        x' = p(x, t) traced back to t0, then u' = r(x, t, u) forward.
        """

        def back(s, y):
            return [p(y[0], s)]

        def forward(s, y):
            return [p(y[0], s), r(y[0], s, y[1])]

        def solution(x0: float, t_value: float) -> float:
            (foot,) = flow(back, [x0], t_value, t0)
            _, value = flow(forward, [foot, g(foot)], t0, t_value)
            return float(value)

        return solution
