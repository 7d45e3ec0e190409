# SPDX-License-Identifier: MIT
"""Adaptive integration of first-order systems with dense output."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np
from fastlib.logging import logger
from scipy.integrate import solve_ivp

from src.main.app.config import get_numeric_config
from src.main.app.core.ode import OdeSystem
from src.main.app.exception import NumericErrorCode, NumericException
from src.main.app.model.sampled_model import SampledFunction

Rhs = Callable[[float, np.ndarray], np.ndarray]


def _blow_up_event(threshold: float):
    def event(_s: float, y: np.ndarray) -> float:
        return threshold - abs(y[0])

    event.terminal = True
    return event


def integrate(
    rhs: Rhs | OdeSystem,
    y0: Sequence[float],
    span: tuple[float, float],
    tol: float | None = None,
    *,
    points: int = 201,
    var_name: str = "z",
    meta: dict | None = None,
) -> SampledFunction:
    """
    Integrate y' = rhs(s, y) over ``span`` with an embedded 8(5,3) pair.

    The relative tolerance is ``tol`` and the absolute tolerance a hundredth of
    it. A state growing past the blow-up threshold stops the integration.
    """
    cfg = get_numeric_config()
    tol = cfg.ode_tol if tol is None else tol
    system = rhs if isinstance(rhs, OdeSystem) else None
    fn = rhs.rhs if isinstance(rhs, OdeSystem) else rhs
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise NumericException(NumericErrorCode.INVALID_INITIAL_DATA, f"y0={y0.tolist()}")

    grid = np.linspace(span[0], span[1], points)
    try:
        solution = solve_ivp(
            fn,
            span,
            y0,
            method="DOP853",
            t_eval=grid,
            dense_output=True,
            rtol=tol,
            atol=tol * 1e-2,
            events=_blow_up_event(cfg.blow_up_threshold),
        )
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise NumericException(NumericErrorCode.DOMAIN_VIOLATION, str(exc)) from exc

    if solution.status == -1:
        where = float(solution.t[-1]) if len(solution.t) else span[0]
        raise NumericException(
            NumericErrorCode.STEP_UNDERFLOW,
            solution.message,
            details={"at": where},
        )
    if solution.status == 1:
        where = float(solution.t_events[0][0])
        raise NumericException(
            NumericErrorCode.BLOW_UP, f"|h| exceeds the threshold at {where}", details={"at": where}
        )

    values = solution.y.T
    derivatives = np.array([fn(s, y) for s, y in zip(solution.t, values)])
    logger.debug(f"Integrated over {span} with {solution.nfev} evaluations")
    return SampledFunction(
        grid=solution.t,
        values=values,
        derivatives=derivatives,
        interpolant=solution.sol,
        system=system,
        var_name=var_name,
        meta={**(meta or {}), "tol": tol},
    )


def flow(rhs: Rhs, y0: Sequence[float], s_from: float, s_to: float, tol: float = 1e-12):
    """State at ``s_to`` of the trajectory through (s_from, y0); either direction."""
    y0 = np.asarray(y0, dtype=float)
    if s_to == s_from:
        return y0
    solution = solve_ivp(rhs, (s_from, s_to), y0, method="DOP853", rtol=tol, atol=tol * 1e-2)
    if solution.status != 0:
        raise NumericException(
            NumericErrorCode.STEP_UNDERFLOW,
            solution.message,
            details={"at": float(solution.t[-1])},
        )
    return solution.y[:, -1]
